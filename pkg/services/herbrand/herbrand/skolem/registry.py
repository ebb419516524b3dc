from collections.abc import Iterator

from loguru import logger

from domain.coding import Code, code_of_formula, code_of_label
from domain.core import Schema
from domain.formulas import Exists, Formula
from domain.normal_form import canonical_key
from domain.syntax import UnknownSymbolError


class SkolemSymbol(Schema):
    """
    A Skolem function symbol. `key` is the de Bruijn key of the existential
    formula it witnesses; fresh constants declared by name have no key.
    """

    symbol_id: int
    arity: int
    key: Formula | None = None
    label: str | None = None
    code: Code

    @property
    def name(self) -> str:
        return f"${self.symbol_id}"

    def describe(self) -> str:
        label = self.label or "-"
        definition = str(self.key) if self.key is not None else "(fresh constant)"
        return f"{self.name}  arity {self.arity}  {label}  {definition}"


class SkolemRegistry:
    """
    Ordered registry of Skolem symbols. Alpha-equivalent existential formulas
    share one symbol; registration is single-writer.
    """

    def __init__(self):
        self._symbols: list[SkolemSymbol] = []
        self._by_key: dict[Formula, int] = {}
        self._aliases: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self._symbols)

    def __iter__(self) -> Iterator[SkolemSymbol]:
        return iter(self._symbols)

    def __getitem__(self, symbol_id: int) -> SkolemSymbol:
        return self._symbols[symbol_id]

    def register(self, existential: Exists) -> SkolemSymbol:
        """
        Symbol for an existential subformula, keyed by its canonical form. Its
        arity is the number of free variables of the subformula.
        """
        key = canonical_key(existential)
        if (symbol_id := self._by_key.get(key)) is not None:
            return self._symbols[symbol_id]

        symbol = SkolemSymbol(
            symbol_id=len(self._symbols),
            arity=len(existential.free_vars()),
            key=key,
            code=code_of_formula(key),
        )
        self._symbols.append(symbol)
        self._by_key[key] = symbol.symbol_id
        logger.debug(f"Registered {symbol.name} for {key}")
        return symbol

    def lookup(self, existential: Formula) -> SkolemSymbol | None:
        symbol_id = self._by_key.get(canonical_key(existential))
        return None if symbol_id is None else self._symbols[symbol_id]

    def fresh_constant(self, label: str) -> SkolemSymbol:
        """A named 0-ary symbol with no defining formula, created once per label."""
        if (symbol_id := self._aliases.get(label)) is not None:
            symbol = self._symbols[symbol_id]
            if symbol.arity != 0:
                raise UnknownSymbolError(f"${label} is not a constant")
            return symbol

        symbol = SkolemSymbol(
            symbol_id=len(self._symbols),
            arity=0,
            label=label,
            code=code_of_label(label),
        )
        self._symbols.append(symbol)
        self._aliases[label] = symbol.symbol_id
        logger.debug(f"Declared fresh constant {symbol.name} as ${label}")
        return symbol

    def alias(self, label: str, symbol_id: int) -> None:
        if label.isdigit():
            raise ValueError(f"Alias '{label}' would shadow a symbol index")
        current = self._aliases.get(label)
        if current is not None and current != symbol_id:
            raise ValueError(
                f"Alias ${label} already names ${current}, cannot rename ${symbol_id}"
            )
        self._aliases[label] = symbol_id
        self._symbols[symbol_id] = self._symbols[symbol_id].model_copy(
            update={"label": label}
        )

    def aliases(self) -> dict[str, int]:
        return dict(self._aliases)

    def resolve(self, label: str, arity: int) -> int:
        if label.isdigit():
            symbol_id = int(label)
            if symbol_id >= len(self._symbols):
                raise UnknownSymbolError(f"Unknown Skolem symbol ${label}")
        elif (symbol_id := self._aliases.get(label)) is None:
            raise UnknownSymbolError(f"Unknown Skolem symbol ${label}")

        expected = self._symbols[symbol_id].arity
        if expected != arity:
            raise UnknownSymbolError(
                f"${label} takes {expected} arguments, got {arity}"
            )
        return symbol_id


class DeclaringSymbols:
    """Symbol table for term files: unknown `$name` constants become fresh."""

    def __init__(self, registry: SkolemRegistry):
        self.registry = registry

    def resolve(self, label: str, arity: int) -> int:
        try:
            return self.registry.resolve(label, arity)
        except UnknownSymbolError:
            if arity != 0 or label.isdigit() or label in self.registry.aliases():
                raise
            return self.registry.fresh_constant(label).symbol_id
