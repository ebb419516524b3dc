from collections.abc import Mapping, Sequence

from loguru import logger

from domain.formulas import Formula
from domain.normal_form import rnnf
from domain.syntax import parse_formula
from domain.terms import SkolemApp
from herbrand.skolem.registry import SkolemRegistry
from herbrand.skolem.skolemize import Skolemized, skolemize


class Theory:
    """
    A finite set of closed axioms with their Skolemized forms, all sharing one
    Skolem registry.
    """

    def __init__(
        self,
        name: str,
        axioms: Sequence[Formula],
        registry: SkolemRegistry | None = None,
        aliases: Mapping[str, str] | None = None,
    ):
        self.name = name
        self.axioms = list(axioms)
        self.registry = registry if registry is not None else SkolemRegistry()
        self.skolemized: list[Skolemized] = [
            skolemize(f, self.registry) for f in self.axioms
        ]
        for label, text in (aliases or {}).items():
            self._attach_alias(label, text)

        logger.debug(
            f"[{self.name}] {len(self.axioms)} axioms, "
            f"{len(self.registry)} Skolem symbols"
        )

    def _attach_alias(self, label: str, text: str) -> None:
        symbol = self.registry.lookup(rnnf(parse_formula(text)))
        if symbol is None:
            raise ValueError(f"[{self.name}] ${label} names no Skolem symbol: {text}")
        self.registry.alias(label, symbol.symbol_id)

    def __len__(self) -> int:
        return len(self.axioms)

    def __repr__(self) -> str:
        return f"Theory(name={self.name!r}, axioms={len(self.axioms)})"

    def skolem_symbols(self) -> list[int]:
        """Ids of the Skolem symbols occurring in the Skolemized axioms."""
        found = {
            node.symbol_id
            for s in self.skolemized
            for atom in s.open.atoms()
            for side in (atom.l, atom.r)
            for node in side.nodes()
            if isinstance(node, SkolemApp)
        }
        return sorted(found)

    def extend(self, name: str, axioms: Sequence[Formula]) -> "Theory":
        """A larger theory over the same registry."""
        return Theory(name, [*self.axioms, *axioms], self.registry)
