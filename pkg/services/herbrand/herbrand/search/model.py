"""
The finite Herbrand structure of an evaluation: its classes are the elements,
a function table maps argument classes to the class of an application term
found in the set, and the order of the classes gives <=.
"""

from loguru import logger
from pydantic import PrivateAttr

from domain.core import Schema
from domain.formulas import And, Eq, Formula, Implies, Le, Not, Or
from domain.terms import Term
from herbrand.evaluation.congruence import Evaluation
from herbrand.evaluation.pre_evaluation import PreEvaluation, TermNotInDomainError

TableKey = tuple[str, tuple[int, ...]]


class TableEntry(Schema):
    symbol: str
    args: tuple[int, ...] = ()
    value: int


class Clash(Schema):
    """An application whose class depends on the chosen representatives."""

    symbol: str
    args: tuple[int, ...] = ()
    values: list[int]


class FiniteHerbrandModel(Schema):
    universe: list[list[Term]]
    entries: list[TableEntry]
    leq: list[tuple[int, int]]
    clashes: list[Clash] = []

    _class_of: dict[Term, int] = PrivateAttr(default_factory=dict)
    _tables: dict[TableKey, int] = PrivateAttr(default_factory=dict)
    _leq: set[tuple[int, int]] = PrivateAttr(default_factory=set)

    def model_post_init(self, __context) -> None:
        self._class_of = {t: i for i, cls in enumerate(self.universe) for t in cls}
        self._tables = {(e.symbol, e.args): e.value for e in self.entries}
        self._leq = set(self.leq)

    def __len__(self) -> int:
        return len(self.universe)

    def class_of(self, t: Term) -> int | None:
        return self._class_of.get(t)

    def table(self, symbol: str) -> dict[tuple[int, ...], int]:
        return {e.args: e.value for e in self.entries if e.symbol == symbol}

    def apply(self, symbol: str, args: tuple[int, ...] = ()) -> int | None:
        return self._tables.get((symbol, args))

    def denote(self, t: Term) -> int | None:
        """
        The class a ground term denotes: its own class when it is in the set,
        else through the tables where they are defined, else None.
        """
        if (own := self._class_of.get(t)) is not None:
            return own
        args = [self.denote(c) for c in t.children()]
        if all(a is not None for a in args):
            return self.apply(t.symbol, tuple(a for a in args if a is not None))
        return None

    def _element(self, t: Term) -> int:
        if (value := self.denote(t)) is None:
            raise TermNotInDomainError(t)
        return value

    def holds(self, g: Formula) -> bool:
        """Truth of a ground open formula in the structure."""
        match g:
            case Eq(l=lhs, r=rhs):
                return self._element(lhs) == self._element(rhs)
            case Le(l=lhs, r=rhs):
                return (self._element(lhs), self._element(rhs)) in self._leq
            case Not(f=f):
                return not self.holds(f)
            case And(l=lhs, r=rhs):
                return self.holds(lhs) and self.holds(rhs)
            case Or(l=lhs, r=rhs):
                return self.holds(lhs) or self.holds(rhs)
            case Implies(l=lhs, r=rhs):
                return not self.holds(lhs) or self.holds(rhs)
        raise ValueError(f"Only ground open formulas can be evaluated, got {g}")

    def describe(self) -> list[str]:
        lines = [
            f"[{i}] {', '.join(str(t) for t in cls)}"
            for i, cls in enumerate(self.universe)
        ]
        for e in self.entries:
            args = f"({', '.join(f'[{a}]' for a in e.args)})" if e.args else ""
            lines.append(f"{e.symbol}{args} = [{e.value}]")
        for c in self.clashes:
            values = ", ".join(f"[{v}]" for v in c.values)
            lines.append(f"{c.symbol}{list(c.args)} is ill-defined: {values}")
        return lines


def extract_model(p: PreEvaluation) -> FiniteHerbrandModel:
    """
    Build the structure of an evaluation. Entries defined only up to the choice
    of representatives are reported as clashes and left out of the tables.

    Raises:
        NotAnEvaluationError: `p` is not a congruence on its domain.
    """
    if not isinstance(p, Evaluation):
        p = Evaluation.of(p)

    universe = [list(block) for block in p.blocks()]
    class_of = {t: i for i, block in enumerate(universe) for t in block}

    found: dict[TableKey, dict[int, None]] = {}
    for t in p.terms:
        children = t.children()
        if all(c in class_of for c in children):
            key = (t.symbol, tuple(class_of[c] for c in children))
            found.setdefault(key, {})[class_of[t]] = None

    entries: list[TableEntry] = []
    clashes: list[Clash] = []
    for (symbol, args), values in found.items():
        if len(values) == 1:
            (value,) = values
            entries.append(TableEntry(symbol=symbol, args=args, value=value))
            continue
        clash = Clash(symbol=symbol, args=args, values=sorted(values))
        logger.warning(
            f"{symbol}{list(args)} depends on representatives: {clash.values}"
        )
        clashes.append(clash)

    n = len(universe)
    return FiniteHerbrandModel(
        universe=universe,
        entries=entries,
        leq=[(i, j) for i in range(n) for j in range(i, n)],
        clashes=clashes,
    )
