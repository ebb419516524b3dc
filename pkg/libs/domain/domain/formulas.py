from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping, Sequence
from typing import Annotated, Literal, Union

from pydantic import Field

from domain.core import Node
from domain.terms import Term

# binding strength of the printed operators
IMPLIES, OR, AND, UNARY, ATOM = 1, 2, 3, 4, 5


class FormulaNode(Node):
    """
    Shared behaviour of the formula nodes over the relations {=, <=}.
    The negated atoms t != s and !(t <= s) are Not nodes, never primitives.
    """

    def subformulas(self) -> tuple[Formula, ...]:
        """The immediate subformulas, left to right."""
        return ()

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return self  # type: ignore[return-value]

    def map_terms(self, fn: Callable[[Term], Term]) -> Formula:
        """Apply `fn` to every maximal term (atom arguments and bounds)."""
        return self.rebuild([f.map_terms(fn) for f in self.subformulas()])

    def __str__(self) -> str:
        return self.pretty()

    def pretty(self, ctx: int = 0) -> str:
        raise NotImplementedError

    def nodes(self) -> Iterator[Formula]:
        """All formula nodes in pre-order."""
        stack: list[Formula] = [self]  # type: ignore[list-item]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.subformulas()))

    def atoms(self) -> Iterator[Eq | Le]:
        for node in self.nodes():
            if isinstance(node, (Eq, Le)):
                yield node

    def atom_terms(self) -> list[Term]:
        """Distinct atom arguments in order of first occurrence."""
        seen: dict[Term, None] = {}
        for atom in self.atoms():
            seen.setdefault(atom.l)
            seen.setdefault(atom.r)
        return list(seen)

    def term_nodes(self) -> set[Term]:
        """Every term node occurring in the formula, subterms included."""
        found: set[Term] = set()
        for atom in self.atoms():
            found.update(atom.l.nodes())
            found.update(atom.r.nodes())
        for node in self.nodes():
            if isinstance(node, (BoundedForall, BoundedExists)):
                found.update(node.bound.nodes())
        return found

    def free_vars(self) -> list[str]:
        """Free variable names in order of first occurrence."""
        seen: dict[str, None] = {}
        self._collect_free(frozenset(), seen)
        return list(seen)

    def _collect_free(self, bound: frozenset[str], seen: dict[str, None]) -> None:
        for f in self.subformulas():
            f._collect_free(bound, seen)

    def bound_vars(self) -> list[str]:
        """Quantified variable names in pre-order, repetitions kept."""
        return [n.v for n in self.nodes() if isinstance(n, QUANTIFIERS)]

    def is_closed(self) -> bool:
        return not self.free_vars()

    def is_open(self) -> bool:
        """True when the formula has no quantifier at all."""
        return not any(isinstance(n, QUANTIFIERS) for n in self.nodes())

    def is_ground(self) -> bool:
        return self.is_open() and not self.free_vars()

    def is_rnnf(self) -> bool:
        """
        Rectified negation normal form: no implication, no bounded quantifier,
        negation only directly above atoms, quantified variables pairwise
        distinct and distinct from the free variables.
        """
        for node in self.nodes():
            if isinstance(node, (Implies, BoundedForall, BoundedExists)):
                return False
            if isinstance(node, Not) and not isinstance(node.f, (Eq, Le)):
                return False
        bound = self.bound_vars()
        return len(bound) == len(set(bound)) and not set(bound) & set(
            self.free_vars()
        )

    def substitute(self, mapping: Mapping[str, Term]) -> Formula:
        """
        Simultaneous substitution for free variables. Intended for ground
        replacements, which cannot be captured.
        """
        if not mapping:
            return self  # type: ignore[return-value]
        return self.rebuild([f.substitute(mapping) for f in self.subformulas()])


class Eq(FormulaNode):
    kind: Literal["eq"] = "eq"
    l: Term  # noqa: E741
    r: Term

    def map_terms(self, fn: Callable[[Term], Term]) -> Formula:
        return Eq(l=fn(self.l), r=fn(self.r))

    def _collect_free(self, bound: frozenset[str], seen: dict[str, None]) -> None:
        for name in self.l.free_vars() + self.r.free_vars():
            if name not in bound:
                seen.setdefault(name)

    def substitute(self, mapping: Mapping[str, Term]) -> Formula:
        return Eq(l=self.l.substitute(mapping), r=self.r.substitute(mapping))

    def pretty(self, ctx: int = 0) -> str:
        return f"{self.l} = {self.r}"


class Le(FormulaNode):
    kind: Literal["le"] = "le"
    l: Term  # noqa: E741
    r: Term

    def map_terms(self, fn: Callable[[Term], Term]) -> Formula:
        return Le(l=fn(self.l), r=fn(self.r))

    def _collect_free(self, bound: frozenset[str], seen: dict[str, None]) -> None:
        for name in self.l.free_vars() + self.r.free_vars():
            if name not in bound:
                seen.setdefault(name)

    def substitute(self, mapping: Mapping[str, Term]) -> Formula:
        return Le(l=self.l.substitute(mapping), r=self.r.substitute(mapping))

    def pretty(self, ctx: int = 0) -> str:
        return f"{self.l} <= {self.r}"


class Not(FormulaNode):
    kind: Literal["not"] = "not"
    f: Formula

    def subformulas(self) -> tuple[Formula, ...]:
        return (self.f,)

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return Not(f=subformulas[0])

    def pretty(self, ctx: int = 0) -> str:
        match self.f:
            case Eq(l=lhs, r=rhs):
                return f"{lhs} != {rhs}"
            case Le():
                return f"!({self.f})"
        return f"!{self.f.pretty(UNARY)}"


class And(FormulaNode):
    kind: Literal["and"] = "and"
    l: Formula  # noqa: E741
    r: Formula

    def subformulas(self) -> tuple[Formula, ...]:
        return (self.l, self.r)

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return And(l=subformulas[0], r=subformulas[1])

    def pretty(self, ctx: int = 0) -> str:
        text = f"{self.l.pretty(AND)} & {self.r.pretty(UNARY)}"
        return f"({text})" if ctx > AND else text


class Or(FormulaNode):
    kind: Literal["or"] = "or"
    l: Formula  # noqa: E741
    r: Formula

    def subformulas(self) -> tuple[Formula, ...]:
        return (self.l, self.r)

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return Or(l=subformulas[0], r=subformulas[1])

    def pretty(self, ctx: int = 0) -> str:
        text = f"{self.l.pretty(OR)} | {self.r.pretty(AND)}"
        return f"({text})" if ctx > OR else text


class Implies(FormulaNode):
    kind: Literal["implies"] = "implies"
    l: Formula  # noqa: E741
    r: Formula

    def subformulas(self) -> tuple[Formula, ...]:
        return (self.l, self.r)

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return Implies(l=subformulas[0], r=subformulas[1])

    def pretty(self, ctx: int = 0) -> str:
        text = f"{self.l.pretty(OR)} -> {self.r.pretty(IMPLIES)}"
        return f"({text})" if ctx > IMPLIES else text


class _Quantifier(FormulaNode):
    v: str
    body: Formula

    def subformulas(self) -> tuple[Formula, ...]:
        return (self.body,)

    def _collect_free(self, bound: frozenset[str], seen: dict[str, None]) -> None:
        self.body._collect_free(bound | {self.v}, seen)

    def substitute(self, mapping: Mapping[str, Term]) -> Formula:
        inner = {k: t for k, t in mapping.items() if k != self.v}
        return self.rebuild([self.body.substitute(inner)])

    def _body_text(self) -> str:
        if isinstance(self.body, QUANTIFIERS):
            return self.body.pretty(UNARY)
        return f"({self.body.pretty()})"


class Forall(_Quantifier):
    kind: Literal["forall"] = "forall"

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return Forall(v=self.v, body=subformulas[0])

    def pretty(self, ctx: int = 0) -> str:
        return f"forall {self.v} {self._body_text()}"


class Exists(_Quantifier):
    kind: Literal["exists"] = "exists"

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return Exists(v=self.v, body=subformulas[0])

    def pretty(self, ctx: int = 0) -> str:
        return f"exists {self.v} {self._body_text()}"


class _BoundedQuantifier(_Quantifier):
    bound: Term

    def map_terms(self, fn: Callable[[Term], Term]) -> Formula:
        return self.model_copy(
            update={"bound": fn(self.bound), "body": self.body.map_terms(fn)}
        )

    def _collect_free(self, bound: frozenset[str], seen: dict[str, None]) -> None:
        for name in self.bound.free_vars():
            if name not in bound:
                seen.setdefault(name)
        super()._collect_free(bound, seen)

    def substitute(self, mapping: Mapping[str, Term]) -> Formula:
        inner = {k: t for k, t in mapping.items() if k != self.v}
        return self.model_copy(
            update={
                "bound": self.bound.substitute(mapping),
                "body": self.body.substitute(inner),
            }
        )


class BoundedForall(_BoundedQuantifier):
    kind: Literal["bounded_forall"] = "bounded_forall"

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return BoundedForall(v=self.v, bound=self.bound, body=subformulas[0])

    def pretty(self, ctx: int = 0) -> str:
        return f"forall {self.v} <= {self.bound} {self._body_text()}"


class BoundedExists(_BoundedQuantifier):
    kind: Literal["bounded_exists"] = "bounded_exists"

    def rebuild(self, subformulas: Sequence[Formula]) -> Formula:
        return BoundedExists(v=self.v, bound=self.bound, body=subformulas[0])

    def pretty(self, ctx: int = 0) -> str:
        return f"exists {self.v} <= {self.bound} {self._body_text()}"


Formula = Annotated[
    Union[
        Eq,
        Le,
        Not,
        And,
        Or,
        Implies,
        Forall,
        Exists,
        BoundedForall,
        BoundedExists,
    ],
    Field(discriminator="kind"),
]

QUANTIFIERS = (Forall, Exists, BoundedForall, BoundedExists)

for _model in (
    Eq,
    Le,
    Not,
    And,
    Or,
    Implies,
    Forall,
    Exists,
    BoundedForall,
    BoundedExists,
):
    _model.model_rebuild()


def conjoin(formulas: Sequence[Formula]) -> Formula:
    """Left-nested conjunction of a non-empty list of formulas."""
    if not formulas:
        raise ValueError("Cannot conjoin an empty list of formulas")
    result = formulas[0]
    for f in formulas[1:]:
        result = And(l=result, r=f)
    return result


def disjoin(formulas: Sequence[Formula]) -> Formula:
    """Left-nested disjunction of a non-empty list of formulas."""
    if not formulas:
        raise ValueError("Cannot disjoin an empty list of formulas")
    result = formulas[0]
    for f in formulas[1:]:
        result = Or(l=result, r=f)
    return result
