"""
Ground search problems in integer form. Terms become their ranks and every
constraint becomes a clause of literals (kind, a, b, positive) where kind is EQ
(a ~ b) or LE (a ~ b or a strictly below b).
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from domain.formulas import Eq
from domain.normal_form import Atom, to_cnf
from herbrand.core.options import Availability
from herbrand.evaluation.congruence import CongruencePair, congruence_pairs
from herbrand.skolem.instances import Instance, available_instances
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory

EQ, LE = 0, 1

Lit = tuple[int, int, int, bool]
Clause = tuple[Lit, ...]


class Source(str, Enum):
    INSTANCE = "instance"
    CONGRUENCE = "congruence"


class Origin(NamedTuple):
    source: Source
    index: int


@dataclass(frozen=True)
class CompiledProblem:
    """What a search worker needs: the number of terms and the clauses."""

    n: int
    clauses: tuple[Clause, ...]

    def watches(self) -> list[list[int]]:
        """For every term, the clauses mentioning it."""
        watching: list[list[int]] = [[] for _ in range(self.n)]
        for i, clause in enumerate(self.clauses):
            for t in sorted({x for _, a, b, _ in clause for x in (a, b)}):
                watching[t].append(i)
        return watching


class SearchProblem:
    """The available instances of a theory on a term set, in clause form."""

    def __init__(
        self,
        terms: TermSet,
        instances: Sequence[Instance],
        pairs: Sequence[CongruencePair] | None = None,
    ):
        self.terms = terms
        self.instances = list(instances)
        self.pairs = congruence_pairs(terms) if pairs is None else list(pairs)
        self.clauses: list[Clause] = []
        self.origins: list[Origin] = []
        # an instance whose clause form is already false
        self.falsified: Origin | None = None

        for i, inst in enumerate(self.instances):
            for clause in to_cnf(inst.formula):
                self._add(clause, (Source.INSTANCE, i))
        for i, pair in enumerate(self.pairs):
            self._add(
                [(Eq(l=pair.t, r=pair.s), False), (Eq(l=pair.lhs, r=pair.rhs), True)],
                (Source.CONGRUENCE, i),
            )

    @classmethod
    def build(
        cls,
        theory: Theory,
        terms: TermSet,
        availability: Availability = Availability.ATOMIC,
    ) -> "SearchProblem":
        return cls(terms, available_instances(theory, terms, availability))

    def literal(self, atom: Atom, positive: bool) -> Lit | bool:
        """The literal in rank form, or its truth value when it is trivial."""
        a, b = self.terms.rank(atom.l), self.terms.rank(atom.r)
        if a == b:
            return positive
        if isinstance(atom, Eq):
            return (EQ, min(a, b), max(a, b), positive)
        return (LE, a, b, positive)

    def _add(self, literals: list[tuple[Atom, bool]], origin: tuple[Source, int]):
        clause: list[Lit] = []
        for atom, positive in literals:
            lit = self.literal(atom, positive)
            if lit is True:
                return
            if lit is not False and lit not in clause:
                clause.append(lit)
        if not clause and self.falsified is None:
            self.falsified = Origin(*origin)
        self.clauses.append(tuple(clause))
        self.origins.append(Origin(*origin))

    def with_facts(self, facts: Sequence[Lit]) -> CompiledProblem:
        """The compiled clauses plus unit clauses for derived literals."""
        units = tuple((lit,) for lit in facts)
        return CompiledProblem(n=len(self.terms), clauses=(*self.clauses, *units))

    def compiled(self) -> CompiledProblem:
        return CompiledProblem(n=len(self.terms), clauses=tuple(self.clauses))
