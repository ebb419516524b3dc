"""
Pre-evaluations: the terms of a set written in a row, each pair of neighbours
joined by `~` (same class) or `<` (strictly below). The classes are the maximal
runs joined by `~`, ordered by their position in the row.
"""

import itertools
import re
from collections.abc import Iterable, Iterator, Sequence
from enum import Enum

from pydantic import PrivateAttr, model_validator

from domain.coding import Code, code_of_term, encode_sequence
from domain.core import Node, Schema
from domain.syntax import SymbolTable, parse_term
from domain.terms import Term
from herbrand.skolem.term_set import TermSet


class Separator(str, Enum):
    EQ = "~"
    LT = "<"


class TermNotInDomainError(ValueError):
    """A term is not a member of the set an evaluation covers."""

    def __init__(self, term: Term):
        self.term = term
        super().__init__(f"Term {term} is not in the domain")


class PreEvaluation(Node):
    terms: tuple[Term, ...]
    separators: tuple[Separator, ...] = ()

    _block_of: dict[Term, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def check_shape(self) -> "PreEvaluation":
        if not self.terms:
            raise ValueError("A pre-evaluation covers at least one term")
        if len(self.separators) != len(self.terms) - 1:
            raise ValueError(
                f"{len(self.terms)} terms need {len(self.terms) - 1} separators, "
                f"got {len(self.separators)}"
            )
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("Every term occurs exactly once in a pre-evaluation")
        return self

    def model_post_init(self, __context) -> None:
        if not self.terms:
            return
        block = 0
        self._block_of = {self.terms[0]: 0}
        for sep, t in zip(self.separators, self.terms[1:], strict=True):
            block += sep == Separator.LT
            self._block_of[t] = block

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[Term]]) -> "PreEvaluation":
        terms: list[Term] = []
        separators: list[Separator] = []
        for block in blocks:
            for j, t in enumerate(block):
                if terms:
                    separators.append(Separator.EQ if j else Separator.LT)
                terms.append(t)
        return cls(terms=tuple(terms), separators=tuple(separators))

    @classmethod
    def from_text(
        cls, text: str, symbols: SymbolTable | None = None
    ) -> "PreEvaluation":
        """Read the `a < b ~ c` format."""
        parts = re.split(r"\s*([~<])\s*", text.strip())
        terms = [parse_term(p, symbols) for p in parts[0::2]]
        separators = [Separator(s) for s in parts[1::2]]
        return cls(terms=tuple(terms), separators=tuple(separators))

    def __str__(self) -> str:
        out = [str(self.terms[0])]
        for sep, t in zip(self.separators, self.terms[1:], strict=True):
            out.append(f" {sep.value} {t}")
        return "".join(out)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def domain(self) -> TermSet:
        return TermSet.of(self.terms)

    def items(self) -> list[Term | Separator]:
        """The alternating sequence t0, s1, t1, ..., t(n-1)."""
        out: list[Term | Separator] = [self.terms[0]]
        for sep, t in zip(self.separators, self.terms[1:], strict=True):
            out.extend([sep, t])
        return out

    def blocks(self) -> list[tuple[Term, ...]]:
        out: list[list[Term]] = [[] for _ in range(self.n_blocks)]
        for t in self.terms:
            out[self._block_of[t]].append(t)
        return [tuple(b) for b in out]

    @property
    def n_blocks(self) -> int:
        return self._block_of[self.terms[-1]] + 1

    def block(self, t: Term) -> int:
        if t not in self._block_of:
            raise TermNotInDomainError(t)
        return self._block_of[t]

    def __contains__(self, t: object) -> bool:
        return t in self._block_of

    def eq(self, t: Term, s: Term) -> bool:
        return self.block(t) == self.block(s)

    def lt(self, t: Term, s: Term) -> bool:
        return self.block(t) < self.block(s)

    def le(self, t: Term, s: Term) -> bool:
        return self.block(t) <= self.block(s)

    def restrict(self, terms: Iterable[Term]) -> "PreEvaluation":
        """The pre-evaluation induced on a subset of the domain."""
        kept = set(terms)
        for t in kept:
            self.block(t)
        blocks = [[t for t in b if t in kept] for b in self.blocks()]
        return PreEvaluation.from_blocks([b for b in blocks if b])

    def code(self) -> Code:
        """Code of the alternating sequence, separators coded as 0 (~) and 1 (<)."""
        items: list[int] = []
        for item in self.items():
            if isinstance(item, Separator):
                items.append(int(item == Separator.LT))
            else:
                items.append(code_of_term(item).value)
        return encode_sequence(items)


class Relations(Schema):
    """The equality classes in order; class i is below class j iff i < j."""

    classes: list[list[Term]]

    def lt(self) -> list[tuple[int, int]]:
        n = len(self.classes)
        return [(i, j) for i in range(n) for j in range(i + 1, n)]


def relations(p: PreEvaluation) -> Relations:
    return Relations(classes=[list(b) for b in p.blocks()])


def enumerate_pre_evaluations(terms: TermSet) -> Iterator[PreEvaluation]:
    """
    Every pre-evaluation on the set, n! * 2^(n-1) of them, in canonical order:
    permutations of the terms by rank first, then for each permutation the
    separator patterns in binary order, read left to right with `~` as 0 and `<`
    as 1.

    Raises:
        ValueError: The set has fewer than two terms.
    """
    if len(terms) < 2:
        raise ValueError(
            f"Pre-evaluations are enumerated on two or more terms, got {len(terms)}"
        )

    gaps = len(terms) - 1
    for row in itertools.permutations(terms):
        for mask in range(1 << gaps):
            yield PreEvaluation(terms=row, separators=separator_pattern(mask, gaps))


def separator_pattern(mask: int, gaps: int) -> tuple[Separator, ...]:
    """The separators spelled by `mask`, the first one as the highest bit."""
    return tuple(
        Separator.LT if mask >> (gaps - 1 - i) & 1 else Separator.EQ
        for i in range(gaps)
    )


def is_block_sorted(p: PreEvaluation, terms: TermSet) -> bool:
    """True when the terms of every class appear in rank order."""
    return all(
        [terms.rank(t) for t in b] == sorted(terms.rank(t) for t in b)
        for b in p.blocks()
    )
