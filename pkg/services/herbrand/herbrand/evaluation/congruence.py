from collections.abc import Iterable, Sequence

from domain.core import Node
from domain.terms import Term
from herbrand.evaluation.pre_evaluation import PreEvaluation
from herbrand.skolem.term_set import TermSet


class CongruencePair(Node):
    """
    Members `lhs` = u(t) and `rhs` = u(s) of a term set sharing the one-hole
    context u: whenever t ~ s, an evaluation must also put lhs ~ rhs.
    """

    t: Term
    s: Term
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{self.t} ~ {self.s} => {self.lhs} ~ {self.rhs}"


class NotAnEvaluationError(ValueError):
    """A pre-evaluation breaks congruence."""

    def __init__(self, pair: CongruencePair):
        self.pair = pair
        super().__init__(f"Not a congruence: {pair}")


def one_hole_differences(a: Term, b: Term) -> list[tuple[Term, Term]]:
    """
    Anti-unify two terms: the pairs (a|pos, b|pos) for every non-root position
    at which a single hole separates them, outermost first.
    """
    pairs: list[tuple[Term, Term]] = []
    while a.symbol == b.symbol:
        left, right = a.children(), b.children()
        if len(left) != len(right):
            break
        pairs_at = enumerate(zip(left, right, strict=True))
        differing = [i for i, (x, y) in pairs_at if x != y]
        if len(differing) != 1:
            break
        a, b = left[differing[0]], right[differing[0]]
        pairs.append((a, b))
    return pairs


def congruence_pairs(terms: TermSet | Iterable[Term]) -> list[CongruencePair]:
    """Every congruence obligation realized inside the term set."""
    members = terms if isinstance(terms, TermSet) else TermSet.of(terms)
    by_head: dict[tuple[str, int], list[Term]] = {}
    for m in members:
        by_head.setdefault((m.symbol, len(m.children())), []).append(m)

    pairs: list[CongruencePair] = []
    for group in by_head.values():
        for i, lhs in enumerate(group):
            for rhs in group[i + 1 :]:
                for t, s in one_hole_differences(lhs, rhs):
                    if t in members and s in members:
                        pairs.append(CongruencePair(t=t, s=s, lhs=lhs, rhs=rhs))
    return pairs


def find_violation(
    p: PreEvaluation, pairs: Sequence[CongruencePair] | None = None
) -> CongruencePair | None:
    pairs = congruence_pairs(p.terms) if pairs is None else pairs
    for pair in pairs:
        if p.eq(pair.t, pair.s) and not p.eq(pair.lhs, pair.rhs):
            return pair
    return None


def is_evaluation(
    p: PreEvaluation, pairs: Sequence[CongruencePair] | None = None
) -> bool:
    """
    True when t ~ s implies u(t) ~ u(s) for every one-hole context u with both
    u(t) and u(s) in the domain.
    """
    return find_violation(p, pairs) is None


class Evaluation(PreEvaluation):
    """A pre-evaluation whose equality is a congruence on its domain."""

    @classmethod
    def of(
        cls, p: PreEvaluation, pairs: Sequence[CongruencePair] | None = None
    ) -> "Evaluation":
        if (violation := find_violation(p, pairs)) is not None:
            raise NotAnEvaluationError(violation)
        return cls(terms=p.terms, separators=p.separators)
