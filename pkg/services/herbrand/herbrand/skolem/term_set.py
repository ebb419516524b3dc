from collections.abc import Iterable, Iterator

from pydantic import PrivateAttr, field_validator

from domain.coding import Code, code_of_set, code_of_term
from domain.core import Node
from domain.terms import Term


class TermSet(Node):
    """
    A finite set of ground terms, kept sorted by Godel code. The position of a
    term in that order is its rank.
    """

    terms: tuple[Term, ...]
    provenance: str = "user"

    _ranks: dict[Term, int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._ranks = {t: i for i, t in enumerate(self.terms)}

    @field_validator("terms")
    @classmethod
    def sort_by_code(cls, terms: tuple[Term, ...]) -> tuple[Term, ...]:
        for t in terms:
            if not t.is_ground():
                raise ValueError(f"Term sets hold ground terms only, got {t}")
        return tuple(sorted(set(terms), key=lambda t: code_of_term(t).value))

    @classmethod
    def of(cls, terms: Iterable[Term], provenance: str = "user") -> "TermSet":
        return cls(terms=tuple(terms), provenance=provenance)

    def rank(self, t: Term) -> int:
        return self._ranks[t]

    def __contains__(self, t: object) -> bool:
        return t in self._ranks

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:  # type: ignore[override]
        return iter(self.terms)

    def __str__(self) -> str:
        return "{" + ", ".join(str(t) for t in self.terms) + "}"

    def union(self, other: Iterable[Term], provenance: str | None = None) -> "TermSet":
        return TermSet.of((*self.terms, *other), provenance or self.provenance)

    def without(self, *removed: Term) -> "TermSet":
        return TermSet.of((t for t in self.terms if t not in removed), self.provenance)

    def is_subterm_closed(self) -> bool:
        return all(n in self for t in self.terms for n in t.nodes())

    def code(self) -> Code:
        return code_of_set(code_of_term(t) for t in self.terms)
