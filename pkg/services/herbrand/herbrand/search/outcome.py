from enum import Enum
from typing import Annotated, Literal, Union

from pydantic import Field

from domain.core import Schema
from domain.terms import Term
from herbrand.core.options import Strategy
from herbrand.evaluation.congruence import Evaluation
from herbrand.skolem.instances import Instance
from herbrand.skolem.term_set import TermSet


class Status(str, Enum):
    WITNESS = "witness"
    INCONSISTENT = "inconsistent"
    BUDGET_EXHAUSTED = "budget_exhausted"


class Method(str, Enum):
    EXHAUSTIVE = "exhaustive"
    PROPAGATION = "propagation"


class SearchBudgetError(ArithmeticError):
    """A search ran out of nodes or time before reaching a verdict."""


class SearchStats(Schema):
    strategy: Strategy | None = None
    terms: int = 0
    instances: int = 0
    congruence_pairs: int = 0
    clauses: int = 0
    nodes: int = 0
    level: int | None = None
    reason: str | None = None
    # wall time varies between runs, keep it out of the payload
    seconds: float = Field(default=0.0, exclude=True)


class InconsistencyCertificate(Schema):
    """
    Evidence that no evaluation on `terms` satisfies `instances`. The conflict
    core alone is already unsatisfiable on `core_terms`.
    """

    terms: TermSet
    instances: list[Instance]
    method: Method
    conflict_core: list[Instance]
    core_terms: list[Term]


class Witness(Schema):
    status: Literal[Status.WITNESS] = Status.WITNESS
    evaluation: Evaluation
    terms: TermSet
    instances: list[Instance]
    stats: SearchStats


class Inconsistent(Schema):
    status: Literal[Status.INCONSISTENT] = Status.INCONSISTENT
    certificate: InconsistencyCertificate
    stats: SearchStats

    @property
    def terms(self) -> TermSet:
        return self.certificate.terms

    @property
    def instances(self) -> list[Instance]:
        return self.certificate.instances


class BudgetExhausted(Schema):
    """No verdict; `evaluation` is the last witness found on a smaller set."""

    status: Literal[Status.BUDGET_EXHAUSTED] = Status.BUDGET_EXHAUSTED
    terms: TermSet | None = None
    instances: list[Instance] = []
    evaluation: Evaluation | None = None
    stats: SearchStats


SearchOutcome = Annotated[
    Union[Witness, Inconsistent, BudgetExhausted],
    Field(discriminator="status"),
]
