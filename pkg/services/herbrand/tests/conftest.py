import random
from collections.abc import Callable
from pathlib import Path

import pytest

from domain.formulas import And, Eq, Forall, Formula, Implies, Le, Not, Or
from domain.terms import ZERO, Term, succ, var
from herbrand.core.settings import herbrand_settings
from herbrand.io import parse_terms
from herbrand.skolem.registry import SkolemRegistry
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory

DATA = Path(__file__).parents[1] / "data"
GOLDEN = Path(__file__).parent / "golden"

x = var("x")

# the ground terms random term sets are drawn from
GROUND_POOL = [
    "0",
    "S(0)",
    "S(S(0))",
    "0 + 0",
    "S(0 + 0)",
    "S(0) + 0",
    "0*0",
    "S(0)*S(0)",
]

# ground terms nested up to four deep, with one-hole contexts inside one another
DEEP_POOL = [
    "0",
    "0 + 0",
    "0*0",
    "S(0)",
    "S(0 + 0)",
    "S(0*0)",
    "S(S(0))",
    "S(S(0 + 0))",
    "S(0) + 0",
    "S(0 + 0) + 0",
    "0 + S(0)",
    "S(S(0)) + 0",
    "S(S(0) + 0)",
    "S(0)*S(0)",
    "S(0 + 0)*S(0)",
    "(0 + 0)*0",
]

# the open terms random axioms are built from
OPEN_POOL: list[Term] = [x, ZERO, succ(x), succ(ZERO), x + ZERO, x * x]


@pytest.fixture(autouse=True)
def quiet_settings(monkeypatch):
    monkeypatch.setenv("herbrand_log_level", "ERROR")
    monkeypatch.setenv("herbrand_progress", "false")
    herbrand_settings.cache_clear()
    yield
    herbrand_settings.cache_clear()


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20241019)


@pytest.fixture
def term_set() -> Callable[..., TermSet]:
    """Parse terms against the registry of a theory, declaring fresh constants."""

    def build(theory: Theory, *texts: str) -> TermSet:
        return parse_terms(texts, theory.registry)

    return build


@pytest.fixture
def random_terms() -> Callable[..., TermSet]:
    def build(rng: random.Random, size: int, deep: bool = False) -> TermSet:
        pool = DEEP_POOL if deep else GROUND_POOL
        return parse_terms(rng.sample(pool, size), SkolemRegistry())

    return build


@pytest.fixture
def random_axiom() -> Callable[[random.Random], Formula]:
    """A universal closure of a small random open formula in x."""

    def atom(rng: random.Random) -> Formula:
        lhs, rhs = rng.choice(OPEN_POOL), rng.choice(OPEN_POOL)
        f = Eq(l=lhs, r=rhs) if rng.random() < 0.5 else Le(l=lhs, r=rhs)
        return Not(f=f) if rng.random() < 0.4 else f

    def body(rng: random.Random, depth: int) -> Formula:
        if depth == 0 or rng.random() < 0.3:
            return atom(rng)
        match rng.randrange(3):
            case 0:
                return And(l=body(rng, depth - 1), r=body(rng, depth - 1))
            case 1:
                return Or(l=body(rng, depth - 1), r=body(rng, depth - 1))
        return Implies(l=body(rng, depth - 1), r=body(rng, depth - 1))

    def build(rng: random.Random) -> Formula:
        return Forall(v="x", body=body(rng, 2))

    return build
