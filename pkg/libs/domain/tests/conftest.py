import itertools
import random
from collections.abc import Callable, Mapping
from dataclasses import dataclass

import pytest

from domain.formulas import (
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Le,
    Not,
    Or,
)
from domain.terms import ZERO, Add, Mul, Succ, Term, Var, Zero

VARIABLES = ("x", "y", "z")


@dataclass(frozen=True)
class FiniteStructure:
    """An arbitrary interpretation of 0, S, +, * and <= on {0, ..., size - 1}."""

    size: int
    zero: int
    succ: tuple[int, ...]
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    le: frozenset[tuple[int, int]]

    def value(self, t: Term, env: Mapping[str, int]) -> int:
        match t:
            case Zero():
                return self.zero
            case Var(name=name):
                return env[name]
            case Succ(arg=arg):
                return self.succ[self.value(arg, env)]
            case Add(lhs=lhs, rhs=rhs):
                return self.add[self.value(lhs, env)][self.value(rhs, env)]
            case Mul(lhs=lhs, rhs=rhs):
                return self.mul[self.value(lhs, env)][self.value(rhs, env)]
        raise TypeError(f"Unexpected term {t!r}")

    def holds(self, f: Formula, env: Mapping[str, int]) -> bool:  # noqa: C901
        match f:
            case Eq(l=lhs, r=rhs):
                return self.value(lhs, env) == self.value(rhs, env)
            case Le(l=lhs, r=rhs):
                return (self.value(lhs, env), self.value(rhs, env)) in self.le
            case Not(f=g):
                return not self.holds(g, env)
            case And(l=lhs, r=rhs):
                return self.holds(lhs, env) and self.holds(rhs, env)
            case Or(l=lhs, r=rhs):
                return self.holds(lhs, env) or self.holds(rhs, env)
            case Implies(l=lhs, r=rhs):
                return not self.holds(lhs, env) or self.holds(rhs, env)
            case BoundedForall(v=v, bound=bound, body=body):
                top = self.value(bound, env)
                return all(
                    self.holds(body, {**env, v: a})
                    for a in range(self.size)
                    if (a, top) in self.le
                )
            case BoundedExists(v=v, bound=bound, body=body):
                top = self.value(bound, env)
                return any(
                    self.holds(body, {**env, v: a})
                    for a in range(self.size)
                    if (a, top) in self.le
                )
            case Forall(v=v, body=body):
                return all(self.holds(body, {**env, v: a}) for a in range(self.size))
            case Exists(v=v, body=body):
                return any(self.holds(body, {**env, v: a}) for a in range(self.size))
        raise TypeError(f"Unexpected formula {f!r}")

    def environments(self, names: list[str]):
        for values in itertools.product(range(self.size), repeat=len(names)):
            yield dict(zip(names, values, strict=True))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)


@pytest.fixture
def random_structure() -> Callable[[random.Random, int], FiniteStructure]:
    def build(rng: random.Random, size: int) -> FiniteStructure:
        def table() -> tuple[tuple[int, ...], ...]:
            return tuple(
                tuple(rng.randrange(size) for _ in range(size)) for _ in range(size)
            )

        pairs = itertools.product(range(size), repeat=2)
        return FiniteStructure(
            size=size,
            zero=rng.randrange(size),
            succ=tuple(rng.randrange(size) for _ in range(size)),
            add=table(),
            mul=table(),
            le=frozenset(p for p in pairs if rng.random() < 0.5),
        )

    return build


@pytest.fixture
def random_term() -> Callable[[random.Random, int], Term]:
    def build(rng: random.Random, depth: int) -> Term:
        if depth == 0 or rng.random() < 0.3:
            return ZERO if rng.random() < 0.25 else Var(name=rng.choice(VARIABLES))
        match rng.randrange(3):
            case 0:
                return Succ(arg=build(rng, depth - 1))
            case 1:
                return Add(lhs=build(rng, depth - 1), rhs=build(rng, depth - 1))
        return Mul(lhs=build(rng, depth - 1), rhs=build(rng, depth - 1))

    return build


@pytest.fixture
def random_formula(random_term) -> Callable[[random.Random, int], Formula]:
    def build(rng: random.Random, depth: int) -> Formula:  # noqa: C901
        if depth == 0 or rng.random() < 0.2:
            lhs, rhs = random_term(rng, 2), random_term(rng, 2)
            return Eq(l=lhs, r=rhs) if rng.random() < 0.5 else Le(l=lhs, r=rhs)

        v = rng.choice(VARIABLES)
        match rng.randrange(9):
            case 0:
                return Not(f=build(rng, depth - 1))
            case 1:
                return And(l=build(rng, depth - 1), r=build(rng, depth - 1))
            case 2:
                return Or(l=build(rng, depth - 1), r=build(rng, depth - 1))
            case 3:
                return Implies(l=build(rng, depth - 1), r=build(rng, depth - 1))
            case 4:
                return Forall(v=v, body=build(rng, depth - 1))
            case 5:
                return Exists(v=v, body=build(rng, depth - 1))
            case 6:
                bound = random_term(rng, 1)
                return BoundedForall(v=v, bound=bound, body=build(rng, depth - 1))
            case 7:
                bound = random_term(rng, 1)
                return BoundedExists(v=v, bound=bound, body=build(rng, depth - 1))
        return Not(f=Le(l=random_term(rng, 1), r=random_term(rng, 1)))

    return build
