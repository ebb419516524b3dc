"""
Ground unit propagation over a compiled problem. Equalities are kept in a
union-find, order facts as edges between classes; numpy boolean matrices give
the reachability of the preorder, so cycles collapse into classes and a strict
cycle is a conflict.
"""

from dataclasses import dataclass, field

import numpy as np
from loguru import logger

from herbrand.search.problem import EQ, CompiledProblem, Lit


@dataclass
class Propagation:
    conflict: bool
    # literals asserted by unit clauses, in order
    facts: list[Lit] = field(default_factory=list)
    # indices of the clauses that asserted a fact or came out false
    used: list[int] = field(default_factory=list)


def _reach(edges: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by repeated squaring."""
    reach = edges | np.eye(len(edges), dtype=bool)
    while True:
        step = reach.astype(np.float32)
        squared = (step @ step) > 0
        if (squared == reach).all():
            return reach
        reach = squared


class Closure:
    """What the asserted literals force about a total preorder on n terms."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.le: set[tuple[int, int]] = set()
        self.lt: set[tuple[int, int]] = set()
        self.neq: set[tuple[int, int]] = set()
        self._index: dict[int, int] = {}
        self._reach = np.zeros((0, 0), dtype=bool)
        self._strict = np.zeros((0, 0), dtype=bool)
        self._apart: set[tuple[int, int]] = set()

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def assert_literal(self, lit: Lit) -> None:
        kind, a, b, positive = lit
        if kind == EQ:
            if positive:
                self.union(a, b)
            else:
                self.neq.add((a, b))
        elif positive:
            self.le.add((a, b))
        else:
            # not a <= b in a total preorder means b < a
            self.lt.add((b, a))

    def close(self) -> bool:
        """Saturate the facts; False on a contradiction."""
        while True:
            roots = sorted({self.find(x) for x in range(len(self.parent))})
            index = {r: k for k, r in enumerate(roots)}
            size = len(roots)
            edges = np.zeros((size, size), dtype=bool)
            strict = np.zeros((size, size), dtype=bool)
            for a, b in self.le:
                edges[index[self.find(a)], index[self.find(b)]] = True
            for a, b in self.lt:
                i, j = index[self.find(a)], index[self.find(b)]
                edges[i, j] = strict[i, j] = True

            reach = _reach(edges)
            r = reach.astype(np.float32)
            below = (r @ strict.astype(np.float32) @ r) > 0
            if below.diagonal().any():
                return False

            merged = False
            for i, j in np.argwhere(np.triu(reach & reach.T, k=1)):
                merged |= self.union(roots[i], roots[j])
            if merged:
                continue

            apart: set[tuple[int, int]] = set()
            upgraded = False
            for a, b in self.neq:
                i, j = index[self.find(a)], index[self.find(b)]
                if i == j:
                    return False
                apart.add((min(i, j), max(i, j)))
                if reach[i, j] and not below[i, j]:
                    self.lt.add((a, b))
                    upgraded = True
                elif reach[j, i] and not below[j, i]:
                    self.lt.add((b, a))
                    upgraded = True
            if upgraded:
                continue

            self._index = {x: index[self.find(x)] for x in range(len(self.parent))}
            self._reach, self._strict, self._apart = reach, below, apart
            return True

    def value(self, lit: Lit) -> bool | None:
        """Truth of a literal in every preorder extending the facts, if decided."""
        kind, a, b, positive = lit
        i, j = self._index[a], self._index[b]
        v: bool | None
        if kind == EQ:
            if i == j:
                v = True
            elif (
                self._strict[i, j]
                or self._strict[j, i]
                or (min(i, j), max(i, j)) in self._apart
            ):
                v = False
            else:
                v = None
        elif self._reach[i, j]:
            v = True
        elif self._strict[j, i]:
            v = False
        else:
            v = None
        return v if v is None or positive else not v

    def classes(self) -> list[list[int]]:
        by_root: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            by_root.setdefault(self.find(x), []).append(x)
        return list(by_root.values())


def propagate(problem: CompiledProblem) -> Propagation:
    """
    Assert the unit clauses of the problem until nothing changes. Knowledge only
    grows, so a satisfied clause stays satisfied and a unit found against an
    older closure is still implied.
    """
    result = Propagation(conflict=False)
    for i, clause in enumerate(problem.clauses):
        if not clause:
            result.conflict, result.used = True, [i]
            return result

    closure = Closure(problem.n)
    closure.close()
    done = [False] * len(problem.clauses)
    changed = True
    while changed:
        changed = False
        for i, clause in enumerate(problem.clauses):
            if done[i]:
                continue
            values = [closure.value(lit) for lit in clause]
            if True in values:
                done[i] = True
                continue
            undecided = [
                lit for lit, v in zip(clause, values, strict=True) if v is None
            ]
            if not undecided:
                result.conflict = True
                result.used.append(i)
                return result
            if len(undecided) == 1:
                closure.assert_literal(undecided[0])
                result.facts.append(undecided[0])
                result.used.append(i)
                done[i] = changed = True
        if changed and not closure.close():
            result.conflict = True
            return result

    logger.debug(
        f"Propagation derived {len(result.facts)} facts, "
        f"{len(closure.classes())} classes"
    )
    return result
