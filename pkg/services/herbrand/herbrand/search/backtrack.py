"""
Depth-first search over pre-evaluations. A row is built left to right: after
the first term, each step either joins the current class (`~`) or opens the
next one (`<`). Clauses are rechecked on the terms a step touches and the
branch is pruned as soon as one is false under every completion.

The canonical order puts the permutation of the terms first and the separators
second, which a single depth-first pass cannot follow. `first_solution` fixes
the row one position at a time instead, asking the search whether any solution
extends the terms fixed so far.
"""

import contextlib
import time
from collections.abc import Iterator, Sequence
from concurrent.futures import Future, ProcessPoolExecutor

from loguru import logger

from herbrand.search.outcome import SearchBudgetError
from herbrand.search.problem import EQ, CompiledProblem, Lit

# (rank, class) pairs in row order
Row = tuple[tuple[int, int], ...]
Prefix = tuple[int, ...]

UNPLACED = -1
# how often the clock is read
CLOCK_EVERY = 1024


class BudgetExceededError(SearchBudgetError):
    def __init__(self, nodes: int, reason: str):
        self.nodes, self.reason = nodes, reason
        super().__init__(f"Search stopped after {nodes} nodes: {reason}")


class Backtracker:
    """
    Rows of (rank, class) pairs whose first terms are fixed to `prefix`. With
    `sorted_blocks` the freely chosen members of a class follow each other in
    rank order, one row per ordered partition. Separators are tried `~` before
    `<`, so with the whole permutation fixed the rows come out in canonical
    order.
    """

    def __init__(
        self,
        problem: CompiledProblem,
        max_nodes: int | None = None,
        deadline: float | None = None,
        sorted_blocks: bool = True,
        prefix: Sequence[int] = (),
    ):
        self.problem = problem
        self.n = problem.n
        self.watching = problem.watches()
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.sorted_blocks = sorted_blocks
        self.prefix = tuple(prefix)

        self.block_of = [UNPLACED] * self.n
        self.placed: list[int] = []
        self.cur = 0
        # last freely chosen member of the current class
        self.last = UNPLACED
        self.nodes = 0

    def _min_block(self, u: int) -> int:
        """Lowest class an unplaced term can still end up in."""
        if self.sorted_blocks and u < self.last:
            return self.cur + 1
        return self.cur

    def _value(self, lit: Lit) -> bool | None:
        kind, a, b, positive = lit
        ba, bb = self.block_of[a], self.block_of[b]
        v: bool | None = None
        if ba != UNPLACED and bb != UNPLACED:
            v = ba == bb if kind == EQ else ba <= bb
        elif kind == EQ:
            if ba != UNPLACED and ba < self._min_block(b):
                v = False
            elif bb != UNPLACED and bb < self._min_block(a):
                v = False
        elif ba != UNPLACED:
            v = True
        elif bb != UNPLACED and bb < self._min_block(a):
            v = False
        return v if v is None or positive else not v

    def _falsified(self, clause_index: int) -> bool:
        return all(
            self._value(lit) is False for lit in self.problem.clauses[clause_index]
        )

    def _consistent(self, touched: list[int]) -> bool:
        return not any(
            self._falsified(i) for t in touched for i in self.watching[t]
        )

    def _tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceededError(self.nodes, "node budget")
        if (
            self.deadline is not None
            and self.nodes % CLOCK_EVERY == 0
            and time.monotonic() > self.deadline
        ):
            raise BudgetExceededError(self.nodes, "time budget")

    def solutions(self) -> Iterator[Row]:
        starts = self.prefix[:1] or range(self.n)
        for t in starts:
            yield from self._place(t, new_block=False)

    def _place(self, t: int, new_block: bool) -> Iterator[Row]:
        self._tick()
        fixed = len(self.placed) < len(self.prefix)
        saved = (self.cur, self.last)
        touched = [t]
        if new_block:
            touched += [x for x in self.placed if self.block_of[x] == self.cur]
            self.cur += 1
            self.last = UNPLACED
        self.block_of[t] = self.cur
        if not fixed:
            self.last = t
        self.placed.append(t)

        if self._consistent(touched):
            if len(self.placed) == self.n:
                yield tuple((x, self.block_of[x]) for x in self.placed)
            else:
                yield from self._branches()

        self.placed.pop()
        self.block_of[t] = UNPLACED
        self.cur, self.last = saved

    def _branches(self) -> Iterator[Row]:
        depth = len(self.placed)
        if depth < len(self.prefix):
            u = self.prefix[depth]
            yield from self._place(u, new_block=False)
            yield from self._place(u, new_block=True)
            return

        joiners = range(self.last + 1 if self.sorted_blocks else 0, self.n)
        for u in joiners:
            if self.block_of[u] == UNPLACED:
                yield from self._place(u, new_block=False)
        for u in range(self.n):
            if self.block_of[u] == UNPLACED:
                yield from self._place(u, new_block=True)


def row_key(row: Row) -> tuple[Prefix, Prefix]:
    """Sort key of the canonical order: the permutation, then the classes."""
    return tuple(r for r, _ in row), tuple(b for _, b in row)


def _search(
    problem: CompiledProblem,
    prefix: Prefix,
    max_nodes: int | None,
    seconds: float | None,
) -> tuple[Row | None, int, str | None]:
    deadline = None if seconds is None else time.monotonic() + seconds
    search = Backtracker(problem, max_nodes, deadline, prefix=prefix)
    try:
        found = next(search.solutions(), None)
    except BudgetExceededError as e:
        return None, e.nodes, e.reason
    return found, search.nodes, None


class _Extensions:
    """Asks, prefix by prefix, whether some solution starts with it."""

    def __init__(
        self,
        problem: CompiledProblem,
        max_nodes: int | None,
        deadline: float | None,
        pool: ProcessPoolExecutor | None,
    ):
        self.problem = problem
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.pool = pool
        self.nodes = 0

    def _seconds(self) -> float | None:
        if self.deadline is None:
            return None
        return max(self.deadline - time.monotonic(), 0.0)

    def first(self, prefixes: list[Prefix]) -> tuple[int, Row] | None:
        """Index and a solution of the first prefix that some solution extends."""
        futures: list[Future] = []
        if self.pool is None:
            results = (
                _search(self.problem, p, self.max_nodes, self._seconds())
                for p in prefixes
            )
        else:
            futures = [
                self.pool.submit(
                    _search, self.problem, p, self.max_nodes, self._seconds()
                )
                for p in prefixes
            ]
            results = (f.result() for f in futures)

        try:
            for i, (found, visited, reason) in enumerate(results):
                self.nodes += visited
                if reason is not None:
                    raise BudgetExceededError(self.nodes, reason)
                if found is not None:
                    return i, found
        finally:
            for f in futures:
                f.cancel()
        return None


def first_solution(
    problem: CompiledProblem,
    max_nodes: int | None = None,
    seconds: float | None = None,
    jobs: int = 1,
) -> tuple[Row | None, int]:
    """
    The canonically first solution and the number of nodes visited.

    Position by position, the lowest ranked term that some solution still
    extends to is fixed; a solution found on the way vouches for its own next
    term, so ranks above it are never searched. With the whole permutation
    fixed, one more search returns its lowest separator pattern. The node budget
    applies to each of these searches. With several jobs the candidates for a
    position are searched in parallel and read back in rank order, so a later
    candidate never wins over an earlier one.

    Raises:
        BudgetExceededError: A search ran out of budget before an earlier
            candidate produced a solution.
    """
    deadline = None if seconds is None else time.monotonic() + seconds
    parallel = jobs > 1 and problem.n > 1
    if parallel:
        logger.debug(f"Searching {problem.n} terms on {jobs} workers")

    with (
        ProcessPoolExecutor(max_workers=jobs) if parallel else contextlib.nullcontext()
    ) as pool:
        ask = _Extensions(problem, max_nodes, deadline, pool)
        prefix: Prefix = ()
        witness: Row | None = None
        while len(prefix) < problem.n:
            ahead = witness[len(prefix)][0] if witness else problem.n
            candidates = [u for u in range(ahead) if u not in prefix]
            hit = ask.first([(*prefix, u) for u in candidates])
            if hit is not None:
                i, witness = hit
                prefix = (*prefix, candidates[i])
            elif witness is not None:
                prefix = (*prefix, ahead)
            else:
                return None, ask.nodes

        hit = ask.first([prefix])
        if hit is None:
            raise RuntimeError(f"No separators complete the permutation {prefix}")
        return hit[1], ask.nodes


def any_solution(
    problem: CompiledProblem,
    max_nodes: int | None = None,
    seconds: float | None = None,
) -> Row | None:
    """
    Some solution, not necessarily the canonical first one.

    Raises:
        BudgetExceededError: The search ran out of budget.
    """
    found, nodes, reason = _search(problem, (), max_nodes, seconds)
    if reason is not None:
        raise BudgetExceededError(nodes, reason)
    return found


def to_blocks(row: Row) -> list[list[int]]:
    """Ranks grouped by class, each class in row order."""
    blocks: list[list[int]] = [[] for _ in range(row[-1][1] + 1)]
    for rank, b in row:
        blocks[b].append(rank)
    return blocks
