from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping, Sequence
from typing import Annotated, Literal, Union

from pydantic import Field

from domain.core import Node

Position = tuple[int, ...]


class TermNode(Node):
    """
    Shared behaviour of the term nodes of the arithmetic language
    {0, S, +, *} extended with Skolem function symbols.
    """

    def children(self) -> tuple[Term, ...]:
        """The immediate subterms, left to right."""
        return ()

    def rebuild(self, children: Sequence[Term]) -> Term:
        """Build a node with the same head symbol over the given children."""
        return self  # type: ignore[return-value]

    @property
    def symbol(self) -> str:
        """The head symbol name: `0`, `S`, `+`, `*`, `$k` or the variable name."""
        raise NotImplementedError

    def __add__(self, other: Term) -> Add:
        return Add(lhs=self, rhs=other)  # type: ignore[arg-type]

    def __mul__(self, other: Term) -> Mul:
        return Mul(lhs=self, rhs=other)  # type: ignore[arg-type]

    def __str__(self) -> str:
        return self.pretty()

    def pretty(self, ctx: int = 0) -> str:
        """
        Print the term in the concrete syntax. `ctx` is the binding strength
        required by the enclosing operator (1 for `+`, 2 for `*`).
        """
        raise NotImplementedError

    def nodes(self) -> Iterator[Term]:
        """All nodes in pre-order (the term itself first)."""
        stack: list[Term] = [self]  # type: ignore[list-item]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children()))

    def positions(self) -> Iterator[tuple[Position, Term]]:
        """All (position, subterm) pairs in pre-order; the root is at ()."""
        stack: list[tuple[Position, Term]] = [((), self)]  # type: ignore[list-item]
        while stack:
            pos, node = stack.pop()
            yield pos, node
            children = node.children()
            for i in reversed(range(len(children))):
                stack.append(((*pos, i), children[i]))

    def at(self, pos: Position) -> Term:
        node: Term = self  # type: ignore[assignment]
        for i in pos:
            node = node.children()[i]
        return node

    def replace_at(self, pos: Position, new: Term) -> Term:
        """Replace the subterm at `pos` with `new` (a single occurrence)."""
        if not pos:
            return new
        children = list(self.children())
        children[pos[0]] = children[pos[0]].replace_at(pos[1:], new)
        return self.rebuild(children)

    def is_ground(self) -> bool:
        return not any(isinstance(n, Var) for n in self.nodes())

    def free_vars(self) -> list[str]:
        """Variable names in order of first occurrence."""
        seen: dict[str, None] = {}
        for node in self.nodes():
            if isinstance(node, Var):
                seen.setdefault(node.name)
        return list(seen)

    def substitute(self, mapping: Mapping[str, Term]) -> Term:
        """Simultaneous substitution of terms for variables."""
        if not mapping:
            return self  # type: ignore[return-value]
        return self.rebuild([c.substitute(mapping) for c in self.children()])

    def size(self) -> int:
        return sum(1 for _ in self.nodes())


class Var(TermNode):
    kind: Literal["var"] = "var"
    name: str

    @property
    def symbol(self) -> str:
        return self.name

    def pretty(self, ctx: int = 0) -> str:
        return self.name

    def substitute(self, mapping: Mapping[str, Term]) -> Term:
        return mapping.get(self.name, self)


class Zero(TermNode):
    kind: Literal["zero"] = "zero"

    @property
    def symbol(self) -> str:
        return "0"

    def pretty(self, ctx: int = 0) -> str:
        return "0"


class Succ(TermNode):
    kind: Literal["succ"] = "succ"
    arg: Term

    @property
    def symbol(self) -> str:
        return "S"

    def children(self) -> tuple[Term, ...]:
        return (self.arg,)

    def rebuild(self, children: Sequence[Term]) -> Term:
        return Succ(arg=children[0])

    def pretty(self, ctx: int = 0) -> str:
        return f"S({self.arg.pretty()})"


class Add(TermNode):
    kind: Literal["add"] = "add"
    lhs: Term
    rhs: Term

    @property
    def symbol(self) -> str:
        return "+"

    def children(self) -> tuple[Term, ...]:
        return (self.lhs, self.rhs)

    def rebuild(self, children: Sequence[Term]) -> Term:
        return Add(lhs=children[0], rhs=children[1])

    def pretty(self, ctx: int = 0) -> str:
        text = f"{self.lhs.pretty(1)} + {self.rhs.pretty(2)}"
        return f"({text})" if ctx > 1 else text


class Mul(TermNode):
    kind: Literal["mul"] = "mul"
    lhs: Term
    rhs: Term

    @property
    def symbol(self) -> str:
        return "*"

    def children(self) -> tuple[Term, ...]:
        return (self.lhs, self.rhs)

    def rebuild(self, children: Sequence[Term]) -> Term:
        return Mul(lhs=children[0], rhs=children[1])

    def pretty(self, ctx: int = 0) -> str:
        text = f"{self.lhs.pretty(2)}*{self.rhs.pretty(3)}"
        return f"({text})" if ctx > 2 else text


class SkolemApp(TermNode):
    """Application of the Skolem symbol with registry index `symbol`."""

    kind: Literal["skolem"] = "skolem"
    symbol_id: int = Field(ge=0)
    args: tuple[Term, ...] = ()

    @property
    def symbol(self) -> str:
        return f"${self.symbol_id}"

    def children(self) -> tuple[Term, ...]:
        return self.args

    def rebuild(self, children: Sequence[Term]) -> Term:
        return SkolemApp(symbol_id=self.symbol_id, args=tuple(children))

    def pretty(self, ctx: int = 0) -> str:
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(a.pretty() for a in self.args)})"


Term = Annotated[
    Union[Var, Zero, Succ, Add, Mul, SkolemApp],
    Field(discriminator="kind"),
]

for _model in (Succ, Add, Mul, SkolemApp):
    _model.model_rebuild()

ZERO = Zero()


def var(name: str) -> Var:
    return Var(name=name)


def succ(t: Term) -> Succ:
    return Succ(arg=t)


def sk(symbol_id: int, *args: Term) -> SkolemApp:
    return SkolemApp(symbol_id=symbol_id, args=tuple(args))


def numeral(i: int) -> Term:
    """The numeral i as a tower of i successors over 0."""
    if i < 0:
        raise ValueError(f"Numerals are natural numbers, got {i}")
    t: Term = ZERO
    for _ in range(i):
        t = Succ(arg=t)
    return t


def standard_value(
    t: Term,
    skolem: Mapping[int, Callable[..., int]] | None = None,
    env: Mapping[str, int] | None = None,
) -> int:
    """
    Evaluate a term in the standard model of arithmetic.

    Args:
        t: The term to evaluate.
        skolem: Interpretation of the Skolem symbols by registry index.
        env: Values of the free variables.

    Returns:
        The natural number denoted by the term.
    """
    skolem, env = skolem or {}, env or {}
    match t:
        case Zero():
            return 0
        case Var(name=name):
            if name not in env:
                raise ValueError(f"No value for variable '{name}'")
            return env[name]
        case Succ(arg=arg):
            return standard_value(arg, skolem, env) + 1
        case Add(lhs=lhs, rhs=rhs):
            return standard_value(lhs, skolem, env) + standard_value(rhs, skolem, env)
        case Mul(lhs=lhs, rhs=rhs):
            return standard_value(lhs, skolem, env) * standard_value(rhs, skolem, env)
        case SkolemApp(symbol_id=symbol_id, args=args):
            if symbol_id not in skolem:
                raise ValueError(f"No interpretation for Skolem symbol ${symbol_id}")
            values = [standard_value(a, skolem, env) for a in args]
            return skolem[symbol_id](*values)
    raise TypeError(f"Not a term: {t!r}")
