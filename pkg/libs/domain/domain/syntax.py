"""
Concrete syntax of terms and formulas.

    terms:     0  S(t)  t + t  t*t  x  $k  $k(t, ...)
    formulas:  t = t  t != t  t <= t  !f  f & f  f | f  f -> f
               forall x f  exists x f  forall y <= t f  exists y <= t f

`->` is right associative and binds weakest, then `|`, then `&`. Negation and the
quantifiers bind tightest, so `forall x (A -> B)` needs its parentheses.
Skolem symbols are written `$k` with k the registry index, or `$name` for a
label known to the symbol table.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Protocol

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

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
from domain.terms import Add, Mul, SkolemApp, Succ, Term, Var, Zero

GRAMMAR = r"""
    ?start: formula
    term_start: term

    ?formula: disjunction
            | disjunction "->" formula            -> implies

    ?disjunction: conjunction
                | disjunction "|" conjunction     -> or_

    ?conjunction: unary
                | conjunction "&" unary           -> and_

    ?unary: "!" unary                             -> not_
          | "forall" NAME unary                   -> forall
          | "exists" NAME unary                   -> exists
          | "forall" NAME "<=" term unary         -> bounded_forall
          | "exists" NAME "<=" term unary         -> bounded_exists
          | atom

    ?atom: term "=" term                          -> eq
         | term "!=" term                         -> neq
         | term "<=" term                         -> le
         | "(" formula ")"

    ?term: product
         | term "+" product                       -> add

    ?product: primary
            | product "*" primary                 -> mul

    ?primary: "0"                                 -> zero
            | "S" "(" term ")"                    -> succ
            | SKOLEM "(" term ("," term)* ")"     -> skolem_app
            | SKOLEM                              -> skolem_const
            | NAME                                -> var
            | "(" term ")"

    SKOLEM: /\$[A-Za-z0-9_]+/
    NAME: /(?!(?:forall|exists)\b)[a-z_][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""


class FormulaSyntaxError(ValueError):
    """The text does not conform to the concrete syntax."""

    def __init__(self, text: str, line: int, column: int, detail: str):
        self.text, self.line, self.column = text, line, column
        super().__init__(
            f"Syntax error at line {line}, column {column} in '{text}': {detail}"
        )


class UnknownSymbolError(ValueError):
    """A Skolem symbol is not registered, or is used with the wrong arity."""


class SymbolTable(Protocol):
    """Resolves `$label` occurrences to registry indices."""

    def resolve(self, label: str, arity: int) -> int:
        """
        Args:
            label: The text after `$`, either an index or an alias.
            arity: The number of arguments at the occurrence.

        Returns:
            The registry index of the symbol.
        """
        ...


@lru_cache()
def formula_parser() -> Lark:
    return Lark(GRAMMAR, start=["start", "term_start"], parser="earley")


@v_args(inline=True)
class _AstBuilder(Transformer):
    def __init__(self, symbols: SymbolTable | None):
        super().__init__()
        self.symbols = symbols

    def _symbol(self, token: Token, arity: int) -> int:
        label = str(token)[1:]
        if self.symbols is not None:
            return self.symbols.resolve(label, arity)
        if not label.isdigit():
            raise UnknownSymbolError(f"Unknown Skolem symbol '${label}'")
        return int(label)

    # terms
    def term_start(self, t: Term) -> Term:
        return t

    def zero(self) -> Term:
        return Zero()

    def succ(self, t: Term) -> Term:
        return Succ(arg=t)

    def add(self, lhs: Term, rhs: Term) -> Term:
        return Add(lhs=lhs, rhs=rhs)

    def mul(self, lhs: Term, rhs: Term) -> Term:
        return Mul(lhs=lhs, rhs=rhs)

    def var(self, name: Token) -> Term:
        return Var(name=str(name))

    def skolem_const(self, token: Token) -> Term:
        return SkolemApp(symbol_id=self._symbol(token, 0))

    def skolem_app(self, token: Token, *args: Term) -> Term:
        return SkolemApp(symbol_id=self._symbol(token, len(args)), args=args)

    # formulas
    def eq(self, lhs: Term, rhs: Term) -> Formula:
        return Eq(l=lhs, r=rhs)

    def neq(self, lhs: Term, rhs: Term) -> Formula:
        return Not(f=Eq(l=lhs, r=rhs))

    def le(self, lhs: Term, rhs: Term) -> Formula:
        return Le(l=lhs, r=rhs)

    def not_(self, f: Formula) -> Formula:
        return Not(f=f)

    def and_(self, lhs: Formula, rhs: Formula) -> Formula:
        return And(l=lhs, r=rhs)

    def or_(self, lhs: Formula, rhs: Formula) -> Formula:
        return Or(l=lhs, r=rhs)

    def implies(self, lhs: Formula, rhs: Formula) -> Formula:
        return Implies(l=lhs, r=rhs)

    def forall(self, name: Token, body: Formula) -> Formula:
        return Forall(v=str(name), body=body)

    def exists(self, name: Token, body: Formula) -> Formula:
        return Exists(v=str(name), body=body)

    def bounded_forall(self, name: Token, bound: Term, body: Formula) -> Formula:
        return BoundedForall(v=str(name), bound=bound, body=body)

    def bounded_exists(self, name: Token, bound: Term, body: Formula) -> Formula:
        return BoundedExists(v=str(name), bound=bound, body=body)


def _parse(text: str, start: str, symbols: SymbolTable | None):
    try:
        tree = formula_parser().parse(text, start=start)
    except UnexpectedInput as e:
        line, column = getattr(e, "line", -1), getattr(e, "column", -1)
        detail = (str(e).strip().splitlines() or ["unexpected input"])[0]
        raise FormulaSyntaxError(text, line, column, detail) from e

    try:
        return _AstBuilder(symbols).transform(tree)
    except VisitError as e:
        raise e.orig_exc from e


def parse_formula(text: str, symbols: SymbolTable | None = None) -> Formula:
    """
    Parse a formula in the concrete syntax.

    Args:
        text: The formula text.
        symbols: Resolves `$label` Skolem symbols and checks their arity.

    Returns:
        The formula AST; printing it and parsing it again gives the same AST.
    """
    return _parse(text, "start", symbols)


def parse_term(text: str, symbols: SymbolTable | None = None) -> Term:
    """Parse a single term in the concrete syntax."""
    return _parse(text, "term_start", symbols)
