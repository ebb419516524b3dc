"""
Efficient Godel coding of sequences, terms, formulas and finite sets.

A sequence of naturals is written as a string of base-64 digits: every element
becomes its base-32 digits, most significant first, with the continuation bit (32)
set on all digits but the last. The code is that digit string read in base 64
behind a leading 1. Hence for every sequence a, b

    code(a * b) <= 2 * code(a) * code(b)      (concatenation)
    len(a) <= log2(code(a))                   (length)

and the empty sequence has the minimal code 1.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from enum import IntEnum
from functools import lru_cache

from pydantic import Field

from domain.core import Node
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

BASE = 64
DIGIT_BITS = 6
CONTINUE = 32
EMPTY_CODE_VALUE = 1


class Code(Node):
    """A Godel code, always at least 1."""

    value: int = Field(ge=1)

    @property
    def bits(self) -> int:
        return self.value.bit_length()

    @property
    def digits(self) -> int:
        """Number of base-64 digits behind the leading marker."""
        return (self.value.bit_length() - 1) // DIGIT_BITS

    def __str__(self) -> str:
        return str(self.value)


class Symbol(IntEnum):
    """Alphabet of the Polish notation used for terms and formulas."""

    ZERO = 0
    SUCC = 1
    ADD = 2
    MUL = 3
    VAR = 4
    SKOLEM = 5
    EQ = 6
    LE = 7
    NOT = 8
    AND = 9
    OR = 10
    IMPLIES = 11
    FORALL = 12
    EXISTS = 13
    BOUNDED_FORALL = 14
    BOUNDED_EXISTS = 15
    LABEL = 16


class OmegaOverflowError(ArithmeticError):
    """The value of an omega function would exceed the configured bit budget."""


def _element_digits(n: int) -> list[int]:
    if n < 0:
        raise ValueError(f"Only naturals can be coded, got {n}")
    digits = [n & (CONTINUE - 1)]
    n >>= 5
    while n:
        digits.append((n & (CONTINUE - 1)) | CONTINUE)
        n >>= 5
    return digits[::-1]


def encode_sequence(items: Iterable[int]) -> Code:
    """Code of a finite sequence of naturals."""
    value = EMPTY_CODE_VALUE
    for item in items:
        for digit in _element_digits(item):
            value = value * BASE + digit
    return Code(value=value)


def decode_sequence(code: Code | int) -> list[int]:
    """Inverse of `encode_sequence`."""
    value = code.value if isinstance(code, Code) else code
    if value < EMPTY_CODE_VALUE:
        raise ValueError(f"Not a code: {value}")

    n_digits = (value.bit_length() - 1) // DIGIT_BITS
    if value >> (n_digits * DIGIT_BITS) != 1:
        raise ValueError(f"Not a code: {value} has no leading marker")

    items: list[int] = []
    current, pending = 0, False
    for shift in range((n_digits - 1) * DIGIT_BITS, -1, -DIGIT_BITS):
        digit = (value >> shift) & (BASE - 1)
        current = (current << 5) | (digit & (CONTINUE - 1))
        pending = bool(digit & CONTINUE)
        if not pending:
            items.append(current)
            current = 0
    if pending:
        raise ValueError(f"Not a code: {value} ends inside an element")
    return items


def concat(a: Code, b: Code) -> Code:
    """Code of the concatenation of the sequences coded by `a` and `b`."""
    shift = b.digits * DIGIT_BITS
    return Code(value=(a.value << shift) | (b.value - (1 << shift)))


def sequence_length(code: Code) -> int:
    return len(decode_sequence(code))


def _name_items(name: str) -> list[int]:
    return [len(name), *(ord(ch) for ch in name)]


def term_items(t: Term) -> list[int]:
    """The term in Polish notation over the coding alphabet."""
    match t:
        case Zero():
            return [Symbol.ZERO]
        case Succ(arg=arg):
            return [Symbol.SUCC, *term_items(arg)]
        case Add(lhs=lhs, rhs=rhs):
            return [Symbol.ADD, *term_items(lhs), *term_items(rhs)]
        case Mul(lhs=lhs, rhs=rhs):
            return [Symbol.MUL, *term_items(lhs), *term_items(rhs)]
        case Var(name=name):
            return [Symbol.VAR, *_name_items(name)]
        case SkolemApp(symbol_id=symbol_id, args=args):
            items = [Symbol.SKOLEM, symbol_id, len(args)]
            for a in args:
                items.extend(term_items(a))
            return items
    raise TypeError(f"Not a term: {t!r}")


def formula_items(f: Formula) -> list[int]:
    """The formula in Polish notation over the coding alphabet."""
    match f:
        case Eq(l=lhs, r=rhs):
            return [Symbol.EQ, *term_items(lhs), *term_items(rhs)]
        case Le(l=lhs, r=rhs):
            return [Symbol.LE, *term_items(lhs), *term_items(rhs)]
        case Not(f=g):
            return [Symbol.NOT, *formula_items(g)]
        case And(l=lhs, r=rhs):
            return [Symbol.AND, *formula_items(lhs), *formula_items(rhs)]
        case Or(l=lhs, r=rhs):
            return [Symbol.OR, *formula_items(lhs), *formula_items(rhs)]
        case Implies(l=lhs, r=rhs):
            return [Symbol.IMPLIES, *formula_items(lhs), *formula_items(rhs)]
        case BoundedForall(v=v, bound=bound, body=body):
            return [
                Symbol.BOUNDED_FORALL,
                *_name_items(v),
                *term_items(bound),
                *formula_items(body),
            ]
        case BoundedExists(v=v, bound=bound, body=body):
            return [
                Symbol.BOUNDED_EXISTS,
                *_name_items(v),
                *term_items(bound),
                *formula_items(body),
            ]
        case Forall(v=v, body=body):
            return [Symbol.FORALL, *_name_items(v), *formula_items(body)]
        case Exists(v=v, body=body):
            return [Symbol.EXISTS, *_name_items(v), *formula_items(body)]
    raise TypeError(f"Not a formula: {f!r}")


@lru_cache(maxsize=1 << 16)
def code_of_term(t: Term) -> Code:
    return encode_sequence(term_items(t))


@lru_cache(maxsize=1 << 12)
def code_of_formula(f: Formula) -> Code:
    return encode_sequence(formula_items(f))


def code_of_label(label: str) -> Code:
    """Code of a named constant that has no defining formula."""
    return encode_sequence([Symbol.LABEL, *_name_items(label)])


def code_of_set(codes: Iterable[Code]) -> Code:
    """Code of a finite set: the sequence of its distinct member codes, ascending."""
    return encode_sequence(sorted({c.value for c in codes}))


def _read_name(items: Iterator[int]) -> str:
    length = next(items)
    return "".join([chr(next(items)) for _ in range(length)])


def _read_term(items: Iterator[int]) -> Term:
    match Symbol(next(items)):
        case Symbol.ZERO:
            return Zero()
        case Symbol.SUCC:
            return Succ(arg=_read_term(items))
        case Symbol.ADD:
            return Add(lhs=_read_term(items), rhs=_read_term(items))
        case Symbol.MUL:
            return Mul(lhs=_read_term(items), rhs=_read_term(items))
        case Symbol.VAR:
            return Var(name=_read_name(items))
        case Symbol.SKOLEM:
            symbol_id, arity = next(items), next(items)
            args = tuple([_read_term(items) for _ in range(arity)])
            return SkolemApp(symbol_id=symbol_id, args=args)
        case other:
            raise ValueError(f"Unexpected symbol {other.name} in a term code")


def _read_formula(items: Iterator[int]) -> Formula:  # noqa: C901
    match Symbol(next(items)):
        case Symbol.EQ:
            return Eq(l=_read_term(items), r=_read_term(items))
        case Symbol.LE:
            return Le(l=_read_term(items), r=_read_term(items))
        case Symbol.NOT:
            return Not(f=_read_formula(items))
        case Symbol.AND:
            return And(l=_read_formula(items), r=_read_formula(items))
        case Symbol.OR:
            return Or(l=_read_formula(items), r=_read_formula(items))
        case Symbol.IMPLIES:
            return Implies(l=_read_formula(items), r=_read_formula(items))
        case Symbol.FORALL:
            return Forall(v=_read_name(items), body=_read_formula(items))
        case Symbol.EXISTS:
            return Exists(v=_read_name(items), body=_read_formula(items))
        case Symbol.BOUNDED_FORALL:
            v, bound = _read_name(items), _read_term(items)
            return BoundedForall(v=v, bound=bound, body=_read_formula(items))
        case Symbol.BOUNDED_EXISTS:
            v, bound = _read_name(items), _read_term(items)
            return BoundedExists(v=v, bound=bound, body=_read_formula(items))
        case other:
            raise ValueError(f"Unexpected symbol {other.name} in a formula code")


def _decode_with(code: Code, reader):
    items = iter(decode_sequence(code))
    try:
        result = reader(items)
    except StopIteration as e:
        raise ValueError(f"Truncated code: {code.value}") from e
    if next(items, None) is not None:
        raise ValueError(f"Trailing items in code: {code.value}")
    return result


def decode_term(code: Code) -> Term:
    return _decode_with(code, _read_term)


def decode_formula(code: Code) -> Formula:
    return _decode_with(code, _read_formula)


def omega(n: int, x: int, bit_budget: int | None = None) -> int:
    """
    The omega functions of bounded arithmetic:
    omega_0(x) = x^2 and omega_{k+1}(x) = 2^omega_k(floor(log2 x)).

    Args:
        n: The index of the function, at most 2.
        x: The argument, at least 2.
        bit_budget: Largest number of bits the result may have.

    Returns:
        omega_n(x) as an exact integer.
    """
    if not 0 <= n <= 2:
        raise ValueError(f"omega_{n} is not supported, use n <= 2")
    if x < 2:
        raise ValueError(f"omega needs an argument >= 2, got {x}")
    return _omega(n, x, bit_budget)


def _omega(n: int, x: int, bit_budget: int | None) -> int:
    if n == 0:
        if bit_budget is not None and 2 * x.bit_length() > bit_budget:
            raise OmegaOverflowError(
                f"omega_0({x}) needs up to {2 * x.bit_length()} bits, "
                f"budget is {bit_budget}"
            )
        return x * x

    exponent = _omega(n - 1, max(x.bit_length() - 1, 0), bit_budget)
    if bit_budget is not None and exponent + 1 > bit_budget:
        raise OmegaOverflowError(
            f"omega_{n}({x}) needs {exponent + 1} bits, budget is {bit_budget}"
        )
    return 1 << exponent


def log2_ratio(numerator: Code, denominator: Code) -> float:
    """log2(numerator) / log2(denominator), by bit lengths."""
    if denominator.value < 2:
        raise ValueError("The denominator code must be at least 2")
    return (numerator.bits - 1) / (denominator.bits - 1)
