import pytest

from domain.formulas import (
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Implies,
    Le,
    Not,
    Or,
)
from domain.syntax import (
    FormulaSyntaxError,
    UnknownSymbolError,
    parse_formula,
    parse_term,
)
from domain.terms import ZERO, Add, Mul, sk, succ, var

x, y, z = var("x"), var("y"), var("z")


@pytest.mark.parametrize(
    "text, expected",
    [
        pytest.param(
            "forall x (S(x) != 0)",
            Forall(v="x", body=Not(f=Eq(l=succ(x), r=ZERO))),
            id="successor is never zero",
        ),
        pytest.param(
            "x + y*z = (x + y)*z",
            Eq(
                l=Add(lhs=x, rhs=Mul(lhs=y, rhs=z)),
                r=Mul(lhs=Add(lhs=x, rhs=y), rhs=z),
            ),
            id="product binds tighter than sum",
        ),
        pytest.param(
            "x = y -> y = z -> x = z",
            Implies(l=Eq(l=x, r=y), r=Implies(l=Eq(l=y, r=z), r=Eq(l=x, r=z))),
            id="implication is right associative",
        ),
        pytest.param(
            "x = 0 | y = 0 & z = 0",
            Or(l=Eq(l=x, r=ZERO), r=And(l=Eq(l=y, r=ZERO), r=Eq(l=z, r=ZERO))),
            id="conjunction binds tighter than disjunction",
        ),
        pytest.param(
            "!(x <= y) | S(y) <= x",
            Or(l=Not(f=Le(l=x, r=y)), r=Le(l=succ(y), r=x)),
            id="negated order atom",
        ),
        pytest.param(
            "forall x exists y <= x*x (y = x*x)",
            Forall(
                v="x",
                body=BoundedExists(
                    v="y", bound=Mul(lhs=x, rhs=x), body=Eq(l=y, r=Mul(lhs=x, rhs=x))
                ),
            ),
            id="bounded existential under a quantifier",
        ),
        pytest.param(
            "forall y <= S(x) exists z (z + y = x)",
            BoundedForall(
                v="y",
                bound=succ(x),
                body=Exists(v="z", body=Eq(l=Add(lhs=z, rhs=y), r=x)),
            ),
            id="bounded universal",
        ),
        pytest.param(
            "$1($0) <= $0*$0",
            Le(l=sk(1, sk(0)), r=Mul(lhs=sk(0), rhs=sk(0))),
            id="Skolem symbols by index",
        ),
        pytest.param(
            "!!(x = y)",
            Not(f=Not(f=Eq(l=x, r=y))),
            id="double negation",
        ),
    ],
)
def test_parse_formula(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize(
    "text",
    [
        pytest.param(
            "forall v0 (!(v0 <= 0*0) | v0 != 0*0) | exists v1 (exists v2 "
            "(v2 <= v1*v1 & v2 = v1*v1) & forall v3 (!(v3 <= S(v1)*S(v1)) | "
            "v3 != S(v1)*S(v1))) | forall v4 exists v5 (v5 <= v4*v4 & v5 = v4*v4)",
            id="induction for squares in normal form",
        ),
        pytest.param(
            "!(v0 <= v1) | $1(v0, v1) + v0 = v1",
            id="Skolemized subtraction axiom",
        ),
        pytest.param("v0 = 0 | v0 = S($0(v0))", id="Skolemized predecessor axiom"),
        pytest.param("forall x (x*(y + z) = x*y + x*z)", id="distributivity"),
    ],
)
def test_printing_is_the_inverse_of_parsing(text):
    assert str(parse_formula(text)) == text


def test_random_formulas_survive_print_and_parse(rng, random_formula):
    for _ in range(300):
        f = random_formula(rng, 4)
        assert parse_formula(str(f)) == f, str(f)


@pytest.mark.parametrize(
    "text, expected",
    [
        pytest.param("S(S(0))", succ(succ(ZERO)), id="numeral"),
        pytest.param("x + y + z", Add(lhs=Add(lhs=x, rhs=y), rhs=z), id="left sum"),
        pytest.param("$2($0, S(x))", sk(2, sk(0), succ(x)), id="binary Skolem"),
    ],
)
def test_parse_term(text, expected):
    assert parse_term(text) == expected


@pytest.mark.parametrize(
    "text",
    [
        pytest.param("forall x (x = ", id="truncated"),
        pytest.param("x + = y", id="missing operand"),
        pytest.param("x < y", id="strict order is not primitive"),
        pytest.param("X = 0", id="upper case variable"),
    ],
)
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError) as error:
        parse_formula(text)
    assert error.value.text == text


class _Aliases:
    def __init__(self, names: dict[str, tuple[int, int]]):
        self.names = names

    def resolve(self, label: str, arity: int) -> int:
        if label not in self.names:
            raise UnknownSymbolError(f"Unknown Skolem symbol '${label}'")
        index, expected = self.names[label]
        if expected != arity:
            raise UnknownSymbolError(f"${label} takes {expected} arguments")
        return index


def test_named_skolem_symbols_are_resolved():
    symbols = _Aliases({"c": (0, 0), "q": (1, 1)})

    assert parse_formula("$q($c) = $c*$c", symbols) == Eq(
        l=sk(1, sk(0)), r=Mul(lhs=sk(0), rhs=sk(0))
    )
    with pytest.raises(UnknownSymbolError):
        parse_formula("$q($c, 0) = 0", symbols)
    with pytest.raises(UnknownSymbolError):
        parse_formula("$h(0) = 0", symbols)


def test_named_skolem_symbol_without_table():
    with pytest.raises(UnknownSymbolError):
        parse_term("$c")
