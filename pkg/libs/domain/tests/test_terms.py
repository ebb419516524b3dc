import pytest

from domain.syntax import parse_formula, parse_term
from domain.terms import ZERO, numeral, sk, standard_value, succ, var


@pytest.mark.parametrize(
    "i, text",
    [
        pytest.param(0, "0", id="zero"),
        pytest.param(1, "S(0)", id="one"),
        pytest.param(3, "S(S(S(0)))", id="three"),
    ],
)
def test_numeral(i, text):
    assert str(numeral(i)) == text
    assert standard_value(numeral(i)) == i


def test_negative_numeral():
    with pytest.raises(ValueError):
        numeral(-1)


def test_standard_value_with_skolem_functions():
    t = parse_term("$1($0) + S(x)*x")
    skolem = {0: lambda: 3, 1: lambda a: a * a}

    assert standard_value(t, skolem, {"x": 2}) == 9 + 6

    with pytest.raises(ValueError):
        standard_value(t, skolem)
    with pytest.raises(ValueError):
        standard_value(t, {0: lambda: 3}, {"x": 2})


def test_positions_and_replacement():
    t = parse_term("S(x)*S(x)")
    positions = dict(t.positions())

    assert positions[()] == t
    assert positions[(0, 0)] == var("x")
    assert t.at((1, 0)) == var("x")
    assert str(t.replace_at((1, 0), ZERO)) == "S(x)*S(0)"
    assert t.size() == 5


def test_free_variables_and_substitution():
    t = parse_term("$2(y, x) + y")

    assert t.free_vars() == ["y", "x"]
    assert not t.is_ground()
    expected = parse_term("$2($0, S(0)) + $0")
    assert t.substitute({"y": sk(0), "x": succ(ZERO)}) == expected


def test_formula_substitution_respects_binders():
    f = parse_formula("x = 0 & forall x (x <= y)")

    assert str(f.substitute({"x": sk(1), "y": ZERO})) == "$1 = 0 & forall x (x <= 0)"
    assert f.free_vars() == ["x", "y"]
    assert not f.is_open()
