import itertools
import math

import pytest

from domain.coding import (
    EMPTY_CODE_VALUE,
    Code,
    OmegaOverflowError,
    code_of_formula,
    code_of_set,
    code_of_term,
    concat,
    decode_formula,
    decode_sequence,
    decode_term,
    encode_sequence,
    omega,
    sequence_length,
)
from domain.syntax import parse_formula
from domain.terms import numeral, sk, var


def _random_sequence(rng, max_length: int = 12) -> list[int]:
    return [
        rng.randrange(1 << rng.randrange(1, 40))
        for _ in range(rng.randrange(max_length + 1))
    ]


def test_empty_sequence_has_the_minimal_code():
    assert encode_sequence([]) == Code(value=EMPTY_CODE_VALUE)
    assert decode_sequence(Code(value=1)) == []


def test_concatenation_and_length_bounds(rng):
    for _ in range(10_000):
        a, b = _random_sequence(rng), _random_sequence(rng)
        ca, cb = encode_sequence(a), encode_sequence(b)
        cab = concat(ca, cb)

        assert cab == encode_sequence(a + b)
        assert cab.value <= 2 * ca.value * cb.value
        assert sequence_length(cab) == len(a) + len(b)
        assert len(a) <= max(math.log2(ca.value), 0)


def test_distinct_sequences_get_distinct_codes(rng):
    sequences = {tuple(_random_sequence(rng, 6)) for _ in range(100_000)}
    codes = {encode_sequence(s).value for s in sequences}

    assert len(codes) == len(sequences)


def test_decode_sequence_inverts_encode(rng):
    for _ in range(1_000):
        items = _random_sequence(rng)
        assert decode_sequence(encode_sequence(items)) == items


@pytest.mark.parametrize(
    "value",
    [
        pytest.param(0, id="zero"),
        pytest.param(2, id="no leading marker"),
        pytest.param(64 + 32, id="unfinished element"),
    ],
)
def test_decode_sequence_rejects_non_codes(value):
    with pytest.raises(ValueError):
        decode_sequence(value)


def test_term_and_formula_codes_decode(rng, random_formula):
    t = sk(3, numeral(2), var("x") + sk(0))
    assert decode_term(code_of_term(t)) == t

    for _ in range(100):
        f = random_formula(rng, 4)
        assert decode_formula(code_of_formula(f)) == f


def test_distinct_terms_get_distinct_codes(rng, random_term):
    terms = {random_term(rng, 4) for _ in range(5_000)}
    assert len({code_of_term(t) for t in terms}) == len(terms)


def test_decode_term_rejects_a_formula_code():
    with pytest.raises(ValueError):
        decode_term(code_of_formula(parse_formula("0 = 0")))


def test_code_of_set_ignores_order_and_repetition():
    a, b = code_of_term(numeral(1)), code_of_term(numeral(3))

    assert code_of_set([a, b, a]) == code_of_set([b, a])
    assert code_of_set([]) == Code(value=EMPTY_CODE_VALUE)


def test_numeral_codes_grow_linearly():
    bits = [code_of_term(numeral(i)).bits for i in range(1, 50)]
    steps = {b - a for a, b in itertools.pairwise(bits)}

    assert steps == {6}


@pytest.mark.parametrize(
    "n, x, expected",
    [
        pytest.param(0, 3, 9, id="omega_0(3)"),
        pytest.param(0, 1000, 1_000_000, id="omega_0(1000)"),
        pytest.param(1, 16, 65536, id="omega_1(16)"),
        pytest.param(1, 2, 2, id="omega_1(2)"),
        pytest.param(2, 4, 4, id="omega_2(4)"),
    ],
)
def test_omega(n, x, expected):
    assert omega(n, x) == expected


def test_omega_is_monotone():
    for n in range(3):
        values = [omega(n, x, bit_budget=1 << 20) for x in range(2, 300)]
        assert values == sorted(values)


def test_omega_respects_the_bit_budget():
    with pytest.raises(OmegaOverflowError):
        omega(1, 1 << 40, bit_budget=1024)
    with pytest.raises(ValueError):
        omega(3, 4)
    with pytest.raises(ValueError):
        omega(0, 1)
