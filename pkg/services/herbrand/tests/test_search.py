import pytest

from domain.syntax import parse_formula, parse_term
from domain.terms import Term
from herbrand.core.options import HullMode, Strategy
from herbrand.evaluation.congruence import is_evaluation
from herbrand.evaluation.pre_evaluation import (
    TermNotInDomainError,
    enumerate_pre_evaluations,
    is_block_sorted,
)
from herbrand.evaluation.satisfaction import is_T_evaluation
from herbrand.io import parse_terms, read_terms, read_theory
from herbrand.search.outcome import (
    BudgetExhausted,
    Inconsistent,
    Method,
    SearchBudgetError,
    Status,
    Witness,
)
from herbrand.search.refute import herbrand_refute
from herbrand.search.solver import (
    SearchBudget,
    find_all,
    find_evaluation,
    greedy_core,
)
from herbrand.search.universal import check_universal, remark_checks
from herbrand.skolem.hull import hull_step, symbol_pool
from herbrand.skolem.presets import Preset, preset
from herbrand.skolem.registry import DeclaringSymbols
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory


def assert_core_is_unsatisfiable(outcome: Inconsistent) -> None:
    """The conflict core alone has no evaluation on the core terms."""
    certificate = outcome.certificate
    core = Theory("CORE", [i.formula for i in certificate.conflict_core])
    terms = TermSet.of(certificate.core_terms)

    assert set(terms) <= set(certificate.terms)
    assert isinstance(find_evaluation(core, terms), Inconsistent)


@pytest.fixture
def ex2(data_dir) -> tuple[Theory, TermSet]:
    theory = preset(Preset.EX2)
    return theory, read_terms(data_dir / "ex2.lam", theory.registry)


@pytest.fixture
def ex3(data_dir) -> tuple[Theory, TermSet]:
    theory = preset(Preset.EX3)
    return theory, read_terms(data_dir / "gamma_t.lam", theory.registry)


def test_every_evaluation_of_ex2_squares_t(ex2):
    theory, terms = ex2
    symbols = DeclaringSymbols(theory.registry)
    zero, zero_squared = parse_term("0"), parse_term("0*0")
    q_t, t_squared = parse_term("$q($t)", symbols), parse_term("$t*$t", symbols)

    outcome = find_evaluation(theory, terms)

    assert isinstance(outcome, Witness)
    found = list(find_all(theory, terms, distinct_structures=True))
    assert str(found[0]) == str(outcome.evaluation)
    for p in found:
        assert p.eq(zero_squared, zero)
        assert p.eq(q_t, t_squared)


def test_parallel_search_finds_the_same_witness(ex2):
    theory, terms = ex2

    serial = find_evaluation(theory, terms, budget=SearchBudget(jobs=1))
    parallel = find_evaluation(theory, terms, budget=SearchBudget(jobs=2))

    assert isinstance(serial, Witness)
    assert isinstance(parallel, Witness)
    assert str(serial.evaluation) == str(parallel.evaluation)


def test_node_budget(ex2):
    theory, terms = ex2

    outcome = find_evaluation(theory, terms, budget=SearchBudget(max_nodes=1))

    assert isinstance(outcome, BudgetExhausted)
    assert outcome.stats.reason == "node budget"


def test_brute_force_is_capped(ex2):
    theory, terms = ex2

    outcome = find_evaluation(theory, terms, Strategy.BRUTE)

    assert isinstance(outcome, BudgetExhausted)
    assert outcome.stats.reason is not None
    assert "capped" in outcome.stats.reason


def test_empty_sets_are_rejected():
    with pytest.raises(ValueError):
        find_evaluation(preset(Preset.OMEGA0), TermSet.of([]))


def test_singleton_without_instances_is_a_witness():
    outcome = find_evaluation(preset(Preset.OMEGA0), TermSet.of([parse_term("0")]))

    assert isinstance(outcome, Witness)
    assert str(outcome.evaluation) == "0"
    assert outcome.instances == []


def test_strategies_agree(rng, random_terms, random_axiom):
    statuses = set()
    for _ in range(200):
        theory = Theory("RANDOM", [random_axiom(rng) for _ in range(2)])
        terms = random_terms(rng, rng.randint(1, 5))

        brute = find_evaluation(theory, terms, Strategy.BRUTE)
        fast = find_evaluation(theory, terms, Strategy.PROPAGATE)

        assert brute.status == fast.status, f"{theory.axioms} on {terms}"
        statuses.add(fast.status)
        match brute, fast:
            case Witness(evaluation=p), Witness(evaluation=q):
                assert str(p) == str(q)
                assert is_evaluation(q) and is_T_evaluation(q, theory)
            case Inconsistent(), Inconsistent():
                assert_core_is_unsatisfiable(brute)
                assert_core_is_unsatisfiable(fast)

    assert statuses == {Status.WITNESS, Status.INCONSISTENT}


def _closed_draw(rng, level: list[Term], size: int) -> TermSet:
    """A subterm-closed set of at most `size` terms grown from a few hull members."""
    while True:
        seeds = rng.sample(level, rng.randint(1, 3))
        terms = TermSet.of(n for s in seeds for n in s.nodes())
        if 2 <= len(terms) <= size:
            return terms


@pytest.mark.parametrize("name", [pytest.param(p, id=p.value) for p in Preset])
def test_strategies_agree_on_presets(rng, name):
    theory = preset(name)
    pool = symbol_pool(theory.registry, HullMode.THEORY, theory)
    level = TermSet.of([parse_term("0")])
    for _ in range(2):
        level = hull_step(level, None, pool)

    for _ in range(34):
        terms = _closed_draw(rng, list(level), 6)

        brute = find_evaluation(theory, terms, Strategy.BRUTE)
        fast = find_evaluation(theory, terms, Strategy.PROPAGATE)

        assert brute.status == fast.status, f"{name} on {terms}"
        match brute, fast:
            case Witness(evaluation=p), Witness(evaluation=q):
                assert str(p) == str(q), f"{name} on {terms}"
                assert is_evaluation(q) and is_T_evaluation(q, theory, fast.instances)
            case Inconsistent(), Inconsistent():
                assert_core_is_unsatisfiable(fast)


def test_find_all_walks_the_canonical_order(rng, random_terms, random_axiom):
    for _ in range(60):
        theory = Theory("RANDOM", [random_axiom(rng)])
        terms = random_terms(rng, rng.randint(2, 4))
        expected = [
            p
            for p in enumerate_pre_evaluations(terms)
            if is_evaluation(p) and is_T_evaluation(p, theory)
        ]

        every = [str(p) for p in find_all(theory, terms)]
        distinct = [str(p) for p in find_all(theory, terms, distinct_structures=True)]

        assert every == [str(p) for p in expected]
        assert distinct == [str(p) for p in expected if is_block_sorted(p, terms)]


def test_predecessor_of_a_term_below_zero(ex3):
    theory, terms = ex3
    symbols = DeclaringSymbols(theory.registry)
    psi = parse_formula("x <= 0 -> x = 0")
    t = parse_term("$t", symbols)

    assert check_universal(theory, psi, t, terms)


def test_predecessor_needs_the_last_successor(ex3):
    theory, terms = ex3
    symbols = DeclaringSymbols(theory.registry)
    psi = parse_formula("x <= 0 -> x = 0")
    t = parse_term("$t", symbols)
    smaller = terms.without(parse_term("S($h($t, 0) + $p($t))", symbols))

    assert not check_universal(theory, psi, t, smaller)


def test_universal_check_reports_an_exhausted_budget(ex3):
    theory, terms = ex3
    psi = parse_formula("x <= 0 -> x = 0")
    t = parse_term("$t", DeclaringSymbols(theory.registry))

    with pytest.raises(SearchBudgetError):
        check_universal(theory, psi, t, terms, Strategy.BRUTE)


@pytest.mark.parametrize(
    "psi, term, error",
    [
        pytest.param("x <= 0", "S(S(0))", TermNotInDomainError, id="t not in the set"),
        pytest.param("x <= y", "0", ValueError, id="two free variables"),
        pytest.param("exists y (x = y)", "0", ValueError, id="quantified"),
        pytest.param("x = S(S(0))", "0", TermNotInDomainError, id="atom not in set"),
    ],
)
def test_bad_universal_checks(ex3, psi, term, error):
    theory, terms = ex3

    with pytest.raises(error):
        check_universal(theory, parse_formula(psi), parse_term(term), terms)


def test_remark_checks_on_t1():
    results = remark_checks()

    assert len(results) == 4
    for check, holds in results:
        assert holds, check.description


def test_refutation_of_a_contradiction(data_dir):
    theory = read_theory(data_dir / "contradiction.thy")
    base = parse_terms(["0"], theory.registry)

    outcome = herbrand_refute(theory, base, max_level=2)

    assert isinstance(outcome, Inconsistent)
    assert outcome.stats.level == 2
    certificate = outcome.certificate
    assert certificate.method == Method.PROPAGATION
    assert {str(i) for i in certificate.conflict_core} == {"S($0) != 0", "0 = S($0)"}
    assert {str(t) for t in certificate.core_terms} == {"0", "$0", "S($0)"}
    assert_core_is_unsatisfiable(outcome)


def test_refutation_stops_at_the_last_level(data_dir):
    theory = read_theory(data_dir / "contradiction.thy")
    base = parse_terms(["0"], theory.registry)

    outcome = herbrand_refute(theory, base, max_level=1)

    assert isinstance(outcome, BudgetExhausted)
    assert outcome.stats.reason == "max level"
    assert outcome.stats.level == 1
    assert outcome.evaluation is not None


def test_refutation_of_a_counterexample_on_gamma(data_dir, term_set):
    theory = preset(Preset.EX3_PLUS)
    lines = (data_dir / "gamma_t.lam").read_text().splitlines()
    gamma_c = [
        line.replace("$t", "$c") for line in lines if line and not line.startswith("#")
    ]

    outcome = herbrand_refute(theory, term_set(theory, *gamma_c), max_level=0)

    assert isinstance(outcome, Inconsistent)
    assert outcome.stats.level == 0
    assert_core_is_unsatisfiable(outcome)


def test_consistent_theory_keeps_its_last_witness():
    theory = preset(Preset.OMEGA0)
    base = TermSet.of([parse_term("0")])

    outcome = herbrand_refute(theory, base, max_level=2)

    assert isinstance(outcome, BudgetExhausted)
    assert outcome.evaluation is not None
    assert outcome.terms is not None
    assert parse_term("$q(0)", theory.registry) in outcome.terms


def test_refutation_stops_when_the_hull_is_too_large():
    theory = preset(Preset.OMEGA0)
    base = TermSet.of([parse_term("0")])

    outcome = herbrand_refute(theory, base, max_level=3, max_terms=20)

    assert isinstance(outcome, BudgetExhausted)
    assert outcome.stats.level == 1
    assert outcome.stats.reason == "Hull level 2 exceeds 20 terms"


def test_greedy_core_drops_what_is_not_needed():
    theory = preset(Preset.EX3)
    terms = parse_terms(["0", "S(0)", "S(S(0))"], theory.registry)
    outcome = find_evaluation(theory, terms)
    assert isinstance(outcome, Witness)
    instances = outcome.instances
    needed = instances[0]

    core = greedy_core(instances, lambda subset: needed in subset, attempts=100)
    capped = greedy_core(instances, lambda subset: needed in subset, attempts=1)

    assert core == [needed]
    assert len(capped) == len(instances) - (instances[-1] != needed)
