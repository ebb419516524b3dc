import json

import pytest
from click.testing import CliRunner, Result

from herbrand.io import OutcomeReport, outcome_schema
from herbrand.main import app


@pytest.fixture
def cli():
    runner = CliRunner()

    def invoke(*args: str) -> Result:
        return runner.invoke(app, list(args))

    return invoke


@pytest.fixture
def ex2_args(data_dir) -> list[str]:
    return ["--preset", "EX2", "--terms", str(data_dir / "ex2.lam")]


@pytest.fixture
def gamma_args(data_dir) -> list[str]:
    return [
        "--preset",
        "EX3",
        "--terms",
        str(data_dir / "gamma_t.lam"),
        "--psi",
        "x <= 0 -> x = 0",
        "--term",
        "t",
    ]


def test_presets(cli):
    result = cli("presets")

    assert result.exit_code == 0
    for name in ("EX2", "EX3", "EX3_PLUS", "T1", "IND_SQ", "OMEGA0"):
        assert name in result.output


def test_skolemize_prints_the_golden_stages(cli, golden_dir):
    result = cli("skolemize", "--preset", "ind_sq")

    assert result.exit_code == 0
    for line in (golden_dir / "ind_sq.txt").read_text().splitlines():
        assert line in result.output


def test_skolemize_a_single_formula(cli):
    result = cli(
        "skolemize", "--formula", "forall x exists y (y = S(x))", "--format", "json"
    )

    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["theory"] == "FORMULA"
    assert report["axioms"][0]["open"] == "$0(v0) = S(v0)"
    assert report["axioms"][0]["free_vars"] == ["v0"]


def test_solve_finds_a_witness(cli, ex2_args):
    result = cli("solve", *ex2_args)

    assert result.exit_code == 0
    assert result.output.startswith("status: witness")


def test_solve_output_is_reproducible(cli, ex2_args):
    first = cli("solve", *ex2_args, "--format", "json")
    second = cli("solve", *ex2_args, "--format", "json")

    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output
    payload = json.loads(first.output)
    assert payload["status"] == "witness"
    assert set(payload) <= set(outcome_schema()["properties"])
    assert OutcomeReport.parse(payload).witness is not None


def test_refute_a_contradiction(cli, data_dir):
    result = cli(
        "refute",
        "--theory",
        str(data_dir / "contradiction.thy"),
        "--base",
        "0",
        "--max-level",
        "2",
        "--format",
        "json",
    )

    assert result.exit_code == 1
    payload = json.loads(result.output)
    assert payload["status"] == "inconsistent"
    assert payload["stats"]["level"] == 2
    assert payload["certificate"]["method"] == "propagation"


def test_refute_runs_out_of_terms(cli):
    result = cli(
        "refute",
        "--preset",
        "OMEGA0",
        "--base",
        "0",
        "--max-level",
        "3",
        "--max-terms",
        "20",
    )

    assert result.exit_code == 3


def test_check_universal_holds(cli, gamma_args):
    result = cli("check-universal", *gamma_args)

    assert result.exit_code == 0
    assert result.output.startswith("holds: true")


def test_check_universal_without_a_verdict(cli, gamma_args):
    result = cli("check-universal", *gamma_args, "--strategy", "brute")

    assert result.exit_code == 3


def test_model_of_the_first_witness(cli, ex2_args):
    result = cli("model", *ex2_args)

    assert result.exit_code == 0
    assert result.output.startswith("[0] ")


def test_model_of_a_given_evaluation(cli):
    result = cli(
        "model", "--preset", "EX2", "--evaluation", "0 ~ S(0) < 0*0 < S(0)*S(0)"
    )

    assert result.exit_code == 0
    assert "ill-defined" in result.output


def test_model_reads_a_saved_witness(cli, ex2_args, tmp_path):
    saved = tmp_path / "ex2.json"
    saved.write_text(cli("solve", *ex2_args, "--format", "json").output)

    from_report = cli("model", "--preset", "EX2", "--report", str(saved))
    direct = cli("model", *ex2_args)

    assert from_report.exit_code == 0
    assert from_report.output == direct.output


def test_hull(cli):
    result = cli("hull", "--preset", "OMEGA0", "--base", "0", "--levels", "1")

    assert result.exit_code == 0
    assert result.output.startswith("# level 1: 5 terms")
    assert "$0(0)" in result.output


def test_q_chain_report(cli):
    result = cli("code", "--preset", "OMEGA0", "--q-chain", "4", "--format", "json")

    assert result.exit_code == 0
    assert json.loads(result.output)["c"] == 19


def test_q_chain_report_as_csv(cli):
    result = cli("code", "--preset", "OMEGA0", "--q-chain", "4", "--format", "csv")

    assert result.exit_code == 0
    header, *rows = result.output.splitlines()
    assert header == "i,value_bits,code_bits"
    assert [row.split(",")[:2] for row in rows[:2]] == [["0", "2"], ["1", "3"]]
    assert len(rows) == 5


def test_csv_is_only_for_the_q_chain(cli):
    result = cli("code", "--term", "S(0)", "--format", "csv")

    assert result.exit_code == 2


def test_code_of_a_term(cli):
    result = cli("code", "--term", "S(0)")

    assert result.exit_code == 0
    assert "bits: 13" in result.output


def test_omega(cli):
    result = cli("code", "--omega", "1", "16")

    assert result.exit_code == 0
    assert result.output.splitlines() == ["omega_1(16) has 17 bits", "65536"]


def test_omega_overflow(cli, monkeypatch):
    monkeypatch.setenv("herbrand_omega_bit_budget", "8")

    result = cli("code", "--omega", "1", "1024")

    assert result.exit_code == 3


def test_schema_matches_the_report(cli):
    result = cli("schema")

    assert result.exit_code == 0
    schema = json.loads(result.output)
    assert set(schema["properties"]) == set(OutcomeReport.model_fields)


@pytest.mark.parametrize(
    "args",
    [
        pytest.param(["solve", "--preset", "PA", "--base", "0"], id="unknown preset"),
        pytest.param(["solve", "--preset", "EX2", "--base", "S("], id="syntax error"),
        pytest.param(
            ["solve", "--preset", "EX2", "--terms", "missing.lam"], id="missing file"
        ),
        pytest.param(["solve", "--base", "0"], id="no theory"),
        pytest.param(
            ["skolemize", "--preset", "EX2", "--formula", "0 = 0"],
            id="two theories",
        ),
        pytest.param(["solve", "--preset", "EX2", "--base", "$nope(0)"], id="symbol"),
        pytest.param(["code", "--term", "S(0)", "--formula", "0 = 0"], id="two codes"),
    ],
)
def test_input_errors(cli, args):
    result = cli(*args)

    assert result.exit_code == 2
