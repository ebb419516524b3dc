import sys
from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Any

import click
from loguru import logger
from pydantic import Field, NonNegativeInt, PositiveFloat, PositiveInt, model_validator

from domain.coding import code_of_formula, code_of_term, omega
from domain.core import Schema
from domain.syntax import parse_formula, parse_term
from herbrand.core.options import Availability, HullMode, OutputFormat, Strategy
from herbrand.core.settings import herbrand_settings
from herbrand.evaluation.pre_evaluation import PreEvaluation
from herbrand.io import (
    SCHEMA_PATH,
    HullReport,
    ModelReport,
    OutcomeReport,
    SkolemizeReport,
    UniversalReport,
    parse_terms,
    read_report,
    read_terms,
    read_theory,
    render,
    skolemized_lines,
)
from herbrand.reports.growth import evaluation_code_bound, growth_report
from herbrand.search.model import extract_model
from herbrand.search.outcome import (
    BudgetExhausted,
    Inconsistent,
    SearchBudgetError,
    SearchOutcome,
    Witness,
)
from herbrand.search.refute import herbrand_refute
from herbrand.search.solver import SearchBudget, find_evaluation
from herbrand.search.universal import check_universal_outcome
from herbrand.skolem.hull import hull_step, symbol_pool
from herbrand.skolem.presets import PRESETS, Preset, preset
from herbrand.skolem.registry import DeclaringSymbols, SkolemRegistry
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory

EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3


class RunConfig(Schema):
    """One CLI run: flags with the settings as defaults."""

    command: str
    preset: Preset | None = None
    theory_file: Path | None = None
    formula: str | None = None
    terms_file: Path | None = None
    base: list[str] = []
    strategy: Strategy
    availability: Availability
    hull_mode: HullMode
    max_level: NonNegativeInt
    threshold: int | None = None
    max_terms: PositiveInt
    max_nodes: PositiveInt
    max_seconds: PositiveFloat
    jobs: PositiveInt
    output_format: OutputFormat
    theory_required: bool = Field(default=True, exclude=True)

    @model_validator(mode="after")
    def one_theory_source(self) -> "RunConfig":
        given = [s for s in (self.preset, self.theory_file, self.formula) if s]
        if len(given) > 1 or (self.theory_required and not given):
            raise ValueError("Give exactly one of --preset, --theory or --formula")
        return self

    @classmethod
    def from_options(cls, command: str, **options: Any) -> "RunConfig":
        settings = herbrand_settings()
        defaults = {
            "strategy": settings.strategy,
            "availability": settings.availability,
            "hull_mode": settings.hull_mode,
            "max_level": settings.max_level,
            "max_terms": settings.max_terms,
            "max_nodes": settings.max_nodes,
            "max_seconds": settings.max_seconds,
            "jobs": settings.jobs,
            "output_format": settings.output_format,
        }
        given = {k: v for k, v in options.items() if v is not None}
        return cls(command=command, **{**defaults, **given})

    def budget(self) -> SearchBudget:
        settings = herbrand_settings()
        return SearchBudget(
            max_nodes=self.max_nodes,
            max_seconds=self.max_seconds,
            jobs=self.jobs,
            brute_max_terms=settings.brute_max_terms,
            core_attempts=settings.core_attempts,
        )

    def has_theory(self) -> bool:
        return any(s for s in (self.preset, self.theory_file, self.formula))

    def load_theory(self, registry: SkolemRegistry | None = None) -> Theory:
        if self.preset is not None:
            return preset(self.preset, registry)
        if self.theory_file is not None:
            return read_theory(self.theory_file, registry)
        if self.formula is not None:
            return Theory("FORMULA", [parse_formula(self.formula)], registry)
        raise ValueError("No theory given")

    def load_terms(self, registry: SkolemRegistry) -> TermSet:
        terms = TermSet.of([])
        if self.terms_file is not None:
            terms = read_terms(self.terms_file, registry)
        if self.base:
            terms = terms.union(parse_terms(self.base, registry))
        return terms


def _exit_code(outcome: SearchOutcome) -> int:
    match outcome:
        case Witness():
            return 0
        case Inconsistent():
            return 1
    return EXIT_BUDGET


def _run(fn: Callable[..., int]) -> Callable[..., None]:
    """Map the result of a command to its exit code, and errors to 2 or 3."""

    @wraps(fn)
    def wrapper(**kwargs: Any) -> None:
        try:
            code = fn(**kwargs)
        except ArithmeticError as e:
            logger.warning(str(e))
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_BUDGET)
        except (ValueError, OSError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT_ERROR)
        sys.exit(code)

    return wrapper


def theory_options(fn: Callable) -> Callable:
    options = [
        click.option(
            "--preset",
            type=click.Choice([p.value for p in Preset], case_sensitive=False),
        ),
        click.option("--theory", "theory_file", type=click.Path(path_type=Path)),
        click.option(
            "--format",
            "output_format",
            type=click.Choice([f.value for f in OutputFormat]),
            help="Defaults to HERBRAND_OUTPUT_FORMAT.",
        ),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def search_options(fn: Callable) -> Callable:
    options = [
        click.option("--strategy", type=click.Choice([s.value for s in Strategy])),
        click.option(
            "--availability", type=click.Choice([a.value for a in Availability])
        ),
        click.option("--max-nodes", type=int, help="Node budget per branch."),
        click.option("--max-seconds", type=float),
        click.option("--jobs", type=int, help="Worker processes for the search."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def terms_options(fn: Callable) -> Callable:
    options = [
        click.option("--terms", "terms_file", type=click.Path(path_type=Path)),
        click.option("--base", multiple=True, help="A term; may be repeated."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def hull_options(fn: Callable) -> Callable:
    options = [
        click.option("--hull-mode", type=click.Choice([m.value for m in HullMode])),
        click.option("--threshold", type=int, help="Uniform Skolem code threshold."),
        click.option("--max-terms", type=int),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group()
def app() -> None:
    """Herbrand consistency workbench."""
    settings = herbrand_settings()
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level)


@app.command()
@theory_options
@click.option("--formula", help="A single closed formula instead of a theory.")
@_run
def skolemize(**options: Any) -> int:
    """Print the RNNF, Skolem and open forms of every axiom."""
    config = RunConfig.from_options("skolemize", **options)
    theory = config.load_theory()
    report = SkolemizeReport.of(theory)
    click.echo(render(report, config.output_format, skolemized_lines(theory)))
    return 0


@app.command()
@theory_options
@terms_options
@search_options
@_run
def solve(**options: Any) -> int:
    """Search for a T-evaluation on a term set."""
    config = RunConfig.from_options("solve", **options)
    theory = config.load_theory()
    terms = config.load_terms(theory.registry)
    outcome = find_evaluation(
        theory, terms, config.strategy, config.availability, config.budget()
    )
    report = OutcomeReport.of(outcome)
    click.echo(render(report, config.output_format, report.lines()))
    return _exit_code(outcome)


@app.command()
@theory_options
@terms_options
@search_options
@hull_options
@click.option("--max-level", type=int)
@_run
def refute(**options: Any) -> int:
    """Grow hulls of the base until no T-evaluation exists."""
    config = RunConfig.from_options("refute", **options)
    theory = config.load_theory()
    outcome = herbrand_refute(
        theory,
        config.load_terms(theory.registry),
        config.max_level,
        config.strategy,
        config.availability,
        config.budget(),
        config.hull_mode,
        config.threshold,
        config.max_terms,
        progress=herbrand_settings().progress,
    )
    report = OutcomeReport.of(outcome)
    click.echo(render(report, config.output_format, report.lines()))
    return _exit_code(outcome)


@app.command("check-universal")
@theory_options
@terms_options
@search_options
@click.option("--psi", required=True, help="Open formula in one free variable.")
@click.option("--term", "term_text", required=True, help="The ground term t.")
@_run
def check_universal_command(psi: str, term_text: str, **options: Any) -> int:
    """Decide whether every T-evaluation on the set satisfies psi(t)."""
    config = RunConfig.from_options("check-universal", **options)
    theory = config.load_theory()
    terms = config.load_terms(theory.registry)
    symbols = DeclaringSymbols(theory.registry)
    # a bare name is the constant $name, as in the term files
    text = f"${term_text}" if term_text.isidentifier() else term_text
    t = parse_term(text, symbols)
    formula = parse_formula(psi, symbols)

    outcome = check_universal_outcome(
        theory,
        formula,
        t,
        terms,
        config.strategy,
        config.availability,
        config.budget(),
    )
    if isinstance(outcome, BudgetExhausted):
        raise SearchBudgetError(f"No verdict on {psi}: {outcome.stats.reason}")
    holds = isinstance(outcome, Inconsistent)
    report = UniversalReport(
        psi=str(formula), term=str(t), holds=holds, outcome=OutcomeReport.of(outcome)
    )
    click.echo(render(report, config.output_format, report.lines()))
    return 0 if holds else 1


@app.command()
@theory_options
@terms_options
@search_options
@click.option("--evaluation", "evaluation_text", help="An evaluation `a < b ~ c`.")
@click.option(
    "--report",
    "report_file",
    type=click.Path(path_type=Path),
    help="A JSON report with a witness.",
)
@_run
def model(
    evaluation_text: str | None, report_file: Path | None, **options: Any
) -> int:
    """Print the finite Herbrand structure of an evaluation."""
    config = RunConfig.from_options("model", **options)
    theory = config.load_theory()
    terms = config.load_terms(theory.registry)
    symbols = DeclaringSymbols(theory.registry)

    if report_file is not None:
        evaluation_text = read_report(report_file).witness
        if evaluation_text is None:
            raise ValueError(f"{report_file} holds no witness")
    if evaluation_text is not None:
        p = PreEvaluation.from_text(evaluation_text, symbols)
    else:
        outcome = find_evaluation(
            theory, terms, config.strategy, config.availability, config.budget()
        )
        if not isinstance(outcome, Witness):
            click.echo(f"no witness: {outcome.status.value}", err=True)
            return _exit_code(outcome)
        p = outcome.evaluation

    structure = extract_model(p)
    report = ModelReport.of(p, structure)
    click.echo(render(report, config.output_format, structure.describe()))
    return 0


@app.command()
@theory_options
@terms_options
@hull_options
@click.option("--levels", type=int, default=1, show_default=True)
@_run
def hull(levels: int, **options: Any) -> int:
    """Print the hull of a term set after some closure steps."""
    config = RunConfig.from_options("hull", **options)
    theory = config.load_theory()
    terms = config.load_terms(theory.registry)
    pool = symbol_pool(theory.registry, config.hull_mode, theory)
    for _ in range(levels):
        terms = hull_step(terms, config.threshold, pool, config.max_terms)
    report = HullReport(level=levels, terms=[str(t) for t in terms])
    click.echo(render(report, config.output_format, report.lines()))
    return 0


class CodeReport(Schema):
    subject: str
    code: str
    bits: int
    bound: float | None = None

    def lines(self) -> list[str]:
        out = [f"{self.subject}", f"code: {self.code}", f"bits: {self.bits}"]
        if self.bound is not None:
            out.append(f"log2 code ratio to the term set: {self.bound:.4f}")
        return out


@app.command()
@theory_options
@terms_options
@click.option("--formula", "formula_text", help="Code of a formula.")
@click.option("--term", "term_text", help="Code of a ground term.")
@click.option("--evaluation", "evaluation_text", help="Code of an evaluation.")
@click.option("--q-chain", type=int, help="Growth report of q_0 .. q_N.")
@click.option(
    "--omega", "omega_args", nargs=2, type=int, help="omega_N(X) within the budget."
)
@_run
def code(
    formula_text: str | None,
    term_text: str | None,
    evaluation_text: str | None,
    q_chain: int | None,
    omega_args: tuple[int, int] | None,
    **options: Any,
) -> int:
    """Godel codes, the q chain growth report and omega values."""
    config = RunConfig.from_options("code", theory_required=False, **options)
    theory = config.load_theory() if config.has_theory() else None
    registry = theory.registry if theory is not None else SkolemRegistry()
    symbols = DeclaringSymbols(registry)

    if q_chain is not None:
        report = growth_report(q_chain, registry if theory is not None else None)
        click.echo(render(report, config.output_format, report.lines()))
        return 0 if report.value_bits_exact() and report.code_bits_bounded() else 1
    if omega_args:
        return _print_omega(*omega_args)

    subjects = [s for s in (formula_text, term_text, evaluation_text) if s]
    if len(subjects) != 1:
        raise ValueError("Give exactly one of --formula, --term or --evaluation")
    if formula_text:
        subject = parse_formula(formula_text, symbols)
        value, bound = code_of_formula(subject), None
    elif term_text:
        subject = parse_term(term_text, symbols)
        value, bound = code_of_term(subject), None
    else:
        terms = config.load_terms(registry)
        subject = PreEvaluation.from_text(evaluation_text or "", symbols)
        value = subject.code()
        bound = evaluation_code_bound(subject, terms if len(terms) else None)

    result = CodeReport(
        subject=str(subject), code=str(value), bits=value.bits, bound=bound
    )
    click.echo(render(result, config.output_format, result.lines()))
    return 0


def _print_omega(n: int, x: int) -> int:
    value = omega(n, x, herbrand_settings().omega_bit_budget)
    click.echo(f"omega_{n}({x}) has {value.bit_length()} bits")
    if value.bit_length() <= 256:
        click.echo(str(value))
    return 0


@app.command()
def presets() -> None:
    """List the preset theories."""
    for key, definition in PRESETS.items():
        click.echo(
            f"{key.value:<9} {len(definition.axioms):>2} axioms  "
            f"{definition.description}"
        )


@app.command()
def schema() -> None:
    """Print the JSON schema of the search reports."""
    click.echo(SCHEMA_PATH.read_text().rstrip())
