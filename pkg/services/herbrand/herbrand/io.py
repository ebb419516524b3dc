"""
Files and payloads: `.thy` theories, `.lam` term sets and the text and JSON
forms of search outcomes.

A `.thy` file holds one closed formula per line; `alias $name := formula`
lines name the Skolem symbol of an existential formula. A `.lam` file holds
one ground term per line; `$name` constants that no theory defines are
declared as fresh constants. `#` starts a comment in both.
"""

import json
from collections.abc import Iterable
from pathlib import Path

from loguru import logger

from domain.core import Schema
from domain.syntax import parse_formula, parse_term
from herbrand.core.options import OutputFormat
from herbrand.evaluation.pre_evaluation import PreEvaluation
from herbrand.reports.growth import GrowthReport
from herbrand.search.model import Clash, FiniteHerbrandModel, TableEntry
from herbrand.search.outcome import (
    BudgetExhausted,
    Inconsistent,
    Method,
    SearchOutcome,
    SearchStats,
    Status,
    Witness,
)
from herbrand.skolem.registry import DeclaringSymbols, SkolemRegistry
from herbrand.skolem.skolemize import Skolemized
from herbrand.skolem.term_set import TermSet
from herbrand.skolem.theory import Theory

SCHEMA_VERSION = "1.0"
SCHEMA_PATH = Path(__file__).parents[1] / "schemas" / "outcome.schema.json"
ALIAS_PREFIX = "alias "


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_theory(
    text: str, name: str = "THEORY", registry: SkolemRegistry | None = None
) -> Theory:
    axioms, aliases = [], {}
    for number, line in _lines(text):
        if line.startswith(ALIAS_PREFIX):
            label, sep, formula = line[len(ALIAS_PREFIX) :].partition(":=")
            label = label.strip()
            if not sep or not label.startswith("$"):
                raise ValueError(f"line {number}: expected 'alias $name := formula'")
            aliases[label[1:]] = formula.strip()
        else:
            axioms.append(parse_formula(line))
    if not axioms:
        raise ValueError(f"Theory {name} has no axioms")
    return Theory(name, axioms, registry, aliases)


def read_theory(path: Path, registry: SkolemRegistry | None = None) -> Theory:
    theory = parse_theory(path.read_text(), path.stem.upper(), registry)
    logger.info(f"[{theory.name}] Read {len(theory)} axioms from {path}")
    return theory


def parse_terms(
    texts: Iterable[str], registry: SkolemRegistry, provenance: str = "user"
) -> TermSet:
    symbols = DeclaringSymbols(registry)
    return TermSet.of((parse_term(t, symbols) for t in texts), provenance)


def read_terms(path: Path, registry: SkolemRegistry) -> TermSet:
    terms = parse_terms(
        (line for _, line in _lines(path.read_text())), registry, path.name
    )
    logger.info(f"Read {len(terms)} terms from {path}")
    return terms


def skolemized_lines(theory: Theory) -> list[str]:
    """The stages of every axiom and the symbol registry, as printed by the CLI."""
    out = [f"# {theory.name}"]
    for k, s in enumerate(theory.skolemized):
        out += [
            f"axiom {k}: {s.source}",
            f"  rnnf:   {s.rnnf}",
            f"  skolem: {s.skolem}",
            f"  open:   {s.open}",
            f"  free:   {', '.join(s.free_vars) or '-'}",
        ]
    out.append("symbols:")
    out += [f"  {symbol.describe()}" for symbol in theory.registry]
    return out


class SkolemizeReport(Schema):
    schema_version: str = SCHEMA_VERSION
    theory: str
    axioms: list[dict[str, str | list[str]]]
    symbols: list[str]

    @classmethod
    def of(cls, theory: Theory) -> "SkolemizeReport":
        return cls(
            theory=theory.name,
            axioms=[_stages(s) for s in theory.skolemized],
            symbols=[symbol.describe() for symbol in theory.registry],
        )


def _stages(s: Skolemized) -> dict[str, str | list[str]]:
    return {
        "source": str(s.source),
        "rnnf": str(s.rnnf),
        "skolem": str(s.skolem),
        "open": str(s.open),
        "free_vars": list(s.free_vars),
    }


class CertificateReport(Schema):
    method: Method
    conflict_core: list[str]
    core_terms: list[str]


class OutcomeReport(Schema):
    """The stable payload of a search outcome."""

    schema_version: str = SCHEMA_VERSION
    status: Status
    terms: list[str]
    instances: list[str]
    witness: str | None = None
    certificate: CertificateReport | None = None
    stats: SearchStats

    @classmethod
    def of(cls, outcome: SearchOutcome) -> "OutcomeReport":
        match outcome:
            case Witness(evaluation=p):
                witness, certificate = str(p), None
            case Inconsistent(certificate=c):
                witness = None
                certificate = CertificateReport(
                    method=c.method,
                    conflict_core=[str(i) for i in c.conflict_core],
                    core_terms=[str(t) for t in c.core_terms],
                )
            case BudgetExhausted(evaluation=p):
                witness = None if p is None else str(p)
                certificate = None
            case _:
                raise TypeError(f"Not a search outcome: {outcome!r}")
        terms = outcome.terms
        return cls(
            status=outcome.status,
            terms=[] if terms is None else [str(t) for t in terms],
            instances=[str(i) for i in outcome.instances],
            witness=witness,
            certificate=certificate,
            stats=outcome.stats,
        )

    def lines(self) -> list[str]:
        out = [
            f"status: {self.status.value}",
            f"terms: {{{', '.join(self.terms)}}}",
            f"instances: {len(self.instances)}",
        ]
        out += [f"  [{i}] {inst}" for i, inst in enumerate(self.instances)]
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
        if self.certificate is not None:
            out.append(f"method: {self.certificate.method.value}")
            out.append(f"conflict core: {len(self.certificate.conflict_core)}")
            out += [f"  {inst}" for inst in self.certificate.conflict_core]
            out.append(f"core terms: {{{', '.join(self.certificate.core_terms)}}}")
        stats = self.stats.model_dump(exclude_none=True, mode="json")
        out.append("stats: " + ", ".join(f"{k}={v}" for k, v in stats.items()))
        return out


def render(report: Schema, fmt: OutputFormat, lines: list[str]) -> str:
    match fmt:
        case OutputFormat.JSON:
            return report.to_json()
        case OutputFormat.CSV:
            if not isinstance(report, GrowthReport):
                raise ValueError("CSV output is only available for the q chain report")
            return report.to_csv()
    return "\n".join(lines)


def read_report(path: Path) -> OutcomeReport:
    return OutcomeReport.read(path)


def outcome_schema() -> dict:
    return json.loads(SCHEMA_PATH.read_text())


class UniversalReport(Schema):
    schema_version: str = SCHEMA_VERSION
    psi: str
    term: str
    holds: bool
    outcome: OutcomeReport

    def lines(self) -> list[str]:
        return [f"holds: {str(self.holds).lower()}", *self.outcome.lines()]


class ModelReport(Schema):
    schema_version: str = SCHEMA_VERSION
    evaluation: str
    universe: list[list[str]]
    tables: list[TableEntry]
    leq: list[tuple[int, int]]
    clashes: list[Clash] = []

    @classmethod
    def of(cls, p: PreEvaluation, model: FiniteHerbrandModel) -> "ModelReport":
        return cls(
            evaluation=str(p),
            universe=[[str(t) for t in c] for c in model.universe],
            tables=model.entries,
            leq=model.leq,
            clashes=model.clashes,
        )


class HullReport(Schema):
    schema_version: str = SCHEMA_VERSION
    level: int
    terms: list[str]

    def lines(self) -> list[str]:
        return [f"# level {self.level}: {len(self.terms)} terms", *self.terms]
