"""
Growth of the q chain: q_0 = S(S(0)) and q_(i+1) = $q(q_i) with $q the
squaring witness. Values grow doubly exponentially in i while codes grow
linearly in bits.
"""

import csv
import io

import numpy as np
from loguru import logger

from domain.coding import code_of_term, log2_ratio
from domain.core import Schema
from domain.terms import SkolemApp, Term, numeral, standard_value
from herbrand.evaluation.pre_evaluation import PreEvaluation
from herbrand.skolem.presets import Preset, preset
from herbrand.skolem.registry import SkolemRegistry
from herbrand.skolem.term_set import TermSet


def q_chain(registry: SkolemRegistry, n: int, label: str = "q") -> list[Term]:
    """q_0 .. q_n, with the squaring symbol looked up by its alias."""
    symbol_id = registry.resolve(label, 1)
    chain: list[Term] = [numeral(2)]
    for _ in range(n):
        chain.append(SkolemApp(symbol_id=symbol_id, args=(chain[-1],)))
    return chain


class GrowthRow(Schema):
    i: int
    value_bits: int
    code_bits: int


class GrowthReport(Schema):
    rows: list[GrowthRow]
    # least c with code_bits <= c*i + c on every row
    c: int
    slope: float
    intercept: float

    def value_bits_exact(self) -> bool:
        return all(r.value_bits == 2**r.i + 1 for r in self.rows)

    def code_bits_bounded(self) -> bool:
        return all(r.code_bits <= self.c * r.i + self.c for r in self.rows)

    def lines(self) -> list[str]:
        out = [f"{'i':>3} {'value bits':>12} {'code bits':>10}"]
        out += [f"{r.i:>3} {r.value_bits:>12} {r.code_bits:>10}" for r in self.rows]
        out.append(
            f"code bits <= {self.c}*i + {self.c}; "
            f"least squares {self.slope:.3f}*i + {self.intercept:.3f}"
        )
        return out

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(GrowthRow.model_fields)
        writer.writerows((r.i, r.value_bits, r.code_bits) for r in self.rows)
        return out.getvalue().rstrip("\n")


def growth_report(
    n: int = 16, registry: SkolemRegistry | None = None
) -> GrowthReport:
    """
    Value and code sizes of q_0 .. q_n, with $q read as squaring.

    Args:
        n: The last index.
        registry: A registry where `q` names the squaring witness; the OMEGA0
            preset's by default.
    """
    if n < 1:
        raise ValueError(f"A growth fit needs at least two rows, got n={n}")
    if registry is None:
        registry = preset(Preset.OMEGA0).registry
    symbol_id = registry.resolve("q", 1)
    square = {symbol_id: lambda x: x * x}

    rows = [
        GrowthRow(
            i=i,
            value_bits=standard_value(q, square).bit_length(),
            code_bits=code_of_term(q).bits,
        )
        for i, q in enumerate(q_chain(registry, n))
    ]
    c = max(-(-r.code_bits // (r.i + 1)) for r in rows)
    slope, intercept = np.polyfit(
        [r.i for r in rows], [r.code_bits for r in rows], deg=1
    )
    logger.debug(f"q chain up to {n}: code bits ~ {slope:.2f}*i + {intercept:.2f}")
    return GrowthReport(
        rows=rows, c=c, slope=float(slope), intercept=float(intercept)
    )


def evaluation_code_bound(p: PreEvaluation, terms: TermSet | None = None) -> float:
    """log2 of the code of `p` over log2 of the code of its term set."""
    terms = terms if terms is not None else p.domain
    return log2_ratio(p.code(), terms.code())
