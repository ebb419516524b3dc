from enum import Enum

from loguru import logger

from domain.core import Schema
from domain.syntax import parse_formula
from herbrand.skolem.registry import SkolemRegistry
from herbrand.skolem.theory import Theory

SQUARE = "exists y <= x*x (y = x*x)"

IND_SQ = (
    "(exists y <= 0*0 (y = 0*0)) & forall x ((exists y <= x*x (y = x*x)) -> "
    "exists y <= S(x)*S(x) (y = S(x)*S(x))) -> forall x exists y <= x*x (y = x*x)"
)

# the witness of a failing induction step for squaring
SQUARE_STEP = (
    "exists x ((exists y <= x*x (y = x*x)) & "
    "!(exists y <= S(x)*S(x) (y = S(x)*S(x))))"
)

EX3_AXIOMS = [
    "forall x (S(x) != 0)",
    "forall x forall y (x + S(y) = S(x + y))",
    "forall x exists z (x != 0 -> x = S(z))",
    "forall x forall y exists z (x <= y -> z + x = y)",
]

EX3_ALIASES = {
    "p": "exists z (x != 0 -> x = S(z))",
    "h": "exists z (x <= y -> z + x = y)",
}

T1_AXIOMS = [
    "forall x (x + 0 = x)",
    "forall x forall y (x + S(y) = S(x + y))",
    "forall x (x * 0 = 0)",
    "forall x forall y (x * S(y) = x * y + x)",
    "forall x ((x <= 0 -> x = 0) & (x = 0 -> x <= 0))",
    "forall x forall y ((x <= S(y) -> x = S(y) | x <= y) & "
    "(x = S(y) | x <= y -> x <= S(y)))",
    "forall x forall y (x <= y | y <= x)",
    "forall x forall y forall z (x <= y & y <= z -> x <= z)",
    "forall x forall z (x <= z + x)",
    "forall x forall z (x <= x + z)",
    "forall x forall y forall z (x + z <= y + z -> x <= y)",
    "forall x forall y forall z (z != 0 & x * z <= y * z -> x <= y)",
    "forall x forall y ((x != y -> S(x) <= y | S(y) <= x) & "
    "(S(x) <= y | S(y) <= x -> x != y))",
    "forall x forall y ((!(x <= y) -> S(y) <= x) & (S(y) <= x -> !(x <= y)))",
    "forall x forall y (x <= y -> exists z (z + x = y))",
    "forall x forall y (y != 0 -> exists q exists r (x = r + q * y & r <= y))",
]


class Preset(str, Enum):
    EX2 = "EX2"
    EX3 = "EX3"
    EX3_PLUS = "EX3_PLUS"
    T1 = "T1"
    IND_SQ = "IND_SQ"
    OMEGA0 = "OMEGA0"


class PresetDefinition(Schema):
    description: str
    axioms: list[str]
    aliases: dict[str, str] = {}


PRESETS: dict[Preset, PresetDefinition] = {
    Preset.IND_SQ: PresetDefinition(
        description="Induction for the totality of squaring",
        axioms=[IND_SQ],
        aliases={"c": SQUARE_STEP, "q": SQUARE},
    ),
    Preset.EX2: PresetDefinition(
        description="x*0 = 0 with induction for squaring",
        axioms=["forall x (x*0 = 0)", IND_SQ],
        aliases={"c": SQUARE_STEP, "q": SQUARE},
    ),
    Preset.OMEGA0: PresetDefinition(
        description="Totality of squaring as a single axiom",
        axioms=[f"forall x {SQUARE}"],
        aliases={"q": SQUARE},
    ),
    Preset.EX3: PresetDefinition(
        description="Successor, addition, predecessor and difference",
        axioms=EX3_AXIOMS,
        aliases=EX3_ALIASES,
    ),
    Preset.EX3_PLUS: PresetDefinition(
        description="EX3 with a counterexample to x <= 0 -> x = 0",
        axioms=[*EX3_AXIOMS, "exists x !(x <= 0 -> x = 0)"],
        aliases={**EX3_ALIASES, "c": "exists x (x <= 0 & x != 0)"},
    ),
    Preset.T1: PresetDefinition(
        description="Open axioms of arithmetic with difference and division",
        axioms=T1_AXIOMS,
        aliases={
            "d": "exists z (z + x = y)",
            "qt": "exists q exists r (x = r + q * y & r <= y)",
            "rm": "exists r (x = r + q * y & r <= y)",
        },
    ),
}


class UnknownPresetError(ValueError):
    """No preset theory has the given name."""


def preset(name: str | Preset, registry: SkolemRegistry | None = None) -> Theory:
    """
    Build a preset theory, Skolemized against `registry` (a fresh one by
    default).
    """
    try:
        key = Preset(name.upper() if isinstance(name, str) else name)
    except ValueError as e:
        known = ", ".join(p.value for p in Preset)
        raise UnknownPresetError(f"Unknown preset '{name}', use one of {known}") from e

    definition = PRESETS[key]
    axioms = [parse_formula(text) for text in definition.axioms]
    theory = Theory(key.value, axioms, registry, definition.aliases)
    logger.info(f"[{key.value}] Loaded preset with {len(theory)} axioms")
    return theory
