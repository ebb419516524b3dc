from enum import Enum


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    # growth report only
    CSV = "csv"


class Strategy(str, Enum):
    BRUTE = "brute"
    PROPAGATE = "propagate"


class Availability(str, Enum):
    """
    When a Skolem instance counts as available in a term set:
    ATOMIC needs every atom argument in the set, SUBTERM every term node.
    """

    ATOMIC = "atomic"
    SUBTERM = "subterm"


class HullMode(str, Enum):
    FULL = "full"
    THEORY = "theory"
