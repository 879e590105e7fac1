import enum

__version__ = "0.1.0"


class CurveKind(str, enum.Enum):
    """Supported curve models."""
    PROJECTIVE_LINE = "projective_line"
    ELLIPTIC = "elliptic"
    HYPERELLIPTIC = "hyperelliptic"


class LocalRole(str, enum.Enum):
    """Local condition imposed on a lattice with Frobenius at a place."""
    POLE = "pole"  # the place at infinity
    ZERO = "zero"  # the characteristic place o
    ETALE = "etale"  # every other place


class Command(str, enum.Enum):
    """CLI subcommands."""
    ZETA = "zeta"
    ORDER = "order"
    CENTRALIZER = "centralizer"
    MASS = "mass"
    SINGULAR = "singular"
    INVARIANTS = "invariants"


class OutputFormat(str, enum.Enum):
    JSON = "json"
    TABLE = "table"
