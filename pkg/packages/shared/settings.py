"""Environment-driven configuration.

Values are read from the process environment (and a local ``.env`` file when
present) every time a getter is called, so tests can monkeypatch variables.
"""

import os

from dotenv import load_dotenv

load_dotenv()

DEFAULT_ENUMERATION_CAP = 1 << 20
DEFAULT_FIELD_DEGREE_CAP = 16
DEFAULT_TABLE_CAP = 1 << 16
DEFAULT_SEED = 20240229


def _get_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}") from exc


def get_log_level() -> str:
    """Get log level from environment variable or default."""
    return os.getenv("LOG_LEVEL", "INFO")


def get_log_format() -> str:
    """Get log format ('json' or 'text') from environment variable or default."""
    return os.getenv("LOG_FORMAT", "json")


def get_enumeration_cap() -> int:
    """Largest set the exhaustive enumerators are allowed to walk."""
    return _get_int("ENUMERATION_CAP", DEFAULT_ENUMERATION_CAP)


def get_field_degree_cap() -> int:
    """Largest degree e*m of a field over its prime field."""
    return _get_int("FIELD_DEGREE_CAP", DEFAULT_FIELD_DEGREE_CAP)


def get_table_cap() -> int:
    """Fields up to this size get exp/log tables."""
    return _get_int("FIELD_TABLE_CAP", DEFAULT_TABLE_CAP)


def get_default_seed() -> int:
    return _get_int("DEFAULT_SEED", DEFAULT_SEED)


def get_point_count_workers() -> int:
    """Process-pool size for point counting; 1 disables sharding."""
    return max(1, _get_int("POINT_COUNT_WORKERS", 1))
