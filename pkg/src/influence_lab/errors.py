"""Exception hierarchy and the table-size resource cap."""

from __future__ import annotations

import os

DEFAULT_MAX_TABLE = 1_000_000


class InfluenceLabError(Exception):
    """Base class for all library errors."""


class DomainError(InfluenceLabError, ValueError):
    """Invalid argument: out-of-range coordinate, malformed domain, bad parameter."""


class StateError(InfluenceLabError, RuntimeError):
    """Operation applied to an object in the wrong state (e.g. a raw tree)."""


class ResourceError(InfluenceLabError, RuntimeError):
    """A table or search would exceed the configured size cap."""


def max_table_entries() -> int:
    """Size cap for dense tables, from INFLUENCE_LAB_MAX_TABLE (default 10^6)."""
    raw = os.environ.get("INFLUENCE_LAB_MAX_TABLE")
    if not raw:
        return DEFAULT_MAX_TABLE
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(f"INFLUENCE_LAB_MAX_TABLE is not an integer: {raw!r}") from exc
    if cap < 1:
        raise DomainError("INFLUENCE_LAB_MAX_TABLE must be positive")
    return cap
