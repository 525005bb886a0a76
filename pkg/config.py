from __future__ import annotations

import os

APP_NAME = "fsplit"

# bump this each time the JSON schema or a default changes
APP_VERSION = "0.3.0"

# -------------------- Engine defaults --------------------
DEFAULT_DEGREE_CAP = 512
DEFAULT_E_MAX = 4
DEFAULT_WINDOW = 2

# enumerate_monomial_primes / sr_ideal walk all 2^n variable subsets
VERTEX_BOUND = 12

HOMOGENIZING_VARIABLE = "t_h"
ADJOINED_VARIABLE = "x_new"

# -------------------- Environment --------------------
ENV_DEGREE_CAP = "FSPLIT_DEGREE_CAP"
ENV_LOG_DIR = "FSPLIT_LOG_DIR"

EXIT_OK = 0
EXIT_ENGINE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def resolve_degree_cap(explicit: int | None = None) -> int:
    """Explicit flag wins, then FSPLIT_DEGREE_CAP, then DEFAULT_DEGREE_CAP."""
    from models.errors import ValidationError

    if explicit is not None:
        raw: object = explicit
    else:
        raw = os.environ.get(ENV_DEGREE_CAP, "").strip() or DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise ValidationError(f"degree cap must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise ValidationError(f"degree cap must be positive, got {cap}")
    return cap
