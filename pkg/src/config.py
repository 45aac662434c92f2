"""
Runtime Settings

This module holds the tunable limits of the package and reads their
environment overrides.
"""

import logging
import math
import os
import re
from collections.abc import Mapping
from dataclasses import dataclass, replace

from .errors import InputError

logger = logging.getLogger(__name__)

BUDGET_ENV = "FLP_BUDGET"

# C(20, 6): twenty agents and six facilities
DEFAULT_BUDGET = math.comb(20, 6)


@dataclass(frozen=True)
class Settings:
    """
    Limits consulted by the solvers and the verification layer.

    Attributes:
        budget (int): Largest C(n, k) the brute-force solver will enumerate
        grid_points (int): Size of the uniform misreport grid
        perturb_rounds (int): Step-halving rounds of the worst-case search
        climb_candidates (int): Sampled instances refined by hill climbing
    """

    budget: int = DEFAULT_BUDGET
    grid_points: int = 200
    perturb_rounds: int = 8
    climb_candidates: int = 5


def load_settings(environ: Mapping[str, str] | None = None) -> Settings:
    """
    Builds the settings, applying the `FLP_BUDGET` override when present.

    Args:
        environ (Mapping[str, str] | None): Environment to read, defaults to
        `os.environ`

    Returns:
        Settings: Default settings with the overrides applied

    Example:
        - load_settings({}).budget  # Returns: 38760
        - load_settings({"FLP_BUDGET": "500"}).budget  # Returns: 500
        - load_settings({"FLP_BUDGET": "lots"})  # Raises: InputError
    """
    environ = os.environ if environ is None else environ
    settings = Settings()

    raw = environ.get(BUDGET_ENV)
    if raw is None:
        return settings

    if not re.fullmatch(r"\s*\d+\s*", raw) or int(raw) <= 0:
        raise InputError(f"{BUDGET_ENV} must be a positive integer: {raw!r}")

    logger.debug("enumeration budget overridden to %s", raw.strip())
    return replace(settings, budget=int(raw))


__all__ = [
    "BUDGET_ENV",
    "DEFAULT_BUDGET",
    "Settings",
    "load_settings",
]
