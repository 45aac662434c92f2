"""
Root package for flgame

This package models the agent-constrained facility location game on a
line: agents report positions, k facilities must be placed at k distinct
agents. It provides exact optimal solvers, strategyproof mechanisms for
the sum and max cost variants, and tools to verify them: a misreport
refuter, exact approximation ratios, a worst-case search, seeded instance
generators and regression fixtures.

Functions:
- Coordinates:
  - `parse_coord`,
  - `format_coord`,
  - `is_coord_format`
- Model:
  - `make_instance`,
  - `agent_cost`,
  - `social_cost`,
  - `expected_social_cost`,
  - `expected_agent_cost`,
  - `order_stats`
- Solver:
  - `brute_force_optimal`,
  - `fast_optimal_sum`,
  - `enumerate_solutions`
- Mechanisms:
  - `apply`,
  - `mechanism_ids`,
  - `parse_mechanism`
- Bounds:
  - `theoretical_bound`,
  - `sqrt5_ratio_upper`,
  - `sqrt5_ratio_lower`
- Generator:
  - `generate`,
  - `generate_one`,
  - `perturb`,
  - `mirror`
- Verification:
  - `sp_refute`,
  - `refute_strategyproofness`,
  - `check_deviation`,
  - `approx_ratio`,
  - `worst_ratio_search`,
  - `sp_suite`
- Fixtures:
  - `run_regressions`,
  - `fixture_names`

"""

from .bounds import sqrt5_ratio_lower, sqrt5_ratio_upper, theoretical_bound
from .config import Settings, load_settings
from .coords import format_coord, is_coord_format, parse_coord
from .errors import (
    BudgetExceededError,
    FacilityLocationError,
    InfeasibleError,
    InputError,
    LotteryError,
    MechanismPreconditionError,
    PreconditionError,
    RegressionFailure,
    UnsupportedVariantError,
)
from .fixtures import fixture_names, run_regressions
from .generator import (
    Family,
    GenSpec,
    generate,
    generate_one,
    mirror,
    perturb,
)
from .mechanisms import MechanismId, apply, mechanism_ids, parse_mechanism
from .model import (
    Instance,
    Lottery,
    Solution,
    Variant,
    agent_cost,
    expected_agent_cost,
    expected_social_cost,
    make_instance,
    order_stats,
    social_cost,
)
from .solver import (
    OptResult,
    brute_force_optimal,
    enumerate_solutions,
    fast_optimal_sum,
)
from .verification import (
    RatioReport,
    SpViolation,
    approx_ratio,
    check_deviation,
    refute_strategyproofness,
    sp_refute,
    sp_suite,
    worst_ratio_search,
)

__all__ = [
    # Coordinates
    "parse_coord",
    "format_coord",
    "is_coord_format",
    # Config
    "Settings",
    "load_settings",
    # Errors
    "FacilityLocationError",
    "InputError",
    "InfeasibleError",
    "PreconditionError",
    "MechanismPreconditionError",
    "UnsupportedVariantError",
    "BudgetExceededError",
    "LotteryError",
    "RegressionFailure",
    # Model
    "Variant",
    "Instance",
    "Solution",
    "Lottery",
    "make_instance",
    "agent_cost",
    "social_cost",
    "expected_social_cost",
    "expected_agent_cost",
    "order_stats",
    # Solver
    "OptResult",
    "enumerate_solutions",
    "brute_force_optimal",
    "fast_optimal_sum",
    # Mechanisms
    "MechanismId",
    "mechanism_ids",
    "parse_mechanism",
    "apply",
    # Bounds
    "theoretical_bound",
    "sqrt5_ratio_upper",
    "sqrt5_ratio_lower",
    # Generator
    "Family",
    "GenSpec",
    "generate",
    "generate_one",
    "perturb",
    "mirror",
    # Verification
    "SpViolation",
    "RatioReport",
    "sp_refute",
    "refute_strategyproofness",
    "check_deviation",
    "approx_ratio",
    "worst_ratio_search",
    "sp_suite",
    # Fixtures
    "run_regressions",
    "fixture_names",
]
