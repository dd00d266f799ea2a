"""Weighted sum-rate maximization over spectral-radius constrained regions.

Thin wrapper around the compiled extension. The main entry points:

- ``Family.from_problem(M, u, p_max)`` builds the constraint family.
- ``solve_rate`` / ``solve_sinr`` run the projection solvers and return the
  full iteration trace as numpy arrays.
- ``recover_power`` maps a rate solution back to transmit powers.
- ``generate_problem`` draws a synthetic uplink instance.
"""

from ._core import (
    Family,
    SumrateError,
    achieved_rates,
    check_rate_convexity,
    check_sinr_convexity,
    exp_map,
    family_inverse_z,
    generate_problem,
    h_rate,
    is_inverse_z,
    perron_pair,
    recover_power,
    rho_g,
    solve_rate,
    solve_sinr,
    spectral_radius,
    subgrad_rate,
    subgrad_sinr,
    wmmse,
)

__all__ = [
    "Family",
    "SumrateError",
    "achieved_rates",
    "check_rate_convexity",
    "check_sinr_convexity",
    "exp_map",
    "family_inverse_z",
    "generate_problem",
    "h_rate",
    "is_inverse_z",
    "perron_pair",
    "recover_power",
    "rho_g",
    "solve_rate",
    "solve_sinr",
    "spectral_radius",
    "subgrad_rate",
    "subgrad_sinr",
    "wmmse",
]

__version__ = "0.1.0"
