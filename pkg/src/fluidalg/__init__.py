"""Fluid algebra on a periodic cubic lattice and its discrete Euler equation."""
from .chain_complex import (
    Chain0,
    Chain1,
    Chain2,
    Lattice,
    LatticeError,
    TwoHChain1,
    boundary1,
    boundary2,
    star1,
    star2,
)
from .config import ConfigError, SimConfig, parse_config
from .hodge import GreenSet, build_green_set, project_pi
from .intersection import intersect12, intersect22, linking, metric, triple
from .simulator import (
    Diagnostics,
    FluidState,
    energy,
    helicity,
    init_state,
    rhs,
    run,
    step_euler,
    step_midpoint,
    step_rk4,
)
from .vorticity import curl, nonlinear_generic, nonlinear_optimized

__version__ = "0.1.0"

__all__ = [
    "Chain0",
    "Chain1",
    "Chain2",
    "ConfigError",
    "Diagnostics",
    "FluidState",
    "GreenSet",
    "Lattice",
    "LatticeError",
    "SimConfig",
    "TwoHChain1",
    "boundary1",
    "boundary2",
    "build_green_set",
    "curl",
    "energy",
    "helicity",
    "init_state",
    "intersect12",
    "intersect22",
    "linking",
    "metric",
    "nonlinear_generic",
    "nonlinear_optimized",
    "parse_config",
    "project_pi",
    "rhs",
    "run",
    "star1",
    "star2",
    "step_euler",
    "step_midpoint",
    "step_rk4",
    "triple",
]
