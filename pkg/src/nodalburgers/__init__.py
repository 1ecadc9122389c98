"""Cell-centered nodal integral solver for 1D/2D viscous Burgers equations."""

from .mesh import Grid1D, Grid2D, NodeIndex
from .problems import (ProblemSpec1D, ProblemSpec2D, make_grid_1d, make_grid_2d,
                       manufactured_2d, shock_1d, shock_2d, shock_like,
                       sine_wave, zero_field)
from .solver1d import (BoundarySide, BoundarySpec1D, SolverConfig,
                       run_transient_1d)
from .solver2d import run_transient_2d

__version__ = "0.1.0"

__all__ = [
    "Grid1D", "Grid2D", "NodeIndex",
    "ProblemSpec1D", "ProblemSpec2D", "make_grid_1d", "make_grid_2d",
    "shock_1d", "sine_wave", "shock_like", "shock_2d", "manufactured_2d",
    "zero_field",
    "BoundarySide", "BoundarySpec1D", "SolverConfig",
    "run_transient_1d", "run_transient_2d",
]
