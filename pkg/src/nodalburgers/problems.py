"""Benchmark problem definitions with known exact solutions.

Four families:
  * shock1d      - right-moving viscous front on [-2, 2], Dirichlet ends
  * sine         - decaying sin(pi x) wave on [0, 1], homogeneous Dirichlet
  * shocklike    - sin(2 pi x) steepening into an interior front
  * shock2d      - diagonal 2D front on [-2, 2]^2, u = v
plus a 2D manufactured solution with an analytic forcing term for
operator verification.
"""

from dataclasses import dataclass

import numpy as np

from . import oracles
from .mesh import Grid1D, Grid2D
from .solver1d import BoundarySide, BoundarySpec1D


@dataclass
class ProblemSpec1D:
    name: str
    re: float
    x_lo: float
    x_hi: float
    ic: object                      # callable(x)
    bc: BoundarySpec1D
    exact: object = None            # callable(x, t) or None


@dataclass
class BoundarySpec2D:
    """Per-edge Dirichlet data: callables (coord_along_edge, t) -> value.

    Edges are named for the boundary they sit on; values give the velocity
    component field on that edge (same functions serve u and v via the
    component argument of the accessors below).
    """

    u_left: object = 0.0
    u_right: object = 0.0
    u_bottom: object = 0.0
    u_top: object = 0.0
    v_left: object = 0.0
    v_right: object = 0.0
    v_bottom: object = 0.0
    v_top: object = 0.0


@dataclass
class ProblemSpec2D:
    name: str
    re: float
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    ic_u: object                    # callable(x, y)
    ic_v: object
    bc: BoundarySpec2D
    exact: object = None            # callable(x, y, t) -> (u, v)
    forcing: object = None          # callable(x, y, t) -> (fx, fy); None = 0


def make_grid_1d(problem: ProblemSpec1D, n_x: int, dt: float, t_final: float) -> Grid1D:
    n_steps = int(round(t_final / dt))
    if abs(n_steps * dt - t_final) > 1e-9 * max(abs(t_final), 1.0):
        raise ValueError("t_final must be an integer multiple of dt")
    return Grid1D(x_lo=problem.x_lo, x_hi=problem.x_hi, n_x=n_x, dt=dt, n_steps=n_steps)


def make_grid_2d(problem: ProblemSpec2D, n_x: int, n_y: int, dt: float, t_final: float) -> Grid2D:
    n_steps = int(round(t_final / dt))
    if abs(n_steps * dt - t_final) > 1e-9 * max(abs(t_final), 1.0):
        raise ValueError("t_final must be an integer multiple of dt")
    return Grid2D(x_lo=problem.x_lo, x_hi=problem.x_hi, y_lo=problem.y_lo,
                  y_hi=problem.y_hi, n_x=n_x, n_y=n_y, dt=dt, n_steps=n_steps)


def zero_field(re: float = 1.0) -> ProblemSpec1D:
    """Identically zero data; the solution stays zero for any Re."""
    bc = BoundarySpec1D(BoundarySide("dirichlet", 0.0), BoundarySide("dirichlet", 0.0))
    return ProblemSpec1D(name="zero", re=re, x_lo=0.0, x_hi=1.0,
                         ic=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                         bc=bc, exact=lambda x, t: np.zeros_like(np.asarray(x, dtype=float)))


def shock_1d(re: float) -> ProblemSpec1D:
    def exact(x, t):
        return oracles.exact_shock_1d(x, t, re)

    bc = BoundarySpec1D(
        left=BoundarySide("dirichlet", lambda t: float(exact(-2.0, t))),
        right=BoundarySide("dirichlet", lambda t: float(exact(2.0, t))),
    )
    return ProblemSpec1D(name="shock1d", re=re, x_lo=-2.0, x_hi=2.0,
                         ic=lambda x: exact(x, 0.0), bc=bc, exact=exact)


def sine_wave(re: float) -> ProblemSpec1D:
    series = oracles.fourier_series(re, mode=1)

    def exact(x, t):
        return oracles.fourier_solution(x, t, series)

    bc = BoundarySpec1D(BoundarySide("dirichlet", 0.0), BoundarySide("dirichlet", 0.0))
    return ProblemSpec1D(name="sine", re=re, x_lo=0.0, x_hi=1.0,
                         ic=lambda x: np.sin(np.pi * x), bc=bc, exact=exact)


def shock_like(re: float) -> ProblemSpec1D:
    series = oracles.fourier_series(re, mode=2)

    def exact(x, t):
        return oracles.fourier_solution(x, t, series)

    bc = BoundarySpec1D(BoundarySide("dirichlet", 0.0), BoundarySide("dirichlet", 0.0))
    return ProblemSpec1D(name="shocklike", re=re, x_lo=0.0, x_hi=1.0,
                         ic=lambda x: np.sin(2.0 * np.pi * x), bc=bc, exact=exact)


def shock_2d(re: float) -> ProblemSpec2D:
    def exact(x, y, t):
        return oracles.exact_shock_2d(x, y, t, re)

    def profile(x, y, t):
        return oracles.exact_shock_2d(x, y, t, re)[0]

    bc = BoundarySpec2D(
        u_left=lambda y, t: profile(-2.0, y, t),
        u_right=lambda y, t: profile(2.0, y, t),
        u_bottom=lambda x, t: profile(x, -2.0, t),
        u_top=lambda x, t: profile(x, 2.0, t),
        v_left=lambda y, t: profile(-2.0, y, t),
        v_right=lambda y, t: profile(2.0, y, t),
        v_bottom=lambda x, t: profile(x, -2.0, t),
        v_top=lambda x, t: profile(x, 2.0, t),
    )
    return ProblemSpec2D(name="shock2d", re=re, x_lo=-2.0, x_hi=2.0, y_lo=-2.0, y_hi=2.0,
                         ic_u=lambda x, y: profile(x, y, 0.0),
                         ic_v=lambda x, y: profile(x, y, 0.0),
                         bc=bc, exact=exact, forcing=None)


def manufactured_2d(re: float = 10.0) -> ProblemSpec2D:
    """u = v = exp(-t) x y on the unit square, forcing chosen to match."""

    def u_of(x, y, t):
        return np.exp(-t) * x * y

    def exact(x, y, t):
        val = u_of(x, y, t)
        return val, np.copy(val)

    def forcing(x, y, t):
        # u_t + u u_x + v u_y - (u_xx + u_yy)/re, with u = v = e^{-t} x y
        e = np.exp(-t)
        fx = e * x * y * (-1.0 + e * (x + y))
        return fx, np.copy(fx)

    bc = BoundarySpec2D(
        u_left=lambda y, t: u_of(0.0, y, t),
        u_right=lambda y, t: u_of(1.0, y, t),
        u_bottom=lambda x, t: u_of(x, 0.0, t),
        u_top=lambda x, t: u_of(x, 1.0, t),
        v_left=lambda y, t: u_of(0.0, y, t),
        v_right=lambda y, t: u_of(1.0, y, t),
        v_bottom=lambda x, t: u_of(x, 0.0, t),
        v_top=lambda x, t: u_of(x, 1.0, t),
    )
    return ProblemSpec2D(name="manufactured", re=re, x_lo=0.0, x_hi=1.0, y_lo=0.0, y_hi=1.0,
                         ic_u=lambda x, y: u_of(x, y, 0.0),
                         ic_v=lambda x, y: u_of(x, y, 0.0),
                         bc=bc, exact=exact, forcing=forcing)
