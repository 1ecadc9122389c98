"""Implicit cell-centered nodal solver for the 1D viscous Burgers equation.

Each space-time node carries three unknowns: the node-averaged velocity
u_xt and the two pseudo-sources s1 (time split) and s2 (space split).
Per slab the nonlinear system is relinearized around a convective
velocity field u0 (fixed-point / Picard iteration):

  row A:  s1_i = f31*s2_i + f32*s2_{i-1} + f33*s2_{i+1}
               + f34*u_i + f35*u_{i-1} + f36*u_{i+1} (+ boundary datum)
  row B:  s2_i = (s1_i - s1^prev_i)/2 + (u_i - u^prev_i)/(2 tau)
  row C:  u_i*(1 - 2 tau f34) + tau*s1_i
               - 2 tau*(f31*s2_i + f32*s2_{i-1} + f33*s2_{i+1}
                        + f35*u_{i-1} + f36*u_{i+1} + boundary datum)
        = u^prev_i + tau*s1^prev_i

Row C is rows A and B combined through the constraint s1 = s2, so a
converged solve satisfies all three closure identities.  The previous
slab enters only through ux_prev = u^prev + tau*s1^prev (the space-only
average at the shared slab edge).

Two closures for u0 are provided: the three-cell arithmetic mean
("simple") and the coefficient-weighted interface reconstruction
("modified").  The modified closure is known to diverge on strongly
convection-dominated fronts; `fallback_to_simple` switches closures for
the remainder of the run when the divergence detector fires.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from numpy.polynomial.legendre import leggauss

from .coefficients import (EdgeCoeffs, SingularCoefficientError,
                           eval_edge_coeffs, line_bundles)
from .linalg import KrylovConfig, gmres
from .mesh import Grid1D
from .oracles import cell_average_initial_1d

DIRICHLET = "dirichlet"
NEUMANN = "neumann"


@dataclass
class BoundarySide:
    kind: str = DIRICHLET
    value: object = 0.0  # callable(t) or constant; velocity or flux by kind

    def averaged(self, t0, t1):
        """Slab-time average of the boundary datum by 5-point quadrature."""
        if callable(self.value):
            pts, wts = leggauss(5)
            tm = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * pts
            return 0.5 * float(np.dot(wts, np.asarray([self.value(t) for t in tm])))
        return float(self.value)


@dataclass
class BoundarySpec1D:
    left: BoundarySide = field(default_factory=BoundarySide)
    right: BoundarySide = field(default_factory=BoundarySide)


@dataclass
class BCValues:
    """Slab-averaged boundary data for one time slab."""

    left_kind: str
    left_value: float
    right_kind: str
    right_value: float

    @classmethod
    def from_spec(cls, bc: BoundarySpec1D, t0, t1):
        return cls(bc.left.kind, bc.left.averaged(t0, t1),
                   bc.right.kind, bc.right.averaged(t0, t1))


@dataclass
class CellState1D:
    u_xt: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    prev_u_xt: np.ndarray
    prev_s1: np.ndarray


@dataclass
class ConvVelocityField:
    u0: np.ndarray
    closure: str


@dataclass
class SolveReport:
    picard_total: int = 0
    krylov_total: int = 0
    wall_seconds: float = 0.0
    status: str = "converged"
    failed_slab: int | None = None
    fallback_slab: int | None = None
    krylov_failures: int = 0
    residual_history: list = field(default_factory=list)  # per-slab picard deltas


@dataclass
class SolverConfig:
    picard_eps: float = 1e-6
    max_picard: int = 100
    relaxation: float = 1.0
    fallback_to_simple: bool = False
    divergence_factor: float = 1e3
    krylov: KrylovConfig = field(default_factory=KrylovConfig)


class SolverDivergedError(RuntimeError):
    def __init__(self, slab, report):
        self.slab = slab
        self.report = report
        super().__init__(f"solver diverged at slab {slab}")


# ---------------------------------------------------------------------------
# convective-velocity closures

def conv_velocity_simple(u_xt, bcv: BCValues) -> ConvVelocityField:
    """Three-cell mean; boundary nodes use the surface datum (Dirichlet)
    or a one-sided two-cell mean (Neumann)."""
    u = np.asarray(u_xt, dtype=float)
    n = len(u)
    u0 = np.empty(n)
    u0[1:-1] = (u[:-2] + u[1:-1] + u[2:]) / 3.0
    if bcv.left_kind == DIRICHLET:
        u0[0] = (bcv.left_value + u[0] + u[1]) / 3.0
    else:
        u0[0] = 0.5 * (u[0] + u[1])
    if bcv.right_kind == DIRICHLET:
        u0[-1] = (u[-2] + u[-1] + bcv.right_value) / 3.0
    else:
        u0[-1] = 0.5 * (u[-2] + u[-1])
    return ConvVelocityField(u0=u0, closure="simple")


def _interface_velocities(coeffs: EdgeCoeffs, u, s2):
    """Surface-averaged velocity at interior interfaces i | i+1."""
    a31, a32, a51, a52 = coeffs.a31, coeffs.a32, coeffs.a51, coeffs.a52
    den = a31[:-1] - a51[1:]
    return (a32[:-1] * s2[:-1] - a52[1:] * s2[1:]
            + a31[:-1] * u[:-1] - a51[1:] * u[1:]) / den


def _interface_fluxes(coeffs: EdgeCoeffs, u, s2):
    """Surface-averaged flux at interior interfaces i | i+1."""
    a31, a32, a51, a52 = coeffs.a31, coeffs.a32, coeffs.a51, coeffs.a52
    den = a31[:-1] - a51[1:]
    return (-a32[:-1] * a51[1:] * s2[:-1] + a31[:-1] * a52[1:] * s2[1:]
            + a31[:-1] * a51[1:] * (u[1:] - u[:-1])) / den


def _boundary_surface_values(coeffs, u, s2, bcv):
    """(u_left_surface, u_right_surface) with Neumann sides eliminated
    through the boundary flux relation."""
    if bcv.left_kind == DIRICHLET:
        u_l = bcv.left_value
    else:
        u_l = u[0] + (coeffs.a52[0] * s2[0] - bcv.left_value) / coeffs.a51[0]
    if bcv.right_kind == DIRICHLET:
        u_r = bcv.right_value
    else:
        u_r = u[-1] + (coeffs.a32[-1] * s2[-1] - bcv.right_value) / coeffs.a31[-1]
    return u_l, u_r


def conv_velocity_modified(u_xt, s2, coeffs_prev: EdgeCoeffs, bcv: BCValues) -> ConvVelocityField:
    """Interface-reconstruction closure: u0_i is the mean of the two
    adjacent surface-averaged velocities, expressed via cell values with
    coefficients frozen at the previous iterate."""
    u = np.asarray(u_xt, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    u_t = _interface_velocities(coeffs_prev, u, s2)
    u_l, u_r = _boundary_surface_values(coeffs_prev, u, s2, bcv)
    n = len(u)
    u0 = np.empty(n)
    u0[1:-1] = 0.5 * (u_t[:-1] + u_t[1:])
    u0[0] = 0.5 * (u_l + u_t[0])
    u0[-1] = 0.5 * (u_t[-1] + u_r)
    return ConvVelocityField(u0=u0, closure="modified")


# ---------------------------------------------------------------------------
# assembly

def assemble_1d(grid: Grid1D, re, u0, prev_ux, bcv: BCValues):
    """Linear system for one Picard iterate.

    Unknown ordering interleaves (u, s1, s2) per node; returns
    (csr_matrix, rhs, coeffs, bundles).
    """
    n = grid.n_x
    a = grid.a
    tau = grid.tau
    u0 = np.asarray(u0, dtype=float)
    coeffs = eval_edge_coeffs(a, re, u0)
    fb = line_bundles(coeffs, a, u0, bcv.left_kind, bcv.right_kind)

    idx = np.arange(n)
    iu, is1, is2 = 3 * idx, 3 * idx + 1, 3 * idx + 2
    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(r)
        cols.append(c)
        vals.append(np.broadcast_to(v, r.shape).astype(float))

    # velocity rows (constraint s1 = s2 combined with rows A and B)
    add(iu, iu, 1.0 - 2.0 * tau * fb.f34)
    add(iu, is1, np.full(n, tau))
    add(iu, is2, -2.0 * tau * fb.f31)
    add(iu[1:], iu[:-1], -2.0 * tau * fb.f35[1:])
    add(iu[1:], is2[:-1], -2.0 * tau * fb.f32[1:])
    add(iu[:-1], iu[1:], -2.0 * tau * fb.f36[:-1])
    add(iu[:-1], is2[1:], -2.0 * tau * fb.f33[:-1])
    # flux-balance rows
    add(is1, is1, np.ones(n))
    add(is1, iu, -fb.f34)
    add(is1, is2, -fb.f31)
    add(is1[1:], iu[:-1], -fb.f35[1:])
    add(is1[1:], is2[:-1], -fb.f32[1:])
    add(is1[:-1], iu[1:], -fb.f36[:-1])
    add(is1[:-1], is2[1:], -fb.f33[:-1])
    # slab-coupling rows
    add(is2, is2, np.ones(n))
    add(is2, is1, np.full(n, -0.5))
    add(is2, iu, np.full(n, -0.5 / tau))

    rhs = np.zeros(3 * n)
    rhs[iu] = prev_ux
    rhs[is2] = -prev_ux / (2.0 * tau)
    kl = float(fb.kc_left) * bcv.left_value
    kr = float(fb.kc_right) * bcv.right_value
    rhs[is1[0]] += kl
    rhs[iu[0]] += 2.0 * tau * kl
    rhs[is1[-1]] += kr
    rhs[iu[-1]] += 2.0 * tau * kr

    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(3 * n, 3 * n)).tocsr()
    return matrix, rhs, coeffs, fb


def _interleave(u, s1, s2):
    x = np.empty(3 * len(u))
    x[0::3], x[1::3], x[2::3] = u, s1, s2
    return x


def _split(x):
    return x[0::3].copy(), x[1::3].copy(), x[2::3].copy()


# ---------------------------------------------------------------------------
# Picard iteration per slab

@dataclass
class SlabResult:
    state: CellState1D
    u0: ConvVelocityField
    status: str
    picard_iters: int
    krylov_iters: int
    deltas: list
    krylov_failures: int = 0


def picard_solve_step(grid: Grid1D, re, prev_u, prev_s1, bcv: BCValues,
                      closure="modified", cfg: SolverConfig | None = None) -> SlabResult:
    """Advance one slab: relinearize, assemble, solve until the max-norm
    change of the full unknown vector drops below picard_eps."""
    if cfg is None:
        cfg = SolverConfig()
    tau = grid.tau
    prev_ux = prev_u + tau * prev_s1
    u = prev_u.copy()
    s1 = prev_s1.copy()
    s2 = np.zeros_like(prev_u)
    x = _interleave(u, s1, s2)
    norm0 = max(np.linalg.norm(x, np.inf), 1.0)

    u0_field = conv_velocity_simple(u, bcv)  # seed for coefficient evaluation
    status = "max_picard"
    deltas = []
    krylov_total = 0
    krylov_failures = 0
    picard = 0
    for picard in range(1, cfg.max_picard + 1):
        try:
            if closure == "simple":
                u0_field = conv_velocity_simple(u, bcv)
            else:
                coeffs_prev = eval_edge_coeffs(grid.a, re, u0_field.u0)
                u0_field = conv_velocity_modified(u, s2, coeffs_prev, bcv)
            if not np.all(np.isfinite(u0_field.u0)):
                status = "diverged"
                break
            matrix, rhs, _, _ = assemble_1d(grid, re, u0_field.u0, prev_ux, bcv)
        except SingularCoefficientError:
            # wild convective iterates drive neighboring local Reynolds
            # numbers to opposite extremes; treat as divergence evidence
            status = "diverged"
            break
        res = gmres(matrix, rhs, x0=x, cfg=cfg.krylov)
        krylov_total += res.iterations
        if not res.converged:
            krylov_failures += 1
        if not np.all(np.isfinite(res.x)):
            status = "diverged"
            break
        delta = float(np.max(np.abs(res.x - x)))
        deltas.append(delta)
        if cfg.relaxation < 1.0:
            x = cfg.relaxation * res.x + (1.0 - cfg.relaxation) * x
        else:
            x = res.x
        u, s1, s2 = _split(x)
        if np.linalg.norm(x, np.inf) > cfg.divergence_factor * norm0:
            status = "diverged"
            break
        if delta < cfg.picard_eps:
            status = "converged"
            break

    state = CellState1D(u_xt=u, s1=s1, s2=s2, prev_u_xt=prev_u, prev_s1=prev_s1)
    return SlabResult(state=state, u0=u0_field, status=status,
                      picard_iters=picard, krylov_iters=krylov_total,
                      deltas=deltas, krylov_failures=krylov_failures)


# ---------------------------------------------------------------------------
# transient driver

@dataclass
class TransientResult:
    grid: Grid1D
    initial_u: np.ndarray
    states: list            # CellState1D per solved slab
    u0_fields: list         # ConvVelocityField per solved slab
    bc_values: list         # BCValues per solved slab
    report: SolveReport
    closures: list = field(default_factory=list)  # closure actually used per slab

    @property
    def final_state(self):
        return self.states[-1]

    def field_history(self):
        """(n_slabs+1, n_x) array: initial cell averages then each slab."""
        return np.vstack([self.initial_u] + [s.u_xt for s in self.states])


def run_transient_1d(problem, grid: Grid1D, closure="modified",
                     cfg: SolverConfig | None = None) -> TransientResult:
    """March n_steps slabs from the cell-averaged initial condition.

    On divergence: with cfg.fallback_to_simple the offending slab is
    redone with the simple closure, which then stays active for the rest
    of the run; otherwise the run stops and the report carries the
    diverged status and failing slab.
    """
    if cfg is None:
        cfg = SolverConfig()
    t_start = time.perf_counter()
    prev_u = cell_average_initial_1d(problem.ic, grid)
    prev_s1 = np.zeros_like(prev_u)
    report = SolveReport()
    states = []
    u0_fields = []
    bc_values = []
    closures = []
    active_closure = closure
    for ell in range(grid.n_steps):
        t0 = ell * grid.dt
        bcv = BCValues.from_spec(problem.bc, t0, t0 + grid.dt)
        slab = picard_solve_step(grid, problem.re, prev_u, prev_s1, bcv,
                                 closure=active_closure, cfg=cfg)
        if slab.status == "diverged" and cfg.fallback_to_simple and active_closure == "modified":
            active_closure = "simple"
            report.fallback_slab = ell
            slab = picard_solve_step(grid, problem.re, prev_u, prev_s1, bcv,
                                     closure=active_closure, cfg=cfg)
        report.picard_total += slab.picard_iters
        report.krylov_total += slab.krylov_iters
        report.krylov_failures += slab.krylov_failures
        report.residual_history.append(slab.deltas)
        if slab.status != "converged":
            report.status = slab.status
            report.failed_slab = ell
            break
        states.append(slab.state)
        u0_fields.append(slab.u0)
        bc_values.append(bcv)
        closures.append(active_closure)
        prev_u = slab.state.u_xt
        prev_s1 = slab.state.s1
    report.wall_seconds = time.perf_counter() - t_start
    return TransientResult(grid=grid, initial_u=cell_average_initial_1d(problem.ic, grid),
                           states=states, u0_fields=u0_fields, bc_values=bc_values,
                           report=report, closures=closures)


# ---------------------------------------------------------------------------
# surface reconstruction and closure residuals

@dataclass
class SurfaceReconstruction1D:
    u_t: np.ndarray   # interior interfaces, length n-1
    j_t: np.ndarray
    u_x: np.ndarray   # per-node space-averaged field at the slab end
    u_left: float
    u_right: float
    j_left: float
    j_right: float


def reconstruct_surfaces_1d(grid: Grid1D, re, state: CellState1D,
                            u0: ConvVelocityField, bcv: BCValues) -> SurfaceReconstruction1D:
    coeffs = eval_edge_coeffs(grid.a, re, u0.u0)
    u, s2 = state.u_xt, state.s2
    u_t = _interface_velocities(coeffs, u, s2)
    j_t = _interface_fluxes(coeffs, u, s2)
    u_l, u_r = _boundary_surface_values(coeffs, u, s2, bcv)
    if bcv.left_kind == DIRICHLET:
        j_l = coeffs.a51[0] * (u[0] - u_l) + coeffs.a52[0] * s2[0]
    else:
        j_l = bcv.left_value
    if bcv.right_kind == DIRICHLET:
        j_r = coeffs.a31[-1] * (u[-1] - u_r) + coeffs.a32[-1] * s2[-1]
    else:
        j_r = bcv.right_value
    u_x = u + grid.tau * state.s1
    return SurfaceReconstruction1D(u_t=u_t, j_t=j_t, u_x=u_x,
                                   u_left=u_l, u_right=u_r, j_left=j_l, j_right=j_r)


def closure_residuals(grid: Grid1D, re, state: CellState1D,
                      u0: ConvVelocityField, bcv: BCValues) -> dict:
    """Max-norm residuals of the three closure identities and of flux
    continuity across interfaces, evaluated from reconstructed surfaces."""
    surf = reconstruct_surfaces_1d(grid, re, state, u0, bcv)
    coeffs = eval_edge_coeffs(grid.a, re, u0.u0)
    u, s1, s2 = state.u_xt, state.s1, state.s2
    dx = grid.dx
    j_all = np.concatenate([[surf.j_left], surf.j_t, [surf.j_right]])
    u_all = np.concatenate([[surf.u_left], surf.u_t, [surf.u_right]])
    r_flux_balance = s1 + np.diff(j_all) / dx + u0.u0 * np.diff(u_all) / dx
    prev_ux = state.prev_u_xt + grid.tau * state.prev_s1
    r_time = s2 - (surf.u_x - prev_ux) / (2.0 * grid.tau)
    r_equal = s1 - s2
    # continuity: the two one-sided flux forms at each interior interface
    j_from_left = coeffs.a31[:-1] * (u[:-1] - surf.u_t) + coeffs.a32[:-1] * s2[:-1]
    j_from_right = coeffs.a51[1:] * (u[1:] - surf.u_t) + coeffs.a52[1:] * s2[1:]
    scale = np.max(np.abs(j_all)) + 1e-30
    return {
        "flux_balance": float(np.max(np.abs(r_flux_balance))),
        "time_coupling": float(np.max(np.abs(r_time))),
        "source_equality": float(np.max(np.abs(r_equal))),
        "flux_continuity_rel": float(np.max(np.abs(j_from_left - j_from_right)) / scale),
    }
