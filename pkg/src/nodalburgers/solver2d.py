"""Implicit cell-centered nodal solver for the 2D coupled Burgers equations.

Eight unknowns per space-time node: the node-averaged velocities u, v and
six pseudo-sources.  For the u-momentum balance, s1 carries the full
balance, s3 the x-direction split and s2 the y-direction split; for the
v-momentum balance s4/s6/s5 play the same roles.  With

  Fx[S, w] = p31*S_ij + p32*S_(i-1)j + p33*S_(i+1)j
           + p34*w_ij + p35*w_(i-1)j + p36*w_(i+1)j + (x-boundary datum)
  Gy[S, w] = q31*S_ij + q32*S_i(j-1) + q33*S_i(j+1)
           + q34*w_ij + q35*w_i(j-1) + q36*w_i(j+1) + (y-boundary datum)

(p from the x-direction coefficients at u0, q from the y-direction
coefficients at v0, both via coefficients.line_bundles), each node
carries, per velocity component w in {u, v} with sources (St, Sx, Sy) =
(s1, s3, s2) or (s4, s6, s5) and forcing f:

  St = Fx[Sx, w] + Gy[Sy, w] + f
  Sy = (St - St_prev)/2 + (w - w_prev)/(2 tau) - Fx[Sx, w] - f
  Sx = (St - St_prev)/2 + (w - w_prev)/(2 tau) - Gy[Sy, w] - f
  w (1 - 2 tau (p34 + q34)) + tau St
     - 2 tau (Fx[Sx, w] + Gy[Sy, w] - (p34 + q34) w)
     = w_prev + tau St_prev + 2 tau f

The last row is the first three combined with the cross-direction
balance St = Sx + Sy + f, so converged solves satisfy all of them.  The
previous slab enters only through w_prev + tau*St_prev.  Boundary nodes
apply the one-sided construction of the 1D module independently per
direction (corners apply both); all 2D boundaries are Dirichlet with
plane-averaged edge data.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from numpy.polynomial.legendre import leggauss

from .coefficients import (EdgeCoeffs, SingularCoefficientError,
                           eval_edge_coeffs, line_bundles)
from .linalg import KrylovConfig, gmres
from .mesh import Grid2D
from .oracles import box_averages, cell_average_initial_2d
from .solver1d import SolveReport, SolverConfig


@dataclass
class CellState2D:
    u_xyt: np.ndarray
    v_xyt: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    s4: np.ndarray
    s5: np.ndarray
    s6: np.ndarray
    prev_u_xyt: np.ndarray
    prev_v_xyt: np.ndarray
    prev_s1: np.ndarray
    prev_s4: np.ndarray


@dataclass
class ConvVelocityField2D:
    u0: np.ndarray
    v0: np.ndarray
    closure: str


@dataclass
class EdgeData2D:
    """Plane-averaged Dirichlet data for one slab: per-edge arrays."""

    u_left: np.ndarray    # (n_y,)
    u_right: np.ndarray
    u_bottom: np.ndarray  # (n_x,)
    u_top: np.ndarray
    v_left: np.ndarray
    v_right: np.ndarray
    v_bottom: np.ndarray
    v_top: np.ndarray


def _edge_average(func, centers, half, t0, t1):
    """Average func(s, t) over [c-half, c+half] x [t0, t1] per edge cell."""
    if not callable(func):
        return np.full(len(centers), float(func))
    n = len(centers)
    f = lambda s, t: np.asarray(func(s, t), dtype=float)
    return box_averages(f, [centers - half, np.full(n, t0)],
                        [centers + half, np.full(n, t1)])


def edge_data_for_slab(problem, grid: Grid2D, ell) -> EdgeData2D:
    t0 = ell * grid.dt
    t1 = t0 + grid.dt
    yc = grid.cell_centers_y()
    xc = grid.cell_centers_x()
    bc = problem.bc
    return EdgeData2D(
        u_left=_edge_average(bc.u_left, yc, grid.b, t0, t1),
        u_right=_edge_average(bc.u_right, yc, grid.b, t0, t1),
        u_bottom=_edge_average(bc.u_bottom, xc, grid.a, t0, t1),
        u_top=_edge_average(bc.u_top, xc, grid.a, t0, t1),
        v_left=_edge_average(bc.v_left, yc, grid.b, t0, t1),
        v_right=_edge_average(bc.v_right, yc, grid.b, t0, t1),
        v_bottom=_edge_average(bc.v_bottom, xc, grid.a, t0, t1),
        v_top=_edge_average(bc.v_top, xc, grid.a, t0, t1),
    )


def node_forcing(problem, grid: Grid2D, ell):
    """Node-averaged forcing by 3-point tensor quadrature per axis."""
    shape = (grid.n_x, grid.n_y)
    if problem.forcing is None:
        z = np.zeros(shape)
        return z, z.copy()
    pts, wts = leggauss(3)
    xc = grid.cell_centers_x()[:, None]
    yc = grid.cell_centers_y()[None, :]
    t_mid = (ell + 0.5) * grid.dt
    fx = np.zeros(shape)
    fy = np.zeros(shape)
    for px, wx in zip(pts, wts):
        for py, wy in zip(pts, wts):
            for pt, wt in zip(pts, wts):
                x = xc + grid.a * px
                y = yc + grid.b * py
                t = t_mid + grid.tau * pt
                gx, gy = problem.forcing(x, y, t)
                w = wx * wy * wt / 8.0
                fx += w * np.broadcast_to(gx, shape)
                fy += w * np.broadcast_to(gy, shape)
    return fx, fy


# ---------------------------------------------------------------------------
# convective-velocity closures

def _x_interfaces(coeffs: EdgeCoeffs, w, src):
    """Surface-averaged values at interior x-interfaces, shape (n_x-1, n_y)."""
    a31, a32, a51, a52 = coeffs.a31, coeffs.a32, coeffs.a51, coeffs.a52
    den = a31[:-1] - a51[1:]
    return (a32[:-1] * src[:-1] - a52[1:] * src[1:]
            + a31[:-1] * w[:-1] - a51[1:] * w[1:]) / den


def conv_velocity_2d(state: CellState2D, grid, re, edge: EdgeData2D,
                     closure="modified", coeffs_prev=None) -> ConvVelocityField2D:
    """Five-point mean ("simple") or interface-reconstruction mean
    ("modified", the average of the x-interface-pair mean and the
    y-interface-pair mean)."""
    u, v = state.u_xyt, state.v_xyt
    if closure == "simple":
        u0 = _five_point(u, edge.u_left, edge.u_right, edge.u_bottom, edge.u_top)
        v0 = _five_point(v, edge.v_left, edge.v_right, edge.v_bottom, edge.v_top)
        return ConvVelocityField2D(u0=u0, v0=v0, closure="simple")

    ca, cb = coeffs_prev
    cbT = EdgeCoeffs(a31=cb.a31.T, a32=cb.a32.T, a51=cb.a51.T, a52=cb.a52.T, r=cb.r.T)

    def pair_mean_x(w, src, left, right):
        it = _x_interfaces(ca, w, src)
        lo = np.vstack([left[None, :], it])
        hi = np.vstack([it, right[None, :]])
        return 0.5 * (lo + hi)

    def pair_mean_y(w, src, bottom, top):
        it = _x_interfaces(cbT, w.T, src.T)
        lo = np.vstack([bottom[None, :], it])
        hi = np.vstack([it, top[None, :]])
        return (0.5 * (lo + hi)).T

    u0 = 0.5 * pair_mean_x(u, state.s3, edge.u_left, edge.u_right) \
        + 0.5 * pair_mean_y(u, state.s2, edge.u_bottom, edge.u_top)
    v0 = 0.5 * pair_mean_x(v, state.s6, edge.v_left, edge.v_right) \
        + 0.5 * pair_mean_y(v, state.s5, edge.v_bottom, edge.v_top)
    return ConvVelocityField2D(u0=u0, v0=v0, closure="modified")


def _five_point(w, left, right, bottom, top):
    wx_lo = np.vstack([left[None, :], w[:-1]])
    wx_hi = np.vstack([w[1:], right[None, :]])
    wy_lo = np.hstack([bottom[:, None], w[:, :-1]])
    wy_hi = np.hstack([w[:, 1:], top[:, None]])
    return (wx_lo + wx_hi + wy_lo + wy_hi + w) / 5.0


# ---------------------------------------------------------------------------
# assembly

_U, _V, _S1, _S2, _S3, _S4, _S5, _S6 = range(8)


def assemble_2d(grid: Grid2D, re, u0, v0, prev_uxy, prev_vxy, edge: EdgeData2D,
                fx, fy):
    """8 n_x n_y sparse system for one Picard iterate; returns (csr, rhs)."""
    nx, ny = grid.n_x, grid.n_y
    tau = grid.tau
    ca = eval_edge_coeffs(grid.a, re, u0)
    cb = eval_edge_coeffs(grid.b, re, v0)
    pb = line_bundles(ca, grid.a, u0)        # x-direction, leading axis x
    cbT = EdgeCoeffs(a31=cb.a31.T, a32=cb.a32.T, a51=cb.a51.T, a52=cb.a52.T, r=cb.r.T)
    qbT = line_bundles(cbT, grid.b, v0.T)    # y-direction on transposed arrays
    q31, q32, q33 = qbT.f31.T, qbT.f32.T, qbT.f33.T
    q34, q35, q36 = qbT.f34.T, qbT.f35.T, qbT.f36.T
    kq_bottom, kq_top = qbT.kc_left, qbT.kc_right      # shape (n_x,)
    p31, p32, p33, p34, p35, p36 = pb.f31, pb.f32, pb.f33, pb.f34, pb.f35, pb.f36
    kp_left, kp_right = pb.kc_left, pb.kc_right        # shape (n_y,)

    node = (np.arange(nx)[:, None] * ny + np.arange(ny)[None, :])
    col = lambda q: 8 * node + q
    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(np.asarray(r).ravel())
        cols.append(np.asarray(c).ravel())
        vals.append(np.broadcast_to(v, np.asarray(r).shape).astype(float).ravel())

    def add_x_neighbors(row_ids, cS, cW, coeff_S_m, coeff_S_p, coeff_w_m, coeff_w_p, scale):
        # west neighbors exist for i >= 1, east for i <= nx-2
        add(row_ids[1:], cS[:-1], scale * coeff_S_m[1:])
        add(row_ids[1:], cW[:-1], scale * coeff_w_m[1:])
        add(row_ids[:-1], cS[1:], scale * coeff_S_p[:-1])
        add(row_ids[:-1], cW[1:], scale * coeff_w_p[:-1])

    def add_y_neighbors(row_ids, cS, cW, coeff_S_m, coeff_S_p, coeff_w_m, coeff_w_p, scale):
        add(row_ids[:, 1:], cS[:, :-1], scale * coeff_S_m[:, 1:])
        add(row_ids[:, 1:], cW[:, :-1], scale * coeff_w_m[:, 1:])
        add(row_ids[:, :-1], cS[:, 1:], scale * coeff_S_p[:, :-1])
        add(row_ids[:, :-1], cW[:, 1:], scale * coeff_w_p[:, :-1])

    rhs = np.zeros(8 * nx * ny)
    ones = np.ones((nx, ny))

    def bc_known(kind_u):
        """Known Fx/Gy boundary contributions per node for component u/v."""
        kx = np.zeros((nx, ny))
        ky = np.zeros((nx, ny))
        if kind_u:
            kx[0, :] = kp_left * edge.u_left
            kx[-1, :] = kp_right * edge.u_right
            ky[:, 0] = kq_bottom * edge.u_bottom
            ky[:, -1] = kq_top * edge.u_top
        else:
            kx[0, :] = kp_left * edge.v_left
            kx[-1, :] = kp_right * edge.v_right
            ky[:, 0] = kq_bottom * edge.v_bottom
            ky[:, -1] = kq_top * edge.v_top
        return kx, ky

    for is_u in (True, False):
        cw = col(_U if is_u else _V)
        cSt = col(_S1 if is_u else _S4)
        cSx = col(_S3 if is_u else _S6)
        cSy = col(_S2 if is_u else _S5)
        f = fx if is_u else fy
        prev = prev_uxy if is_u else prev_vxy
        kx, ky = bc_known(is_u)

        # St row: St - Fx - Gy = f + kx + ky
        r = cSt
        add(r, cSt, ones)
        add(r, cSx, -p31)
        add(r, cSy, -q31)
        add(r, cw, -(p34 + q34))
        add_x_neighbors(r, cSx, cw, -p32, -p33, -p35, -p36, 1.0)
        add_y_neighbors(r, cSy, cw, -q32, -q33, -q35, -q36, 1.0)
        rhs[r.ravel()] += (f + kx + ky).ravel()

        # Sy row: Sy - St/2 - w/(2tau) + Fx = -prev/(2tau) - f - kx
        r = cSy
        add(r, cSy, ones)
        add(r, cSt, -0.5 * ones)
        add(r, cw, (-0.5 / tau) * ones + p34)
        add(r, cSx, p31)
        add_x_neighbors(r, cSx, cw, p32, p33, p35, p36, 1.0)
        rhs[r.ravel()] += (-prev / (2.0 * tau) - f - kx).ravel()

        # Sx row: Sx - St/2 - w/(2tau) + Gy = -prev/(2tau) - f - ky
        r = cSx
        add(r, cSx, ones)
        add(r, cSt, -0.5 * ones)
        add(r, cw, (-0.5 / tau) * ones + q34)
        add(r, cSy, q31)
        add_y_neighbors(r, cSy, cw, q32, q33, q35, q36, 1.0)
        rhs[r.ravel()] += (-prev / (2.0 * tau) - f - ky).ravel()

        # w row: w (1 - 2tau(p34+q34)) + tau St - 2tau (Fx + Gy - (p34+q34) w)|unknowns
        #       = prev + 2tau f + 2tau (kx + ky)
        r = cw
        add(r, cw, 1.0 - 2.0 * tau * (p34 + q34))
        add(r, cSt, tau * ones)
        add(r, cSx, -2.0 * tau * p31)
        add(r, cSy, -2.0 * tau * q31)
        add_x_neighbors(r, cSx, cw, -2.0 * tau * p32, -2.0 * tau * p33,
                        -2.0 * tau * p35, -2.0 * tau * p36, 1.0)
        add_y_neighbors(r, cSy, cw, -2.0 * tau * q32, -2.0 * tau * q33,
                        -2.0 * tau * q35, -2.0 * tau * q36, 1.0)
        rhs[r.ravel()] += (prev + 2.0 * tau * (f + kx + ky)).ravel()

    n = 8 * nx * ny
    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n)).tocsr()
    return matrix, rhs


def _pack(state: CellState2D):
    fields = [state.u_xyt, state.v_xyt, state.s1, state.s2,
              state.s3, state.s4, state.s5, state.s6]
    x = np.empty(8 * fields[0].size)
    for q, f in enumerate(fields):
        x[q::8] = f.ravel()
    return x


def _unpack(x, nx, ny):
    return [x[q::8].reshape(nx, ny).copy() for q in range(8)]


# ---------------------------------------------------------------------------
# Picard iteration and transient driver

@dataclass
class SlabResult2D:
    state: CellState2D
    u0: ConvVelocityField2D
    status: str
    picard_iters: int
    krylov_iters: int
    deltas: list
    krylov_failures: int = 0


def default_config_2d() -> SolverConfig:
    """2D systems are large enough that the per-node block preconditioner
    is on by default."""
    return SolverConfig(krylov=KrylovConfig(restart=60, preconditioner="block_jacobi",
                                            block_size=8))


def picard_solve_step_2d(grid: Grid2D, re, prev_u, prev_v, prev_s1, prev_s4,
                         edge: EdgeData2D, fx, fy, closure="modified",
                         cfg: SolverConfig | None = None) -> SlabResult2D:
    if cfg is None:
        cfg = default_config_2d()
    nx, ny = grid.n_x, grid.n_y
    tau = grid.tau
    prev_uxy = prev_u + tau * prev_s1
    prev_vxy = prev_v + tau * prev_s4
    zeros = np.zeros_like(prev_u)
    state = CellState2D(u_xyt=prev_u.copy(), v_xyt=prev_v.copy(),
                        s1=prev_s1.copy(), s2=zeros.copy(), s3=zeros.copy(),
                        s4=prev_s4.copy(), s5=zeros.copy(), s6=zeros.copy(),
                        prev_u_xyt=prev_u, prev_v_xyt=prev_v,
                        prev_s1=prev_s1, prev_s4=prev_s4)
    x = _pack(state)
    norm0 = max(np.linalg.norm(x, np.inf), 1.0)
    u0_field = conv_velocity_2d(state, grid, re, edge, closure="simple")
    status = "max_picard"
    deltas = []
    krylov_total = 0
    krylov_failures = 0
    picard = 0
    for picard in range(1, cfg.max_picard + 1):
        try:
            if closure == "modified":
                ca = eval_edge_coeffs(grid.a, re, u0_field.u0)
                cb = eval_edge_coeffs(grid.b, re, u0_field.v0)
                u0_field = conv_velocity_2d(state, grid, re, edge, closure="modified",
                                            coeffs_prev=(ca, cb))
            else:
                u0_field = conv_velocity_2d(state, grid, re, edge, closure="simple")
            if not (np.all(np.isfinite(u0_field.u0)) and np.all(np.isfinite(u0_field.v0))):
                status = "diverged"
                break
            matrix, rhs = assemble_2d(grid, re, u0_field.u0, u0_field.v0,
                                      prev_uxy, prev_vxy, edge, fx, fy)
        except SingularCoefficientError:
            # runaway convective iterates collapse an interface denominator
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
        x = res.x if cfg.relaxation >= 1.0 else cfg.relaxation * res.x + (1 - cfg.relaxation) * x
        u, v, s1, s2, s3, s4, s5, s6 = _unpack(x, nx, ny)
        state = CellState2D(u_xyt=u, v_xyt=v, s1=s1, s2=s2, s3=s3, s4=s4,
                            s5=s5, s6=s6, prev_u_xyt=prev_u, prev_v_xyt=prev_v,
                            prev_s1=prev_s1, prev_s4=prev_s4)
        if np.linalg.norm(x, np.inf) > cfg.divergence_factor * norm0:
            status = "diverged"
            break
        if delta < cfg.picard_eps:
            status = "converged"
            break
    return SlabResult2D(state=state, u0=u0_field, status=status,
                        picard_iters=picard, krylov_iters=krylov_total,
                        deltas=deltas, krylov_failures=krylov_failures)


@dataclass
class TransientResult2D:
    grid: Grid2D
    initial_u: np.ndarray
    initial_v: np.ndarray
    states: list
    u0_fields: list
    report: SolveReport
    closures: list = field(default_factory=list)

    @property
    def final_state(self):
        return self.states[-1]


def run_transient_2d(problem, grid: Grid2D, closure="modified",
                     cfg: SolverConfig | None = None) -> TransientResult2D:
    if cfg is None:
        cfg = default_config_2d()
    t_start = time.perf_counter()
    init_u = cell_average_initial_2d(problem.ic_u, grid)
    init_v = cell_average_initial_2d(problem.ic_v, grid)
    prev_u, prev_v = init_u.copy(), init_v.copy()
    prev_s1 = np.zeros_like(prev_u)
    prev_s4 = np.zeros_like(prev_u)
    report = SolveReport()
    states = []
    u0_fields = []
    closures = []
    active_closure = closure
    for ell in range(grid.n_steps):
        edge = edge_data_for_slab(problem, grid, ell)
        fx, fy = node_forcing(problem, grid, ell)
        slab = picard_solve_step_2d(grid, problem.re, prev_u, prev_v, prev_s1,
                                    prev_s4, edge, fx, fy,
                                    closure=active_closure, cfg=cfg)
        if slab.status == "diverged" and cfg.fallback_to_simple and active_closure == "modified":
            active_closure = "simple"
            report.fallback_slab = ell
            slab = picard_solve_step_2d(grid, problem.re, prev_u, prev_v, prev_s1,
                                        prev_s4, edge, fx, fy,
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
        closures.append(active_closure)
        prev_u, prev_v = slab.state.u_xyt, slab.state.v_xyt
        prev_s1, prev_s4 = slab.state.s1, slab.state.s4
    report.wall_seconds = time.perf_counter() - t_start
    return TransientResult2D(grid=grid, initial_u=init_u, initial_v=init_v,
                             states=states, u0_fields=u0_fields, report=report,
                             closures=closures)


# ---------------------------------------------------------------------------
# surface reconstruction and closure residual diagnostics

@dataclass
class SurfaceReconstruction2D:
    """Plane-averaged interface quantities of a solved slab.

    x-interface arrays have shape (n_x-1, n_y), y-interface arrays
    (n_x, n_y-1); u_xy/v_xy are the space-averaged fields at the slab end.
    """

    u_yt: np.ndarray   # u on x-interfaces
    v_yt: np.ndarray   # v on x-interfaces
    u_xt: np.ndarray   # u on y-interfaces
    v_xt: np.ndarray   # v on y-interfaces
    jx_yt: np.ndarray  # x-flux of u on x-interfaces
    jy_yt: np.ndarray  # x-flux of v on x-interfaces
    jx_xt: np.ndarray  # y-flux of u on y-interfaces
    jy_xt: np.ndarray  # y-flux of v on y-interfaces
    u_xy: np.ndarray
    v_xy: np.ndarray


def _x_interface_fluxes(coeffs: EdgeCoeffs, w, src):
    a31, a32, a51, a52 = coeffs.a31, coeffs.a32, coeffs.a51, coeffs.a52
    den = a31[:-1] - a51[1:]
    return (-a32[:-1] * a51[1:] * src[:-1] + a31[:-1] * a52[1:] * src[1:]
            + a31[:-1] * a51[1:] * (w[1:] - w[:-1])) / den


def reconstruct_surfaces_2d(grid: Grid2D, re, state: CellState2D,
                            u0: ConvVelocityField2D) -> SurfaceReconstruction2D:
    ca = eval_edge_coeffs(grid.a, re, u0.u0)
    cb = eval_edge_coeffs(grid.b, re, u0.v0)
    cbT = EdgeCoeffs(a31=cb.a31.T, a32=cb.a32.T, a51=cb.a51.T, a52=cb.a52.T, r=cb.r.T)
    st = state
    return SurfaceReconstruction2D(
        u_yt=_x_interfaces(ca, st.u_xyt, st.s3),
        v_yt=_x_interfaces(ca, st.v_xyt, st.s6),
        u_xt=_x_interfaces(cbT, st.u_xyt.T, st.s2.T).T,
        v_xt=_x_interfaces(cbT, st.v_xyt.T, st.s5.T).T,
        jx_yt=_x_interface_fluxes(ca, st.u_xyt, st.s3),
        jy_yt=_x_interface_fluxes(ca, st.v_xyt, st.s6),
        jx_xt=_x_interface_fluxes(cbT, st.u_xyt.T, st.s2.T).T,
        jy_xt=_x_interface_fluxes(cbT, st.v_xyt.T, st.s5.T).T,
        u_xy=st.u_xyt + grid.tau * st.s1,
        v_xy=st.v_xyt + grid.tau * st.s4,
    )

def closure_residuals_2d(grid: Grid2D, re, state: CellState2D,
                         u0: ConvVelocityField2D, edge: EdgeData2D,
                         fx=None, fy=None) -> dict:
    """Max-norm residuals of the per-component balance identities
    evaluated from reconstructed surface quantities."""
    nx, ny = grid.n_x, grid.n_y
    if fx is None:
        fx = np.zeros((nx, ny))
    if fy is None:
        fy = np.zeros((nx, ny))
    tau = grid.tau
    ca = eval_edge_coeffs(grid.a, re, u0.u0)
    cb = eval_edge_coeffs(grid.b, re, u0.v0)
    cbT = EdgeCoeffs(a31=cb.a31.T, a32=cb.a32.T, a51=cb.a51.T, a52=cb.a52.T, r=cb.r.T)

    def direction_residual(w, src, coeffs, lo_val, hi_val, conv, half_width):
        """flux-balance part along the leading axis: -(dJ + u0 dU)/(2a)."""
        it_u = _x_interfaces(coeffs, w, src)
        a31, a32, a51, a52 = coeffs.a31, coeffs.a32, coeffs.a51, coeffs.a52
        den = a31[:-1] - a51[1:]
        it_j = (-a32[:-1] * a51[1:] * src[:-1] + a31[:-1] * a52[1:] * src[1:]
                + a31[:-1] * a51[1:] * (w[1:] - w[:-1])) / den
        j_lo = a51[0] * (w[0] - lo_val) + a52[0] * src[0]
        j_hi = a31[-1] * (w[-1] - hi_val) + a32[-1] * src[-1]
        U = np.vstack([lo_val[None, :], it_u, hi_val[None, :]])
        J = np.vstack([j_lo[None, :], it_j, j_hi[None, :]])
        return -(np.diff(J, axis=0) + conv * np.diff(U, axis=0)) / (2.0 * half_width)

    out = {}
    for tag, w, St, Sx, Sy, prev_w, prev_St, e_lo, e_hi, e_bo, e_to, f in (
            ("u", state.u_xyt, state.s1, state.s3, state.s2,
             state.prev_u_xyt, state.prev_s1,
             edge.u_left, edge.u_right, edge.u_bottom, edge.u_top, fx),
            ("v", state.v_xyt, state.s4, state.s6, state.s5,
             state.prev_v_xyt, state.prev_s4,
             edge.v_left, edge.v_right, edge.v_bottom, edge.v_top, fy)):
        phi_x = direction_residual(w, Sx, ca, e_lo, e_hi, u0.u0, grid.a)
        phi_y = direction_residual(w.T, Sy.T, cbT, e_bo, e_to, u0.v0.T, grid.b).T
        timeterm = (St - prev_St) / 2.0 + (w - prev_w) / (2.0 * tau)
        out[f"{tag}_total_balance"] = float(np.max(np.abs(St - phi_x - phi_y - f)))
        out[f"{tag}_y_split"] = float(np.max(np.abs(Sy - (timeterm - phi_x - f))))
        out[f"{tag}_x_split"] = float(np.max(np.abs(Sx - (timeterm - phi_y - f))))
        out[f"{tag}_cross_sum"] = float(np.max(np.abs(St - Sx - Sy - f)))
    return out
