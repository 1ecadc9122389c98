"""Post-processing: RMS errors, convergence rates, shock tracking, energy.

All functions are pure consumers of solver output; nothing here feeds
back into the solve.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ErrorRecord:
    example: str
    re: float
    dx: float
    dt: float
    t_final: float
    closure: str
    rms: float


def rms_error(field, reference) -> float:
    """Root-mean-square difference over all nodes (1D or 2D arrays)."""
    field = np.asarray(field, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if field.shape != reference.shape:
        raise ValueError(f"shape mismatch {field.shape} vs {reference.shape}")
    return float(np.sqrt(np.mean(np.abs(field - reference) ** 2)))


def convergence_rate(records, axis="dx") -> float:
    """Least-squares slope of log(rms) against log(dx) or log(dt)."""
    if len(records) < 3:
        raise ValueError("need at least 3 records for a rate estimate")
    h = np.array([getattr(r, axis) for r in records], dtype=float)
    e = np.array([r.rms for r in records], dtype=float)
    if np.any(h <= 0) or np.any(e <= 0):
        raise ValueError("step sizes and errors must be positive")
    order = np.argsort(h)
    h, e = h[order], e[order]
    if not np.all(np.diff(e) > 0):
        raise ValueError("errors are not monotone in the step size")
    slope = np.polyfit(np.log(h), np.log(e), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# shock tracking

@dataclass
class ShockTrack:
    times: np.ndarray
    positions: np.ndarray     # cell centers of the max-gradient cell
    s_num: float              # end-to-end quotient over the tracked window
    s_theory: float
    error_pct: float
    s_fitted: float           # least-squares slope over the final half
    step_speeds: np.ndarray   # raw per-step difference quotients


def shock_positions(field_history, grid):
    """Cell center of the maximum |du/dx| (central differences; ties take
    the smallest x) for each row of field_history."""
    u = np.atleast_2d(np.asarray(field_history, dtype=float))
    xc = grid.cell_centers()
    grad = np.abs(u[:, 2:] - u[:, :-2]) / (2.0 * grid.dx)
    if np.all(grad == 0.0):
        raise ValueError("flat field: no distinct gradient maximum")
    idx = np.argmax(grad, axis=1) + 1  # argmax returns the first (smallest x) tie
    return xc[idx]


def shock_velocity(field_history, grid, u_left=1.0, u_right=0.0) -> ShockTrack:
    """Track the front and estimate its speed.

    s_num is the end-to-end difference quotient over the whole history
    (matching the grid-quantized reference values); the least-squares
    slope over the final half and the raw per-step quotients are also
    reported for inspection.
    """
    u = np.atleast_2d(np.asarray(field_history, dtype=float))
    n_rows = u.shape[0]
    times = grid.dt * np.arange(n_rows)
    pos = shock_positions(u, grid)
    window = times[-1] - times[0]
    if window <= 0:
        raise ValueError("need at least two time levels")
    s_num = float((pos[-1] - pos[0]) / window)
    half = n_rows // 2
    s_fit = float(np.polyfit(times[half:], pos[half:], 1)[0])
    step_speeds = np.diff(pos) / grid.dt
    s_theory = 0.5 * (u_left + u_right)
    err_pct = abs(s_num - s_theory) / abs(s_theory) * 100.0
    return ShockTrack(times=times, positions=pos, s_num=s_num,
                      s_theory=s_theory, error_pct=err_pct,
                      s_fitted=s_fit, step_speeds=step_speeds)


# ---------------------------------------------------------------------------
# kinetic energy accounting

@dataclass
class EnergyTrace:
    times: np.ndarray
    energy: np.ndarray        # E_l = 0.5 sum u_i^2 dx, one per time level
    dissipation_num: np.ndarray     # forward differences of E, length len(E)-1
    dissipation_theory: np.ndarray  # -1/re * sum (du/dx)^2 dx per time level


def energy_trace(field_history, grid, re) -> EnergyTrace:
    """Total kinetic energy and dissipation rates from cell-centered values.

    The theoretical rate uses central differences at interior nodes and
    one-sided second-order differences at the two boundary nodes.
    dissipation_num[l] is centered between levels l and l+1, so compare it
    against the mean of dissipation_theory[l] and [l+1].
    """
    u = np.atleast_2d(np.asarray(field_history, dtype=float))
    if u.shape[1] < 3:
        raise ValueError("need at least 3 nodes")
    dx = grid.dx
    times = grid.dt * np.arange(u.shape[0])
    energy = 0.5 * np.sum(u * u, axis=1) * dx
    diss_num = np.diff(energy) / grid.dt
    dudx = np.empty_like(u)
    dudx[:, 1:-1] = (u[:, 2:] - u[:, :-2]) / (2.0 * dx)
    dudx[:, 0] = (-3.0 * u[:, 0] + 4.0 * u[:, 1] - u[:, 2]) / (2.0 * dx)
    dudx[:, -1] = (3.0 * u[:, -1] - 4.0 * u[:, -2] + u[:, -3]) / (2.0 * dx)
    diss_theory = -np.sum(dudx * dudx, axis=1) * dx / re
    return EnergyTrace(times=times, energy=energy,
                       dissipation_num=diss_num, dissipation_theory=diss_theory)


def dissipation_gap(trace: EnergyTrace, skip=10) -> float:
    """Max relative gap between numerical and theoretical dissipation after
    the first `skip` steps (theory averaged to the interval midpoints)."""
    th_mid = 0.5 * (trace.dissipation_theory[:-1] + trace.dissipation_theory[1:])
    skip = min(skip, max(len(th_mid) - 1, 0))
    num = trace.dissipation_num[skip:]
    th = th_mid[skip:]
    if len(th) == 0:
        return 0.0
    scale = np.max(np.abs(th))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(num - th)) / scale)


# ---------------------------------------------------------------------------
# solver counters

def perf_counters(report) -> dict:
    return {
        "picard_total": report.picard_total,
        "krylov_total": report.krylov_total,
        "wall_seconds": report.wall_seconds,
    }
