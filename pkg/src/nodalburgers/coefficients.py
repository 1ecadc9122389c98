"""Per-node coefficients of the cell-centered nodal scheme.

Each node carries four edge coefficients relating the interface-averaged
flux to cell-centered quantities,

    J(+a) = A31*(u_cc - u_surf) + A32*S2        (right face of the node)
    J(-a) = A51*(u_cc - u_surf) + A52*S2        (left face of the node)

with the local Reynolds number r = 2*half_width*Re*u0.  In dimensionless
form

    A31 = h31(r)/(a*Re)   h31 = r^2 e^r / (2 (1 - e^r + r e^r))
    A51 = h51(r)/(a*Re)   h51 = r^2 / (2 (1 - e^r + r))
    A32 = 2a*h32(r)       h32 = (e^r (1 - r + r^2/2) - 1) / (r (e^r (1 - r) - 1))
    A52 = 2a*h52(r)       h52 = (1 - e^r + r + r^2/2) / (r (1 - e^r + r))

The raw expressions are indeterminate at r = 0 and overflow for large
positive r, so evaluation is split into three branches:

  * |r| < SERIES_SWITCH: 5th-order Taylor polynomials (the convective
    velocity crosses zero in sign-changing flows, so this branch is hot);
  * r > EXP_SWITCH: the same expressions with numerator and denominator
    divided by e^r, which stay finite for arbitrarily large r;
  * otherwise: the raw expressions (e^r underflows harmlessly for very
    negative r).

Downstream bundles (F3*, F5*, F7*) combine the edge coefficients of a
node and its two neighbors along one coupling axis.  All functions accept
arrays whose leading axis is the coupling axis, so the same code serves
the 1D solver (shape (n,)) and each direction of the 2D solver
(shape (n, m)).
"""

from dataclasses import dataclass

import numpy as np

# Below the switch the raw A32/A52 numerators are O(r^3) differences of
# O(1) terms, so the closed forms carry ~eps/r^3 cancellation noise; the
# polynomials are accurate to ~1e-16 well past r = 0.02.  The branches
# agree to ~1e-10 at the switch (the required continuity is 1e-8).
SERIES_SWITCH = 0.02
EXP_SWITCH = 500.0
DENOM_GUARD = 1e-14


class SingularCoefficientError(ArithmeticError):
    """An interface denominator vanished; carries the offending node."""

    def __init__(self, label, where):
        self.label = label
        self.where = where
        super().__init__(f"singular coefficient denominator {label} at node(s) {where}")


def local_reynolds(half_width: float, re: float, u0):
    return 2.0 * half_width * re * np.asarray(u0, dtype=float)


def _h_kernels(r):
    """(h31, h51, h32, h52) evaluated branch-safely on an array."""
    r = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r)):
        raise ValueError("non-finite local Reynolds number")
    h31 = np.empty_like(r)
    h51 = np.empty_like(r)
    h32 = np.empty_like(r)
    h52 = np.empty_like(r)

    small = np.abs(r) < SERIES_SWITCH
    big = r > EXP_SWITCH
    mid = ~(small | big)

    if np.any(small):
        s = r[small]
        h31[small] = 1.0 + s * (1 / 3 + s * (1 / 36 + s * (-1 / 540 + s * (-1 / 6480 + s / 27216))))
        h51[small] = -1.0 + s * (1 / 3 + s * (-1 / 36 + s * (-1 / 540 + s * (1 / 6480 + s / 27216))))
        h32[small] = -1 / 3 + s * (-1 / 36 + s * (1 / 540 + s * (1 / 6480 + s * (-1 / 27216 + s / 4082400))))
        h52[small] = 1 / 3 + s * (-1 / 36 + s * (-1 / 540 + s * (1 / 6480 + s * (1 / 27216 + s / 4082400))))
    if np.any(mid):
        s = r[mid]
        e = np.exp(s)
        h31[mid] = s * s * e / (2.0 * (1.0 - e + s * e))
        h51[mid] = s * s / (2.0 * (1.0 - e + s))
        h32[mid] = (e * (1.0 - s + 0.5 * s * s) - 1.0) / (s * (e * (1.0 - s) - 1.0))
        h52[mid] = (1.0 - e + s + 0.5 * s * s) / (s * (1.0 - e + s))
    if np.any(big):
        s = r[big]
        em = np.exp(-s)
        h31[big] = s * s / (2.0 * (em - 1.0 + s))
        h51[big] = s * s * em / (2.0 * (em * (1.0 + s) - 1.0))
        h32[big] = ((1.0 - s + 0.5 * s * s) - em) / (s * ((1.0 - s) - em))
        h52[big] = (em * (1.0 + s + 0.5 * s * s) - 1.0) / (s * (em * (1.0 + s) - 1.0))
    return h31, h51, h32, h52


@dataclass
class EdgeCoeffs:
    """A31/A32/A51/A52 (or the B analogs) for every node on a line."""

    a31: np.ndarray
    a32: np.ndarray
    a51: np.ndarray
    a52: np.ndarray
    r: np.ndarray  # local Reynolds number per node


def eval_edge_coeffs(half_width: float, re: float, u0) -> EdgeCoeffs:
    """Edge coefficients from node geometry and convective velocity iterate."""
    if not (half_width > 0.0 and re > 0.0):
        raise ValueError("half_width and re must be positive")
    u0 = np.asarray(u0, dtype=float)
    if not np.all(np.isfinite(u0)):
        raise ValueError("non-finite convective velocity")
    r = local_reynolds(half_width, re, u0)
    h31, h51, h32, h52 = _h_kernels(r)
    inv_are = 1.0 / (half_width * re)
    two_a = 2.0 * half_width
    return EdgeCoeffs(a31=h31 * inv_are, a32=two_a * h32,
                      a51=h51 * inv_are, a52=two_a * h52, r=r)


# The x- and y-direction coefficients share one formula set.
eval_a = eval_edge_coeffs
eval_b = eval_edge_coeffs


def _guarded(den, scale, label):
    bad = np.abs(den) < DENOM_GUARD * np.maximum(scale, 1e-300)
    if np.any(bad):
        raise SingularCoefficientError(label, np.argwhere(bad).tolist())
    return den


@dataclass
class LineBundles:
    """Stencil coefficients of the flux-balance equation along one axis.

    For an interior node the equation reads

      S1_i = f31*S_i + f32*S_{i-1} + f33*S_{i+1}
           + f34*u_i + f35*u_{i-1} + f36*u_{i+1}

    where S is the pseudo-source carried by this axis.  At a boundary node
    the missing-neighbor coefficients are zero and the known boundary
    datum (Dirichlet surface velocity, or prescribed flux under Neumann)
    contributes kc_left/kc_right times that datum.
    """

    f31: np.ndarray
    f32: np.ndarray
    f33: np.ndarray
    f34: np.ndarray
    f35: np.ndarray
    f36: np.ndarray
    kc_left: np.ndarray   # multiplies the known left-boundary datum
    kc_right: np.ndarray  # multiplies the known right-boundary datum


def line_bundles(coeffs: EdgeCoeffs, half_width: float, u0,
                 bc_left: str = "dirichlet", bc_right: str = "dirichlet") -> LineBundles:
    """F3-style stencil coefficients for all nodes along the leading axis.

    Interior rows use the three-node interface elimination.  The first and
    last rows use the one-sided boundary variants:

      right Dirichlet: f31R = A52*(A31m - u0)/(2a*denL) - A32/(2a)
                       f34R = A51*(A31m - u0)/(2a*denL) - A31/(2a)
                       kc_right = (A31 - u0)/(2a)        (x boundary velocity)
      left  Dirichlet: f31L = A32*(A51p - u0)/(2a*denR) + A52/(2a)
                       f34L = A31*(A51p - u0)/(2a*denR) + A51/(2a)
                       kc_left = (u0 - A51)/(2a)
      right Neumann:   f31RN = A52*(A31m - u0)/(2a*denL) - u0*A32/(2a*A31)
                       f34RN = A51*(A31m - u0)/(2a*denL) - u0/(2a)
                       kc_right = (u0/A31 - 1)/(2a)      (x prescribed flux)
      left  Neumann:   f31LN = A32*(A51p - u0)/(2a*denR) + u0*A52/(2a*A51)
                       f34LN = A31*(A51p - u0)/(2a*denR) + u0/(2a)
                       kc_left = (1 - u0/A51)/(2a)

    where A31m/A51p are the inner neighbor's coefficients, denL/denR the
    shared-interface denominators, and suffix m/p marks node i-1/i+1.
    The Neumann rows eliminate the unknown boundary surface velocity
    through the boundary flux relation of the local analytical solution.
    """
    a31, a32, a51, a52 = coeffs.a31, coeffs.a32, coeffs.a51, coeffs.a52
    u0 = np.asarray(u0, dtype=float)
    n = a31.shape[0]
    if n < 3:
        raise ValueError("need at least 3 nodes along the coupling axis")
    inv2a = 1.0 / (2.0 * half_width)

    # interface denominators: den_r[i] pairs node i with node i+1
    den_r = _guarded(a31[:-1] - a51[1:],
                     np.maximum(np.abs(a31[:-1]), np.abs(a51[1:])), "A31-A51(+)")

    shape = a31.shape
    f31 = np.zeros(shape)
    f32 = np.zeros(shape)
    f33 = np.zeros(shape)
    f34 = np.zeros(shape)
    f35 = np.zeros(shape)
    f36 = np.zeros(shape)
    kc_left = np.zeros(shape[1:] if len(shape) > 1 else ())
    kc_right = np.zeros(shape[1:] if len(shape) > 1 else ())

    # interior nodes 1..n-2
    c, m, p = slice(1, n - 1), slice(0, n - 2), slice(2, n)
    dr = den_r[1:]    # interface (i, i+1)
    dl = den_r[:-1]   # interface (i-1, i)
    f31[c] = (a32[c] * (a51[p] - u0[c]) / dr + a52[c] * (a31[m] - u0[c]) / dl) * inv2a
    f32[c] = a32[m] * (u0[c] - a51[c]) / dl * inv2a
    f33[c] = a52[p] * (u0[c] - a31[c]) / dr * inv2a
    f34[c] = (a31[c] * (a51[p] - u0[c]) / dr + a51[c] * (a31[m] - u0[c]) / dl) * inv2a
    f35[c] = a31[m] * (u0[c] - a51[c]) / dl * inv2a
    f36[c] = a51[p] * (u0[c] - a31[c]) / dr * inv2a

    # right boundary node n-1 (left-interface parts as interior)
    i, im = n - 1, n - 2
    dl_last = den_r[-1]
    f32[i] = a32[im] * (u0[i] - a51[i]) / dl_last * inv2a
    f35[i] = a31[im] * (u0[i] - a51[i]) / dl_last * inv2a
    if bc_right == "dirichlet":
        f31[i] = (a52[i] * (a31[im] - u0[i]) / dl_last - a32[i]) * inv2a
        f34[i] = (a51[i] * (a31[im] - u0[i]) / dl_last - a31[i]) * inv2a
        kc_right = (a31[i] - u0[i]) * inv2a
    elif bc_right == "neumann":
        a31_i = _guarded(a31[i], np.ones_like(np.abs(a31[i])), "A31(right)")
        f31[i] = (a52[i] * (a31[im] - u0[i]) / dl_last - u0[i] * a32[i] / a31_i) * inv2a
        f34[i] = (a51[i] * (a31[im] - u0[i]) / dl_last - u0[i]) * inv2a
        kc_right = (u0[i] / a31_i - 1.0) * inv2a
    else:
        raise ValueError(f"unknown boundary kind {bc_right!r}")

    # left boundary node 0 (right-interface parts as interior)
    dr_first = den_r[0]
    f33[0] = a52[1] * (u0[0] - a31[0]) / dr_first * inv2a
    f36[0] = a51[1] * (u0[0] - a31[0]) / dr_first * inv2a
    if bc_left == "dirichlet":
        f31[0] = (a32[0] * (a51[1] - u0[0]) / dr_first + a52[0]) * inv2a
        f34[0] = (a31[0] * (a51[1] - u0[0]) / dr_first + a51[0]) * inv2a
        kc_left = (u0[0] - a51[0]) * inv2a
    elif bc_left == "neumann":
        a51_0 = _guarded(a51[0], np.ones_like(np.abs(a51[0])), "A51(left)")
        f31[0] = (a32[0] * (a51[1] - u0[0]) / dr_first + u0[0] * a52[0] / a51_0) * inv2a
        f34[0] = (a31[0] * (a51[1] - u0[0]) / dr_first + u0[0]) * inv2a
        kc_left = (1.0 - u0[0] / a51_0) * inv2a
    else:
        raise ValueError(f"unknown boundary kind {bc_left!r}")

    return LineBundles(f31, f32, f33, f34, f35, f36,
                       np.asarray(kc_left), np.asarray(kc_right))


@dataclass
class RationalBundle:
    """Time-rational combinations used by the cell-velocity update.

    f5k = 2*tau*f3k/(1 - 2*tau*f34) for k in {1,2,3}; f54 = f55 =
    tau/(1 - 2*tau*f34); f56 = 1/(1 - 2*tau*f34); f57/f58 mirror f35/f36.
    In the velocity update the current S1 enters with weight -f54 while
    the previous slab's S1 enters with +f55.
    """

    f51: np.ndarray
    f52: np.ndarray
    f53: np.ndarray
    f54: np.ndarray
    f55: np.ndarray
    f56: np.ndarray
    f57: np.ndarray
    f58: np.ndarray


def rational_bundle(fb: LineBundles, tau: float) -> RationalBundle:
    den = 1.0 - 2.0 * tau * fb.f34
    _guarded(den, np.ones_like(den), "1-2*tau*F34")
    return RationalBundle(
        f51=2.0 * tau * fb.f31 / den,
        f52=2.0 * tau * fb.f32 / den,
        f53=2.0 * tau * fb.f33 / den,
        f54=tau / den,
        f55=tau / den,
        f56=1.0 / den,
        f57=2.0 * tau * fb.f35 / den,
        f58=2.0 * tau * fb.f36 / den,
    )


@dataclass
class ConvBundle:
    """Stencil of the reconstructed convective velocity (interior nodes).

    u0_i = f71*S_{i-1} + f72*S_i + f73*S_{i+1}
         + f74*u_{i-1} + f75*u_i + f76*u_{i+1}

    i.e. the average of the two interface surface velocities adjacent to
    node i expressed through cell-centered values.  Rows 0 and n-1 are
    zero; boundary nodes average the one-sided reconstruction with the
    boundary surface value instead (handled by the solvers).
    """

    f71: np.ndarray
    f72: np.ndarray
    f73: np.ndarray
    f74: np.ndarray
    f75: np.ndarray
    f76: np.ndarray


def conv_bundles(coeffs: EdgeCoeffs) -> ConvBundle:
    a31, a32, a51, a52 = coeffs.a31, coeffs.a32, coeffs.a51, coeffs.a52
    n = a31.shape[0]
    den_r = _guarded(a31[:-1] - a51[1:],
                     np.maximum(np.abs(a31[:-1]), np.abs(a51[1:])), "A31-A51(+)")
    shape = a31.shape
    out = [np.zeros(shape) for _ in range(6)]
    f71, f72, f73, f74, f75, f76 = out
    c, m, p = slice(1, n - 1), slice(0, n - 2), slice(2, n)
    dr = den_r[1:]
    dl = den_r[:-1]
    f71[c] = a32[m] / (2.0 * dl)
    f72[c] = a32[c] / (2.0 * dr) - a52[c] / (2.0 * dl)
    f73[c] = -a52[p] / (2.0 * dr)
    f74[c] = a31[m] / (2.0 * dl)
    f75[c] = a31[c] / (2.0 * dr) - a51[c] / (2.0 * dl)
    f76[c] = -a51[p] / (2.0 * dr)
    return ConvBundle(f71, f72, f73, f74, f75, f76)
