import numpy as np
import pytest

from nodalburgers import coefficients as co


def test_a31_closed_form_value():
    c = co.eval_a(0.05, 50.0, np.array([1.0]))
    ref = 5.0 * np.exp(5.0) / (1.0 + 4.0 * np.exp(5.0))
    assert c.a31[0] == pytest.approx(ref, rel=1e-14)
    assert c.r[0] == pytest.approx(5.0)


def test_series_limit_matches_extrapolated_closed_form():
    # symbolic limit at u0 = 0 is 1/(a*Re); cross-check by Richardson
    # extrapolation of the closed form evaluated at u0 = +/- 1e-3
    a, re = 0.05, 50.0
    c0 = co.eval_a(a, re, np.array([0.0]))
    assert c0.a31[0] == pytest.approx(1.0 / (a * re), rel=1e-12)
    up = co.eval_a(a, re, np.array([1e-3])).a31[0]
    dn = co.eval_a(a, re, np.array([-1e-3])).a31[0]
    assert 0.5 * (up + dn) == pytest.approx(c0.a31[0], rel=1e-6)


def test_zero_velocity_limits_all_coefficients():
    c = co.eval_b(0.1, 10.0, np.array([0.0]))
    assert c.a31[0] == pytest.approx(1.0, rel=1e-13)    # 1/(b*Re)
    assert c.a51[0] == pytest.approx(-1.0, rel=1e-13)
    assert c.a32[0] == pytest.approx(-0.2 / 3.0, rel=1e-13)  # -2b/3
    assert c.a52[0] == pytest.approx(0.2 / 3.0, rel=1e-13)


def test_b_mirrors_a():
    ca = co.eval_a(0.05, 50.0, np.array([1.0, -1.0]))
    cb = co.eval_b(0.05, 50.0, np.array([1.0, -1.0]))
    for f in ("a31", "a32", "a51", "a52"):
        assert np.allclose(getattr(ca, f), getattr(cb, f), rtol=0, atol=0)


def test_constant_state_flux_identity():
    # J = A31 (u_cc - u_surf) + A32 S2 vanishes for u_cc = u_surf, S2 = 0
    c = co.eval_a(0.05, 50.0, np.array([0.7]))
    j = c.a31[0] * (0.7 - 0.7) + c.a32[0] * 0.0
    assert j == 0.0


def test_branch_continuity_random():
    rng = np.random.default_rng(42)
    theta = co.SERIES_SWITCH
    for _ in range(1000):
        a = float(10.0 ** rng.uniform(-4, 0))
        re = float(10.0 ** rng.uniform(-1, 6))
        for sign in (1.0, -1.0):
            u0 = sign * theta / (2.0 * a * re)
            lo = co.eval_a(a, re, np.array([u0 * (1 - 1e-9)]))
            hi = co.eval_a(a, re, np.array([u0 * (1 + 1e-9)]))
            for f in ("a31", "a32", "a51", "a52"):
                x, y = getattr(lo, f)[0], getattr(hi, f)[0]
                assert abs(x - y) <= 1e-8 * max(abs(x), abs(y))


def test_overflow_regime_finite():
    c = co.eval_a(0.003125, 1e9, np.array([1.0, 0.5, -0.5, 0.0, 1e-12]))
    for f in ("a31", "a32", "a51", "a52"):
        assert np.all(np.isfinite(getattr(c, f)))


def test_a31_derivative_smoothness():
    # analytic derivative of the closed form at u0 = 1 vs central differences
    a, re, u0 = 0.05, 50.0, 1.0
    r = 2.0 * a * re * u0
    e = np.exp(r)
    den = 1.0 - e + r * e
    dh31 = r * e * (2.0 + r) / (2.0 * den) - r ** 3 * e ** 2 / (2.0 * den ** 2)
    analytic = 2.0 * dh31  # dA31/du0 = h31'(r) * 2aRe / (aRe)
    h = 1e-5
    up = co.eval_a(a, re, np.array([u0 + h])).a31[0]
    dn = co.eval_a(a, re, np.array([u0 - h])).a31[0]
    fd = (up - dn) / (2.0 * h)
    assert fd == pytest.approx(analytic, rel=1e-6)


def _uniform_bundle(u0_val=1.0, a=0.05, re=50.0, n=5):
    c = co.eval_a(a, re, np.full(n, u0_val))
    return co.line_bundles(c, a, np.full(n, u0_val)), c


def test_constant_lattice_f3_sum_zero():
    fb, _ = _uniform_bundle()
    total = fb.f34 + fb.f35 + fb.f36
    # interior rows: the velocity-coefficient sum vanishes on constant states
    assert np.max(np.abs(total[1:-1])) < 1e-13
    # boundary rows need the boundary-datum coefficient as well
    assert abs(fb.f34[0] + fb.f36[0] + fb.kc_left) < 1e-13
    assert abs(fb.f34[-1] + fb.f35[-1] + fb.kc_right) < 1e-13


def test_rational_bundle_identities():
    fb, _ = _uniform_bundle()
    tau = 0.05
    rb = co.rational_bundle(fb, tau)
    ref = 2.0 * tau * fb.f31 / (1.0 - 2.0 * tau * fb.f34)
    assert np.allclose(rb.f51, ref, rtol=1e-14)
    assert np.allclose(rb.f54, tau / (1.0 - 2.0 * tau * fb.f34), rtol=1e-14)


def test_rational_bundle_small_tau_limits():
    fb, _ = _uniform_bundle()
    for tau in (1e-6, 1e-8):
        rb = co.rational_bundle(fb, tau)
        assert np.allclose(rb.f54, tau, rtol=1e-4)
        assert np.allclose(rb.f56, 1.0, rtol=1e-4)


def test_boundary_bundle_right_dirichlet_structure():
    n = 5
    rng = np.random.default_rng(3)
    u0 = rng.normal(0.5, 0.3, n)
    c = co.eval_a(0.05, 50.0, u0)
    fb = co.line_bundles(c, 0.05, u0)
    # no right neighbor at the last node
    assert fb.f33[-1] == 0.0 and fb.f36[-1] == 0.0
    # no left neighbor at the first node
    assert fb.f32[0] == 0.0 and fb.f35[0] == 0.0
    # boundary-datum coefficient of the right Dirichlet row
    inv2a = 1.0 / (2.0 * 0.05)
    assert fb.kc_right == pytest.approx((c.a31[-1] - u0[-1]) * inv2a, rel=1e-13)


def test_conv_bundle_structure_and_partition():
    n = 5
    rng = np.random.default_rng(4)
    u0 = rng.normal(0.5, 0.3, n)
    c = co.eval_a(0.05, 50.0, u0)
    cb = co.conv_bundles(c)
    i = 2
    den_l = c.a31[i - 1] - c.a51[i]
    assert cb.f71[i] == pytest.approx(c.a32[i - 1] / (2.0 * den_l), rel=1e-13)
    # velocity weights sum to one for any u0 field (constant-state identity)
    s = cb.f74[1:-1] + cb.f75[1:-1] + cb.f76[1:-1]
    assert np.allclose(s, 1.0, atol=1e-13)


def test_constant_field_surface_identity():
    # the interface elimination returns the constant exactly and zero flux
    rng = np.random.default_rng(5)
    u0 = rng.normal(0.0, 1.0, 6)
    c = co.eval_a(0.05, 50.0, u0)
    const = 0.37
    u = np.full(6, const)
    s2 = np.zeros(6)
    den = c.a31[:-1] - c.a51[1:]
    u_t = (c.a32[:-1] * s2[:-1] - c.a52[1:] * s2[1:]
           + c.a31[:-1] * u[:-1] - c.a51[1:] * u[1:]) / den
    j_t = (-c.a32[:-1] * c.a51[1:] * s2[:-1] + c.a31[:-1] * c.a52[1:] * s2[1:]
           + c.a31[:-1] * c.a51[1:] * (u[1:] - u[:-1])) / den
    assert np.max(np.abs(u_t - const)) < 1e-13
    assert np.max(np.abs(j_t)) < 1e-13


def test_non_finite_input_rejected():
    with pytest.raises(ValueError):
        co.eval_a(0.05, 50.0, np.array([np.nan]))
    with pytest.raises(ValueError):
        co.eval_a(-0.05, 50.0, np.array([1.0]))
