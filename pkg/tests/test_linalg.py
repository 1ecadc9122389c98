import numpy as np
import pytest
import scipy.sparse as sp

from nodalburgers.linalg import BlockJacobi, Ilu, KrylovConfig, gmres, spmv


def test_spmv_identity_and_zero():
    x = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(spmv(sp.identity(3, format="csr"), x), x)
    assert np.array_equal(spmv(sp.csr_matrix((3, 3)), x), np.zeros(3))


def test_spmv_matches_dense_triple_loop():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(3, 3))
    x = rng.normal(size=3)
    y_ref = np.zeros(3)
    for i in range(3):
        for j in range(3):
            y_ref[i] += a[i, j] * x[j]
    y = spmv(sp.csr_matrix(a), x)
    assert np.max(np.abs(y - y_ref)) < 1e-15


def test_spmv_dimension_mismatch():
    with pytest.raises(ValueError):
        spmv(sp.identity(3, format="csr"), np.ones(4))


def test_gmres_identity_single_iteration():
    b = np.array([1.0, 2.0, 3.0])
    res = gmres(sp.identity(3, format="csr"), b)
    assert res.converged and res.iterations == 1
    assert np.allclose(res.x, b, atol=1e-13)


def test_gmres_diagonal():
    m = sp.csr_matrix(np.diag([2.0, 4.0]))
    res = gmres(m, np.array([2.0, 8.0]))
    assert res.converged
    assert np.allclose(res.x, [1.0, 2.0], atol=1e-12)


def test_gmres_vs_dense_lu():
    rng = np.random.default_rng(7)
    n = 50
    a = rng.normal(size=(n, n))
    a += np.diag(np.abs(a).sum(axis=1))  # diagonally dominant
    b = rng.normal(size=n)
    ref = np.linalg.solve(a, b)
    res = gmres(sp.csr_matrix(a), b, cfg=KrylovConfig(rel_tol=1e-12))
    assert res.converged
    assert np.max(np.abs(res.x - ref)) < 1e-10


def test_gmres_true_residual_reported():
    rng = np.random.default_rng(8)
    n = 40
    a = rng.normal(size=(n, n)) + np.diag(np.full(n, 10.0))
    b = rng.normal(size=n)
    m = sp.csr_matrix(a)
    res = gmres(m, b)
    recomputed = np.linalg.norm(b - m @ res.x)
    assert res.residual == pytest.approx(recomputed, rel=1e-12, abs=1e-300)
    assert res.residual <= max(1e-10 * np.linalg.norm(b), 1e-14)


def test_gmres_recovers_known_solution():
    rng = np.random.default_rng(9)
    n = 30
    a = rng.normal(size=(n, n)) + np.diag(np.full(n, 8.0))
    m = sp.csr_matrix(a)
    x_star = rng.normal(size=n)
    res = gmres(m, m @ x_star, cfg=KrylovConfig(rel_tol=1e-12))
    assert np.max(np.abs(res.x - x_star)) < 1e-9


def test_gmres_nonconvergence_is_reported():
    rng = np.random.default_rng(10)
    n = 30
    a = rng.normal(size=(n, n)) + np.diag(np.full(n, 5.0))
    res = gmres(sp.csr_matrix(a), rng.normal(size=n),
                cfg=KrylovConfig(max_iters=2, restart=2))
    assert not res.converged
    assert res.iterations <= 2


def test_gmres_warm_start():
    rng = np.random.default_rng(11)
    n = 25
    a = rng.normal(size=(n, n)) + np.diag(np.full(n, 6.0))
    m = sp.csr_matrix(a)
    x_star = rng.normal(size=n)
    res = gmres(m, m @ x_star, x0=x_star)
    assert res.converged and res.iterations == 0


def test_block_jacobi_applies_block_inverse():
    blocks = [np.array([[2.0, 1.0], [0.0, 4.0]]), np.array([[3.0, 0.0], [1.0, 5.0]])]
    m = sp.block_diag(blocks, format="csr")
    bj = BlockJacobi(m, 2)
    v = np.array([1.0, 2.0, 3.0, 4.0])
    ref = np.concatenate([np.linalg.solve(blocks[0], v[:2]),
                          np.linalg.solve(blocks[1], v[2:])])
    assert np.allclose(bj.apply(v), ref, atol=1e-14)


def test_gmres_with_block_jacobi_preconditioner():
    rng = np.random.default_rng(12)
    n = 48
    a = rng.normal(size=(n, n)) + np.diag(np.full(n, 12.0))
    m = sp.csr_matrix(a)
    b = rng.normal(size=n)
    plain = gmres(m, b)
    pre = gmres(m, b, cfg=KrylovConfig(preconditioner="block_jacobi", block_size=3))
    assert pre.converged
    assert np.max(np.abs(pre.x - plain.x)) < 1e-8
    assert pre.iterations <= plain.iterations


def test_gmres_requires_square():
    m = sp.csr_matrix(np.ones((3, 4)))
    with pytest.raises(ValueError):
        gmres(m, np.ones(3))


def test_gmres_with_ilu_preconditioner():
    rng = np.random.default_rng(13)
    n = 60
    a = rng.normal(size=(n, n)) + np.diag(np.full(n, 15.0))
    m = sp.csr_matrix(a)
    b = rng.normal(size=n)
    plain = gmres(m, b)
    pre = gmres(m, b, precond=Ilu(m))
    assert pre.converged
    assert pre.iterations < plain.iterations
    assert np.max(np.abs(pre.x - plain.x)) < 1e-8
