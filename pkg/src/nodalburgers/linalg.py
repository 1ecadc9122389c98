"""Sparse storage and a restarted GMRES solver for the per-slab systems.

Matrices are scipy CSR (row offsets / column indices / values).  GMRES is
implemented here rather than taken from scipy so that iteration counts,
breakdown reporting and the final true residual are under our control:
the returned residual is always recomputed as ||b - A x||_2, never the
Arnoldi estimate.  An optional block-Jacobi right preconditioner (fixed
block size equal to the per-node unknown count) is available; right
preconditioning keeps the Arnoldi residual estimate in the original
(unpreconditioned) norm.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass
class KrylovConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    restart: int = 30
    max_iters: int | None = None  # default 10*n at solve time
    preconditioner: str = "none"  # "none", "block_jacobi" or "ilu"
    block_size: int = 1

    def __post_init__(self):
        if self.rel_tol <= 0 or self.restart < 1:
            raise ValueError("rel_tol must be positive and restart >= 1")


def spmv(m, x):
    """y = M @ x with an explicit dimension check."""
    x = np.asarray(x)
    if m.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} @ {x.shape}")
    return m @ x


class Ilu:
    """Incomplete-LU preconditioner (scipy spilu on the sparse matrix)."""

    def __init__(self, matrix: sp.csr_matrix, drop_tol=1e-5, fill_factor=20.0):
        import scipy.sparse.linalg as spla
        self._op = spla.spilu(matrix.tocsc(), drop_tol=drop_tol,
                              fill_factor=fill_factor)

    def apply(self, v):
        return self._op.solve(v)


class BlockJacobi:
    """Inverse of the block diagonal, blocks of fixed size k along the diagonal."""

    def __init__(self, matrix: sp.csr_matrix, k: int):
        n = matrix.shape[0]
        if n % k:
            raise ValueError("matrix size not a multiple of block size")
        nb = n // k
        blocks = np.zeros((nb, k, k))
        coo = matrix.tocoo()
        rb, ri = np.divmod(coo.row, k)
        cb, ci = np.divmod(coo.col, k)
        on_diag = rb == cb
        blocks[rb[on_diag], ri[on_diag], ci[on_diag]] = coo.data[on_diag]
        self.k = k
        self.inv_blocks = np.linalg.inv(blocks)

    def apply(self, v):
        vb = v.reshape(-1, self.k)
        return np.einsum("nij,nj->ni", self.inv_blocks, vb).reshape(-1)


@dataclass
class GmresResult:
    x: np.ndarray
    iterations: int
    residual: float  # true residual ||b - A x||_2
    converged: bool
    breakdown: bool = False
    breakdown_iteration: int | None = None


def gmres(matrix, rhs, x0=None, cfg: KrylovConfig | None = None,
          precond=None) -> GmresResult:
    """Restarted GMRES with reorthogonalized Gram-Schmidt and Givens rotations.

    Stops when the residual estimate drops below
    max(rel_tol*||rhs||, abs_tol); the result carries the recomputed true
    residual and an explicit converged flag (non-convergence is reported,
    never silently accepted).  `precond` applies M^{-1} as a right
    preconditioner; pass a BlockJacobi or any object with .apply(v).
    """
    if cfg is None:
        cfg = KrylovConfig()
    n = matrix.shape[0]
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError("gmres requires a square system")
    b = np.asarray(rhs, dtype=float)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    max_iters = cfg.max_iters if cfg.max_iters is not None else 10 * n
    if precond is None and cfg.preconditioner == "block_jacobi":
        precond = BlockJacobi(matrix, cfg.block_size)
    elif precond is None and cfg.preconditioner == "ilu":
        precond = Ilu(matrix)
    apply_m = (lambda v: v) if precond is None else precond.apply

    b_norm = np.linalg.norm(b)
    tol = max(cfg.rel_tol * b_norm, cfg.abs_tol)
    m = cfg.restart

    total = 0
    breakdown = False
    breakdown_at = None
    r = b - matrix @ x
    r_norm = np.linalg.norm(r)

    while r_norm > tol and total < max_iters and not breakdown:
        V = np.zeros((m + 1, n))
        H = np.zeros((m + 1, m))
        cs = np.zeros(m)
        sn = np.zeros(m)
        g = np.zeros(m + 1)
        V[0] = r / r_norm
        g[0] = r_norm
        j_used = 0
        for j in range(m):
            if total >= max_iters:
                break
            w = matrix @ apply_m(V[j])
            # classical Gram-Schmidt with reorthogonalization (CGS2)
            h = V[:j + 1] @ w
            w -= V[:j + 1].T @ h
            h2 = V[:j + 1] @ w
            w -= V[:j + 1].T @ h2
            H[:j + 1, j] = h + h2
            H[j + 1, j] = np.linalg.norm(w)
            total += 1
            j_used = j + 1
            if H[j + 1, j] <= 1e-300 * max(1.0, abs(H[j, j])):
                breakdown = True
                breakdown_at = total
            else:
                V[j + 1] = w / H[j + 1, j]
            # apply accumulated rotations, then the new one
            for i in range(j):
                t = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
                H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = t
            denom = np.hypot(H[j, j], H[j + 1, j])
            if denom == 0.0:
                breakdown = True
                breakdown_at = total
                break
            cs[j] = H[j, j] / denom
            sn[j] = H[j + 1, j] / denom
            H[j, j] = denom
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]
            if abs(g[j + 1]) <= tol or breakdown:
                break
        if j_used > 0:
            y = _solve_upper(H[:j_used, :j_used], g[:j_used])
            x = x + apply_m(V[:j_used].T @ y)
        r = b - matrix @ x
        r_norm = np.linalg.norm(r)
        if breakdown:
            break

    return GmresResult(x=x, iterations=total, residual=r_norm,
                       converged=bool(r_norm <= tol),
                       breakdown=breakdown, breakdown_iteration=breakdown_at)


def _solve_upper(R, g):
    """Back substitution on the rotated upper-triangular Hessenberg."""
    k = R.shape[0]
    y = np.zeros(k)
    for i in range(k - 1, -1, -1):
        y[i] = (g[i] - R[i, i + 1:] @ y[i + 1:]) / R[i, i]
    return y
