import logging

import numpy as np
from scipy.linalg import cho_solve, lapack

from common.errors import ShapeError, NumericalError, SingularMatrixError

SYMMETRY_TOL = 1e-10
SVD_METHODS = ('lapack', 'jacobi')


def as_dense(a, name="matrix"):
    """
    Coerce `a` to the dense carrier used everywhere: a 2-D float64 ndarray
    with finite entries.

    Raises:
        ShapeError: if `a` is not two-dimensional.
        NumericalError: if any entry is NaN or infinite.
    """
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be a 2-D matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        bad = np.argwhere(~np.isfinite(m))[0]
        raise NumericalError(f"{name} has a non-finite entry at ({bad[0]}, {bad[1]})")
    return m


def identity(n):
    return np.eye(n, dtype=np.float64)


def matmul(a, b):
    a = as_dense(a, "a")
    b = as_dense(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def sgn(a):
    """Element-wise sign with sgn(0) = +1, returned as a float matrix of +-1."""
    return np.where(np.asarray(a) >= 0, 1.0, -1.0)


def spd_solve(a, b):
    """
    Solve a @ X = b for a symmetric positive definite `a` through a Cholesky
    factorization (LAPACK dpotrf); `a` is never inverted explicitly.

    Parameters:
        a: n x n symmetric positive definite matrix.
        b: n x m right-hand side.

    Returns:
        X with shape n x m.

    Raises:
        ShapeError: if `a` is not square, is not symmetric within 1e-10
            (relative to its largest entry) or `b` has the wrong row count.
        SingularMatrixError: if the factorization meets a non-positive pivot;
            `pivot` holds its zero-based index.
    """
    a = as_dense(a, "a")
    b = as_dense(b, "b")
    n = a.shape[0]
    if a.shape[1] != n:
        raise ShapeError(f"spd_solve needs a square matrix, got {a.shape[0]}x{a.shape[1]}")
    if b.shape[0] != n:
        raise ShapeError(f"right-hand side has {b.shape[0]} rows, expected {n}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    asymmetry = float(np.abs(a - a.T).max(initial=0.0))
    if asymmetry > SYMMETRY_TOL * scale:
        raise ShapeError(f"spd_solve needs a symmetric matrix, asymmetry {asymmetry:.3e}")

    factor, info = lapack.dpotrf(0.5 * (a + a.T), lower=1, clean=1)
    if info > 0:
        pivot = info - 1
        logging.error(f"[dense] Cholesky factorization failed at pivot {pivot}")
        raise SingularMatrixError(f"matrix is not positive definite (pivot {pivot})", pivot=pivot)
    if info < 0:
        raise ValueError(f"dpotrf rejected argument {-info}")
    return cho_solve((factor, True), b)


def svd_small(a, method='lapack'):
    """
    Full SVD of a small square matrix: a = s @ diag(sigma) @ shat.T.

    `sigma` is sorted in descending order; `s` and `shat` are orthogonal even
    when `a` is rank deficient.

    Parameters:
        a: k x k matrix.
        method: 'lapack' (numpy.linalg.svd) or 'jacobi' (one-sided Jacobi).

    Returns:
        tuple: (s, sigma, shat)
    """
    a = as_dense(a, "a")
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"svd_small needs a square matrix, got {a.shape[0]}x{a.shape[1]}")
    if method == 'lapack':
        s, sigma, shat_t = np.linalg.svd(a)
        return s, sigma, shat_t.T
    elif method == 'jacobi':
        return _one_sided_jacobi(a)
    else:
        raise ValueError(f"Unknown SVD method: {method}")


def _one_sided_jacobi(a, tol=1e-15, max_sweeps=80):
    # Hestenes rotations applied to the columns of a until every pair is
    # orthogonal; the column norms are then the singular values.
    k = a.shape[0]
    work = a.copy()
    vacc = identity(k)
    for _ in range(max_sweeps):
        rotated = False
        for i in range(k - 1):
            for j in range(i + 1, k):
                alpha = work[:, i] @ work[:, i]
                beta = work[:, j] @ work[:, j]
                gamma = work[:, i] @ work[:, j]
                if gamma == 0.0 or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                sn = c * t
                col_i = work[:, i].copy()
                work[:, i] = c * col_i - sn * work[:, j]
                work[:, j] = sn * col_i + c * work[:, j]
                col_i = vacc[:, i].copy()
                vacc[:, i] = c * col_i - sn * vacc[:, j]
                vacc[:, j] = sn * col_i + c * vacc[:, j]
        if not rotated:
            break
    else:
        logging.warning(f"[dense] Jacobi SVD stopped after {max_sweeps} sweeps without full convergence")

    sigma = np.linalg.norm(work, axis=0)
    order = np.argsort(-sigma, kind='stable')
    sigma = sigma[order]
    work = work[:, order]
    shat = vacc[:, order]

    s = np.zeros((k, k))
    cutoff = k * np.finfo(np.float64).eps * (sigma[0] if k else 0.0)
    rank = int(np.count_nonzero(sigma > cutoff))
    s[:, :rank] = work[:, :rank] / sigma[:rank]
    if rank < k:
        # Complete the left factor with an orthonormal basis of the
        # complement of the columns found so far.
        q, _ = np.linalg.qr(np.hstack([s[:, :rank], identity(k)]))
        s[:, rank:] = q[:, rank:k]
    return s, sigma, shat
