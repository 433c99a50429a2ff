"""Dense complex matrix kernel.

Conventions, fixed once here and shared by the whole package:

* ``kron(a, b)`` is lexicographic with the LEFT factor outermost,
  ``kron(a, b)[i*p + k, j*q + l] = a[i, j] * b[k, l]`` for ``b`` of shape
  ``(p, q)`` (the numpy convention).
* ``direct_sum(a, b)`` is the block diagonal ``[[a, 0], [0, b]]``.
* Matrices with a zero dimension (``0 x n``, ``n x 0``) are legal values;
  they represent morphisms touching the empty system.

Under this kron ordering the interchange ``(a (+) b) (x) c ==
(a (x) c) (+) (b (x) c)`` holds entrywise, while ``a (x) (b (+) c)`` only
agrees with ``(a (x) b) (+) (a (x) c)`` up to the fixed distributivity
permutation exposed by :func:`qbiperm.algebra.delta_sharp_pure`.
"""

from __future__ import annotations

import numpy as np

from .errors import IllConditioned, NotHermitian, NotIsometry, ShapeError

# Absolute Frobenius tolerance for structural predicates (unitary,
# isometry, Hermitian, trace preserving, unital).
ATOL = 1e-9
# Eigenvalue nonnegativity threshold for PSD checks, relative to the
# largest eigenvalue, plus an absolute dust floor for blocks that are
# numerically zero (double precision headroom ~1e-12).
PSD_RTOL = 1e-8
PSD_DUST = 1e-12
# Rank cut for Kraus extraction, relative to the largest eigenvalue.
RANK_RTOL = 1e-7
# Gram-Schmidt candidate rejection threshold.
GS_MIN_RESIDUAL = 1e-6


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of ndim {m.ndim}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def frob(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(a)))


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=complex)


def kron(a, b) -> np.ndarray:
    """Kronecker product, left factor outermost."""
    a, b = as_matrix(a), as_matrix(b)
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    return np.kron(a, b)


def direct_sum(a, b) -> np.ndarray:
    """Block diagonal [[a, 0], [0, b]]."""
    a, b = as_matrix(a), as_matrix(b)
    out = zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def direct_sum_all(mats) -> np.ndarray:
    out = zeros(0, 0)
    for m in mats:
        out = direct_sum(out, m)
    return out


def is_hermitian(h, tol: float = ATOL) -> bool:
    h = as_matrix(h)
    return h.shape[0] == h.shape[1] and frob(h - dagger(h)) <= tol


def is_unitary(u, tol: float = ATOL) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return frob(dagger(u) @ u - identity(u.shape[0])) <= tol


def is_isometry(v, tol: float = ATOL) -> bool:
    v = as_matrix(v)
    return frob(dagger(v) @ v - identity(v.shape[1])) <= tol


def hermitian_eigensystem(h, tol: float = ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (real, descending) and eigenvector columns of a Hermitian matrix.

    Satisfies ``h == q @ diag(w) @ q.conj().T`` within ``1e-8 * frob(h)``
    with ``q`` unitary.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeError(f"eigensystem needs a square matrix, got {h.shape}")
    residual = frob(h - dagger(h))
    if residual > tol:
        raise NotHermitian(f"matrix is not Hermitian (residual {residual:.3e})")
    if h.shape[0] == 0:
        return np.zeros(0), zeros(0, 0)
    w, q = np.linalg.eigh((h + dagger(h)) / 2)
    order = np.argsort(w)[::-1]
    return w[order].real.copy(), np.ascontiguousarray(q[:, order])


def spectral_norm(a) -> float:
    """Largest singular value (0 for empty matrices)."""
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    g = dagger(a) @ a
    w, _ = hermitian_eigensystem((g + dagger(g)) / 2)
    return float(np.sqrt(max(float(w[0]), 0.0)))


def _project_out(basis: list[np.ndarray], x: np.ndarray) -> np.ndarray:
    for b in basis:
        x = x - b * (np.vdot(b, x))
    return x


def extend_to_unitary(v, tol: float = ATOL) -> np.ndarray:
    """Complete an n x m isometry to an n x n unitary whose first m columns are v.

    Deterministic candidate policy: the remaining columns come from standard
    basis vectors taken in index order, Gram-Schmidt projected against the
    accepted columns; candidates whose residual norm falls below
    ``GS_MIN_RESIDUAL`` are skipped, accepted ones are renormalized.
    """
    v = as_matrix(v)
    n, m = v.shape
    if m > n:
        raise ShapeError(f"isometry must have at least as many rows as columns, got {v.shape}")
    residual = frob(dagger(v) @ v - identity(m))
    if residual > tol:
        raise NotIsometry(f"matrix is not an isometry (residual {residual:.3e})")
    cols = [np.ascontiguousarray(v[:, j]) for j in range(m)]
    for i in range(n):
        if len(cols) == n:
            break
        e = np.zeros(n, dtype=complex)
        e[i] = 1.0
        r = _project_out(cols, e)
        if np.linalg.norm(r) < GS_MIN_RESIDUAL:
            continue
        r = _project_out(cols, r)  # second pass for numerical orthogonality
        cols.append(r / np.linalg.norm(r))
    if len(cols) != n:
        raise IllConditioned("Gram-Schmidt completion ran out of candidate vectors")
    return np.column_stack(cols) if cols else zeros(n, n)


def matrix_to_json(a) -> dict:
    """Encode as {"rows": n, "cols": m, "data": [[re, im], ...]} row-major."""
    a = as_matrix(a)
    data = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": data}


def matrix_from_json(d: dict) -> np.ndarray:
    try:
        rows, cols, data = int(d["rows"]), int(d["cols"]), d["data"]
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"malformed matrix encoding: {exc}")
    if len(data) != rows * cols:
        raise ShapeError(f"matrix encoding claims {rows}x{cols} but carries {len(data)} entries")
    flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    return flat.reshape(rows, cols)
