"""Shared dense linear algebra helpers.

Rank decisions all go through one SVD cutoff policy: a singular value counts
as nonzero when it exceeds RANK_RTOL times the largest singular value.
"""

from __future__ import annotations

import numpy as np

RANK_RTOL = 1e-10


def rank(A: np.ndarray) -> int:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > RANK_RTOL * s[0]))


def nullspace(A: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ker(A), returned as columns of an (n, d) array."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    if m == 0 or n == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(A)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s > RANK_RTOL * s[0]))
    return vt[r:].T.copy()


def row_space(A: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the row space, as rows of an (r, n) array."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] == 0:
        return A.reshape(0, A.shape[1])
    _, s, vt = np.linalg.svd(A)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((0, A.shape[1]))
    r = int(np.count_nonzero(s > RANK_RTOL * s[0]))
    return vt[:r].copy()


def adjoint(A: np.ndarray, G: np.ndarray, Ginv: np.ndarray) -> np.ndarray:
    """Adjoint of A with respect to the inner product matrix G."""
    return Ginv @ A.T @ G


def sym_part(A: np.ndarray, G=None, Ginv=None) -> np.ndarray:
    if G is None:
        return 0.5 * (A + A.T)
    return 0.5 * (A + adjoint(A, G, Ginv))


def skew_part(A: np.ndarray, G=None, Ginv=None) -> np.ndarray:
    if G is None:
        return 0.5 * (A - A.T)
    return 0.5 * (A - adjoint(A, G, Ginv))


def commutant(mats: np.ndarray) -> list[np.ndarray]:
    """Basis of {X : XM_i = M_iX for all i}, via one stacked nullspace.

    With row-major vectorization, vec(XM) = (I (x) M^T) vec(X) and
    vec(MX) = (M (x) I) vec(X).
    """
    mats = np.asarray(mats, dtype=float)
    if mats.ndim == 2:
        mats = mats[None, :, :]
    k, n, _ = mats.shape
    eye = np.eye(n)
    blocks = [np.kron(eye, M.T) - np.kron(M, eye) for M in mats]
    L = np.vstack(blocks) if blocks else np.zeros((0, n * n))
    cols = nullspace(L)
    return [cols[:, j].reshape(n, n) for j in range(cols.shape[1])]


def gram_schmidt(vectors: np.ndarray, G: np.ndarray) -> np.ndarray:
    """G-orthonormalize the rows of ``vectors`` (assumed independent).

    Classical Gram-Schmidt with one reorthogonalization pass; fine at the
    dimensions this package works with.
    """
    V = np.array(vectors, dtype=float)
    out = []
    for v in V:
        for _ in range(2):
            for u in out:
                v = v - (u @ G @ v) * u
        nrm = float(np.sqrt(v @ G @ v))
        if nrm <= 1e-13 * max(1.0, float(np.abs(V).max())):
            raise np.linalg.LinAlgError("Gram-Schmidt on dependent vectors")
        out.append(v / nrm)
    return np.array(out) if out else np.zeros((0, V.shape[1]))
