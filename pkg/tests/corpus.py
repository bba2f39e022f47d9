"""Shared fixture algebras and representations used across the test suite."""

import numpy as np

import momentflow as mf


def heisenberg(scale=1.0):
    """[e1, e2] = scale * e3."""
    return mf.LieAlgebra.from_brackets(3, [(0, 1, 2, scale)])


def sl2():
    """Basis (H, E, F): [H,E] = 2E, [H,F] = -2F, [E,F] = H."""
    return mf.LieAlgebra.from_brackets(
        3,
        [(0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)],
        labels=("H", "E", "F"),
    )


def so3():
    """[e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2."""
    return mf.LieAlgebra.from_brackets(
        3, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)]
    )


def abelian(n):
    return mf.LieAlgebra.from_brackets(n, [])


def solv2():
    """[e1, e2] = e2, the nonabelian 2-dimensional algebra."""
    return mf.LieAlgebra.from_brackets(2, [(0, 1, 1, 1.0)])


def filiform4():
    """[e1,e2] = e3, [e1,e3] = e4."""
    return mf.LieAlgebra.from_brackets(4, [(0, 1, 2, 1.0), (0, 2, 3, 1.0)])


def sl2_semidirect_r2():
    """sl2 acting on R^2: basis (H, E, F, v1, v2)."""
    return mf.LieAlgebra.from_brackets(
        5,
        [
            (0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0),
            (0, 3, 3, 1.0), (0, 4, 4, -1.0), (1, 4, 3, 1.0), (2, 3, 4, 1.0),
        ],
        labels=("H", "E", "F", "v1", "v2"),
    )


def so3_plus_sl2():
    """Block sum: so3 on e1..e3, sl2 on e4..e6."""
    return mf.LieAlgebra.from_brackets(
        6,
        [
            (0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0),
            (3, 4, 4, 2.0), (3, 5, 5, -2.0), (4, 5, 3, 1.0),
        ],
    )


def jacobi_breaker():
    """A bracket table that violates the Jacobi identity."""
    return mf.LieAlgebra.from_brackets(
        3, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 0, 1.0)]
    )


H2 = np.array([[1.0, 0.0], [0.0, -1.0]])
E2 = np.array([[0.0, 1.0], [0.0, 0.0]])
F2 = np.array([[0.0, 0.0], [1.0, 0.0]])

L1 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
L2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
L3 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def sl2_rep():
    """The defining representation of sl2 on R^2; a minimal point."""
    return mf.Representation.from_matrices(np.stack([H2, E2, F2]))


def so3_rep():
    """The defining representation of so3 on R^3; skew, minimal."""
    return mf.Representation.from_matrices(np.stack([L1, L2, L3]))


def block_diag(A, B):
    n, m = A.shape[0], B.shape[0]
    out = np.zeros((n + m, n + m))
    out[:n, :n] = A
    out[n:, n:] = B
    return out


def so3_plus_sl2_rep():
    """so3 + sl2 acting block-diagonally on R^5, matching so3_plus_sl2()."""
    mats = [block_diag(L, np.zeros((2, 2))) for L in (L1, L2, L3)]
    mats += [block_diag(np.zeros((3, 3)), M) for M in (H2, E2, F2)]
    return mf.Representation.from_matrices(np.stack(mats))


def sl2_plus_center_rep(central=None):
    """sl2 + R on R^2; the central generator acts by ``central`` (default I)."""
    Z = np.eye(2) if central is None else np.asarray(central, dtype=float)
    return mf.Representation.from_matrices(np.stack([H2, E2, F2, Z]))


def sl2_plus_r():
    """sl2 + R as an algebra: basis (H, E, F, Z)."""
    return mf.LieAlgebra.from_brackets(
        4,
        [(0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)],
        labels=("H", "E", "F", "Z"),
    )


def random_spd(rng, n, spread=2.0):
    """A well-conditioned random SPD matrix."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigs = rng.uniform(1.0 / spread, spread, n)
    return Q @ np.diag(eigs) @ Q.T


def random_conditioned(rng, n, cond_max=10.0):
    """Random invertible matrix with condition number at most cond_max."""
    Q1, _ = np.linalg.qr(rng.standard_normal((n, n)))
    Q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
    smin = rng.uniform(0.3, 1.0)
    svals = rng.uniform(smin, cond_max * smin, n)
    return Q1 @ np.diag(svals) @ Q2
