"""Finite-dimensional real Lie algebras given by structure constants.

An algebra is stored as a sparse bracket table: entries ``(i, j, k, c)`` with
``i < j`` (0-based) meaning that ``[e_i, e_j]`` has coefficient ``c`` on
``e_k``; antisymmetry fills in the rest.  The Jacobi identity is *not* a
construction invariant -- ``validate_jacobi`` checks it explicitly, so that
deliberately broken tables can be built and diagnosed.

Inner products are kept as explicit symmetric positive-definite matrices in
the chosen basis.  Everything downstream (adjoints, curvature, moment maps)
is phrased against such a matrix rather than assuming the basis is
orthonormal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._linalg import RANK_RTOL, nullspace, rank, row_space
from .errors import InvariantError, SchemaError

JACOBI_TOL = 1e-10
PD_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class InnerProduct:
    """A symmetric positive-definite bilinear form on R^n."""

    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
            raise SchemaError("inner product must be a nonempty square matrix")
        if not np.allclose(M, M.T, atol=1e-12 * max(1.0, float(np.abs(M).max()))):
            raise InvariantError("inner product matrix is not symmetric")
        M = 0.5 * (M + M.T)
        if np.linalg.eigvalsh(M).min() <= PD_TOL:
            raise InvariantError("inner product matrix is not positive-definite")
        object.__setattr__(self, "matrix", _freeze(M))

    @classmethod
    def identity(cls, n: int) -> "InnerProduct":
        return cls(np.eye(n))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def inverse(self) -> np.ndarray:
        return _freeze(np.linalg.inv(self.matrix))

    @cached_property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.dim)))

    def pairing(self, x, y) -> float:
        return float(np.asarray(x) @ self.matrix @ np.asarray(y))

    def norm(self, x) -> float:
        return float(np.sqrt(max(self.pairing(x, x), 0.0)))


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure-constant presentation of a real Lie algebra."""

    dim: int
    basis_labels: tuple
    structure: tuple  # entries (i, j, k, c), 0-based, i < j

    @classmethod
    def from_brackets(cls, dim, brackets, labels=None) -> "LieAlgebra":
        """Build an algebra from an iterable of (i, j, k, c) entries (0-based).

        Entries with i >= j, out-of-range indices, duplicate (i, j, k) keys,
        or non-finite coefficients are rejected as schema errors.
        """
        if not isinstance(dim, int) or dim < 1:
            raise SchemaError(f"dim must be a positive integer, got {dim!r}")
        if labels is None:
            labels = tuple(f"e{i + 1}" for i in range(dim))
        else:
            labels = tuple(str(s) for s in labels)
            if len(labels) != dim:
                raise SchemaError(f"expected {dim} basis labels, got {len(labels)}")
        seen = set()
        entries = []
        for entry in brackets:
            try:
                i, j, k, c = entry
            except (TypeError, ValueError):
                raise SchemaError(f"bracket entry {entry!r} is not (i, j, k, c)") from None
            if not all(isinstance(t, (int, np.integer)) for t in (i, j, k)):
                raise SchemaError(f"bracket indices in {entry!r} must be integers")
            i, j, k = int(i), int(j), int(k)
            c = float(c)
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise SchemaError(f"bracket entry {entry!r} has an index out of range")
            if i >= j:
                raise SchemaError(f"bracket entry {entry!r} must have i < j")
            if not np.isfinite(c):
                raise SchemaError(f"bracket entry {entry!r} has a non-finite coefficient")
            if (i, j, k) in seen:
                raise SchemaError(f"duplicate bracket entry for indices ({i}, {j}, {k})")
            seen.add((i, j, k))
            if c != 0.0:
                entries.append((i, j, k, c))
        return cls(dim=dim, basis_labels=labels, structure=tuple(entries))

    @cached_property
    def bracket_tensor(self) -> np.ndarray:
        """Dense antisymmetric tensor T with [e_i, e_j] = sum_k T[i,j,k] e_k."""
        T = np.zeros((self.dim, self.dim, self.dim))
        for i, j, k, c in self.structure:
            T[i, j, k] = c
            T[j, i, k] = -c
        return _freeze(T)

    @cached_property
    def adjoint_tensor(self) -> np.ndarray:
        """Stack of adjoint matrices: adjoint_tensor[i] = ad(e_i)."""
        return _freeze(np.einsum("ijk->ikj", self.bracket_tensor))

    def label(self, i: int) -> str:
        return self.basis_labels[i]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of an algebra, spanned by the rows of ``vectors``."""

    parent: LieAlgebra
    vectors: np.ndarray  # (k, dim)

    def __post_init__(self):
        V = np.asarray(self.vectors, dtype=float)
        if V.ndim != 2 or V.shape[1] != self.parent.dim:
            raise SchemaError(
                f"subspace vectors must be rows of length {self.parent.dim}"
            )
        if V.shape[0] > 0 and rank(V) != V.shape[0]:
            raise InvariantError("subspace spanning vectors are linearly dependent")
        object.__setattr__(self, "vectors", _freeze(V))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def project_coefficients(self, x) -> np.ndarray:
        """Least-squares coordinates of x in this subspace's spanning rows."""
        if self.dim == 0:
            return np.zeros(0)
        coef, *_ = np.linalg.lstsq(self.vectors.T, np.asarray(x, dtype=float), rcond=None)
        return coef

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if self.dim == 0:
            return bool(np.max(np.abs(x), initial=0.0) <= tol)
        coef = self.project_coefficients(x)
        return bool(np.max(np.abs(self.vectors.T @ coef - x)) <= tol * max(1.0, np.abs(x).max()))


@dataclass(frozen=True)
class JacobiReport:
    max_residual: float
    passed: bool
    tol: float


@dataclass(frozen=True, eq=False)
class CentralSeries:
    terms: tuple  # Subspace chain g^1 >= g^2 >= ...
    is_nilpotent: bool

    @property
    def depth(self) -> int:
        return len(self.terms)


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    """[x, y] for coordinate vectors x, y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (alg.dim,) or y.shape != (alg.dim,):
        raise SchemaError("bracket arguments must be coordinate vectors of the algebra")
    return np.einsum("ijk,i,j->k", alg.bracket_tensor, x, y)


def adjoint_matrix(alg: LieAlgebra, x) -> np.ndarray:
    """Matrix of ad(x): y -> [x, y] in the algebra basis."""
    x = np.asarray(x, dtype=float)
    if x.shape != (alg.dim,):
        raise SchemaError("adjoint argument must be a coordinate vector of the algebra")
    return np.einsum("ijk,i->kj", alg.bracket_tensor, x)


def validate_jacobi(alg: LieAlgebra, tol: float = JACOBI_TOL) -> JacobiReport:
    """Check the Jacobi identity on all basis triples.

    Returns the largest coefficient of the cyclic sum
    [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] over all triples.
    """
    T = alg.bracket_tensor
    # R[i,j,k,m] = coefficient of e_m in [[e_i, e_j], e_k]
    R = np.einsum("ija,akm->ijkm", T, T)
    J = R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)
    max_residual = float(np.abs(J).max()) if J.size else 0.0
    return JacobiReport(max_residual=max_residual, passed=max_residual <= tol, tol=tol)


def require_jacobi(alg: LieAlgebra, tol: float = JACOBI_TOL) -> None:
    rep = validate_jacobi(alg, tol)
    if not rep.passed:
        raise InvariantError(
            f"Jacobi identity fails: max residual {rep.max_residual:.3e} > {tol:.1e}"
        )


def killing_form(alg: LieAlgebra) -> np.ndarray:
    """Killing form B(x, y) = tr(ad x ad y) as a matrix on the basis."""
    ads = alg.adjoint_tensor
    B = np.einsum("aij,bji->ab", ads, ads)
    return 0.5 * (B + B.T)  # exactly symmetric by construction


def center(alg: LieAlgebra) -> Subspace:
    """The center {x : [x, y] = 0 for all y}."""
    # x is central iff ad(e_j) x = 0 for every j; stack and take the nullspace.
    stacked = alg.adjoint_tensor.reshape(alg.dim * alg.dim, alg.dim)
    cols = nullspace(stacked)
    return Subspace(parent=alg, vectors=cols.T)


def derivation_algebra(alg: LieAlgebra) -> list:
    """Basis of the derivation algebra Der = {D : D[x,y] = [Dx,y] + [x,Dy]}.

    The Leibniz conditions on all basis pairs are assembled into one linear
    system on vec(D) (row-major) and solved by SVD nullspace.
    """
    n = alg.dim
    T = alg.bracket_tensor
    pairs = list(itertools.combinations(range(n), 2))
    L = np.zeros((len(pairs) * n, n * n))
    for p, (i, j) in enumerate(pairs):
        cij = T[i, j]  # coefficients of [e_i, e_j]
        for m in range(n):
            row = L[p * n + m]
            for a in range(n):
                row[m * n + a] += cij[a]       # (D [e_i,e_j])_m
                row[a * n + i] -= T[a, j, m]   # -([D e_i, e_j])_m
                row[a * n + j] -= T[i, a, m]   # -([e_i, D e_j])_m
    cols = nullspace(L)
    return [cols[:, q].reshape(n, n) for q in range(cols.shape[1])]


def lower_central_series(alg: LieAlgebra) -> CentralSeries:
    """Terms g^1 = [g, g], g^{k+1} = [g, g^k] until stabilization or zero."""
    n = alg.dim
    T = alg.bracket_tensor
    current = row_space(T.reshape(n * n, n))
    terms = [Subspace(parent=alg, vectors=current)]
    while terms[-1].dim > 0:
        V = terms[-1].vectors
        # span of [e_i, v] over all basis elements and all spanning rows
        images = np.einsum("imn,kn->ikm", alg.adjoint_tensor, V).reshape(-1, n)
        nxt = row_space(images)
        if nxt.shape[0] == terms[-1].dim:
            return CentralSeries(terms=tuple(terms), is_nilpotent=False)
        terms.append(Subspace(parent=alg, vectors=nxt))
    return CentralSeries(terms=tuple(terms), is_nilpotent=True)


def g_adjoint(A: np.ndarray, G: InnerProduct) -> np.ndarray:
    """Adjoint of A with respect to G: the unique A* with <Ax,y> = <x,A*y>.

    Explicitly A* = G^{-1} A^T G; for the identity form this is the plain
    transpose.
    """
    A = np.asarray(A, dtype=float)
    if A.shape != (G.dim, G.dim):
        raise SchemaError(f"matrix shape {A.shape} does not match form dimension {G.dim}")
    return G.inverse @ A.T @ G.matrix


def mean_curvature_vector(alg: LieAlgebra, G: InnerProduct) -> np.ndarray:
    """The vector h with <h, x> = tr(ad x) for all x."""
    if G.dim != alg.dim:
        raise SchemaError("inner product dimension does not match the algebra")
    traces = np.einsum("ijj->i", alg.adjoint_tensor)
    return np.linalg.solve(G.matrix, traces)


def restrict_to(alg: LieAlgebra, sub: Subspace, tol: float = 1e-8) -> list:
    """Matrices of ad(e_i)|_sub in sub's spanning basis, for every basis e_i.

    Raises InvariantError naming an offending (element, vector) pair when the
    subspace is not invariant.
    """
    if sub.parent is not alg and sub.parent.dim != alg.dim:
        raise SchemaError("subspace does not belong to this algebra")
    V = sub.vectors.T  # columns are spanning vectors
    out = []
    for i in range(alg.dim):
        W = adjoint_matrix(alg, np.eye(alg.dim)[i]) @ V
        if sub.dim == 0:
            out.append(np.zeros((0, 0)))
            continue
        coef, *_ = np.linalg.lstsq(V, W, rcond=None)
        resid = V @ coef - W
        col_err = np.abs(resid).max(axis=0) if resid.size else np.zeros(0)
        scale = max(1.0, float(np.abs(W).max())) if W.size else 1.0
        if col_err.size and col_err.max() > tol * scale:
            j = int(np.argmax(col_err))
            raise InvariantError(
                f"subspace is not invariant: [{alg.label(i)}, v_{j + 1}] leaves the span "
                f"(residual {col_err.max():.3e})"
            )
        out.append(coef)
    return out


def orthonormal_frame(G: InnerProduct) -> np.ndarray:
    """Columns form a G-orthonormal basis: P^T G P = I (so P^{-1} = P^T G).

    Built from the Cholesky factor; for the identity form P is the identity.
    """
    if G.is_identity:
        return np.eye(G.dim)
    L = np.linalg.cholesky(G.matrix)
    return np.linalg.inv(L).T


def derived_subalgebra(alg: LieAlgebra) -> Subspace:
    """Span of all brackets [e_i, e_j]."""
    n = alg.dim
    return Subspace(parent=alg, vectors=row_space(alg.bracket_tensor.reshape(n * n, n)))
