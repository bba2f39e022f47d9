"""Ricci curvature of left-invariant metrics, phrased on structure constants.

The general operator is assembled in a metric-orthonormal frame as

    Ric = M - (1/2) B - S(ad H)

where M is the quadratic expression in the frame structure constants
(M_ab = -1/2 sum c_{ac}^d c_{bc}^d + 1/4 sum c_{cd}^a c_{cd}^b), B is the
Killing form, H the mean curvature vector and S the symmetrization.  The
result is transported back to the original basis, where it is self-adjoint
for the metric rather than symmetric.

For three-dimensional unimodular frames everything collapses to closed
forms: with [e2,e3] = l1 e1 (cyclically) and mu_i = (-l_i + l_j + l_k)/2,
the Ricci operator is diagonal with entries ric_i = 2 mu_j mu_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import InvariantError, SchemaError
from .liealg import (
    InnerProduct,
    LieAlgebra,
    _freeze,
    derivation_algebra,
    killing_form,
    lower_central_series,
    orthonormal_frame,
)
from .moment import Representation

SOLITON_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """A Lie algebra together with an inner product on its basis."""

    algebra: LieAlgebra
    metric: InnerProduct

    def __post_init__(self):
        if self.metric.dim != self.algebra.dim:
            raise SchemaError("metric dimension does not match the algebra")

    @classmethod
    def with_identity_metric(cls, algebra: LieAlgebra) -> "MetricLieAlgebra":
        return cls(algebra=algebra, metric=InnerProduct.identity(algebra.dim))


@dataclass(frozen=True, eq=False)
class RicciReport:
    """Ricci operator with its spectrum.

    ``ric_operator`` acts on the original basis (self-adjoint for the
    metric); ``eigenvectors`` columns are metric-orthonormal.
    """

    ric_operator: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    scalar_curvature: float


def ricci_left_invariant(mla: MetricLieAlgebra) -> RicciReport:
    """Ricci operator of the left-invariant metric defined by mla.metric."""
    alg = mla.algebra
    n = alg.dim
    G = mla.metric.matrix
    P = orthonormal_frame(mla.metric)

    # frame structure constants: [p_a, p_b] = sum_d c[a,b,d] p_d
    raw = np.einsum("ijk,ia,jb->abk", alg.bracket_tensor, P, P)
    c = np.einsum("abk,kd->abd", raw, G @ P)

    M = -0.5 * np.einsum("acd,bcd->ab", c, c) + 0.25 * np.einsum("cda,cdb->ab", c, c)
    B_frame = P.T @ killing_form(alg) @ P
    t = np.einsum("add->a", c)  # <H, p_a> in the frame
    adH = np.einsum("a,abd->db", t, c)
    ric_frame = M - 0.5 * B_frame - 0.5 * (adH + adH.T)
    ric_frame = 0.5 * (ric_frame + ric_frame.T)

    eigenvalues, vecs_frame = np.linalg.eigh(ric_frame)
    operator = P @ ric_frame @ P.T @ G  # P^{-1} = P^T G
    return RicciReport(
        ric_operator=_freeze(operator),
        eigenvalues=_freeze(eigenvalues),
        eigenvectors=_freeze(P @ vecs_frame),
        scalar_curvature=float(np.trace(ric_frame)),
    )


@dataclass(frozen=True)
class MilnorFrame:
    """Structure constants of a 3-dimensional unimodular frame:
    [e2,e3] = l1 e1, [e3,e1] = l2 e2, [e1,e2] = l3 e3."""

    lambda1: float
    lambda2: float
    lambda3: float

    @property
    def constants(self) -> tuple:
        return (self.lambda1, self.lambda2, self.lambda3)

    @property
    def sl2_ordered(self) -> bool:
        """True when l1 < 0 < l2 <= l3, the normalization used for the
        noncompact simple case."""
        return self.lambda1 < 0.0 < self.lambda2 <= self.lambda3


def milnor_algebra(frame: MilnorFrame) -> LieAlgebra:
    """The algebra with the frame's bracket table."""
    l1, l2, l3 = frame.constants
    return LieAlgebra.from_brackets(
        3,
        [(1, 2, 0, l1), (0, 2, 1, -l2), (0, 1, 2, l3)],
    )


def milnor_frame_ricci(frame: MilnorFrame) -> np.ndarray:
    """Diagonal Ricci entries (ric1, ric2, ric3) in closed form."""
    l1, l2, l3 = frame.constants
    mu1 = 0.5 * (-l1 + l2 + l3)
    mu2 = 0.5 * (l1 - l2 + l3)
    mu3 = 0.5 * (l1 + l2 - l3)
    return np.array([2.0 * mu2 * mu3, 2.0 * mu3 * mu1, 2.0 * mu1 * mu2])


@dataclass(frozen=True)
class MilnorGrid:
    """Product grid over frame constants with l1 negative, l2, l3 positive."""

    n1: int = 50
    n2: int = 50
    n3: int = 50
    lambda1_range: tuple = (-3.0, -0.05)
    lambda2_range: tuple = (0.05, 3.0)
    lambda3_range: tuple = (0.05, 3.0)

    def __post_init__(self):
        for n in (self.n1, self.n2, self.n3):
            if not isinstance(n, int) or n < 1:
                raise SchemaError("grid sizes must be positive integers")
        lo1, hi1 = self.lambda1_range
        if not (lo1 <= hi1 < 0.0):
            raise SchemaError("lambda1 range must be negative")
        for lo, hi in (self.lambda2_range, self.lambda3_range):
            if not (0.0 < lo <= hi):
                raise SchemaError("lambda2/lambda3 ranges must be positive")

    def axes(self):
        return (
            np.linspace(*self.lambda1_range, self.n1),
            np.linspace(*self.lambda2_range, self.n2),
            np.linspace(*self.lambda3_range, self.n3),
        )

    @property
    def size(self) -> int:
        return self.n1 * self.n2 * self.n3


@dataclass(frozen=True, eq=False)
class ScanReport:
    """Grid scan of the diagonal Ricci form.

    ``rows`` columns are (lambda1, lambda2, lambda3, ric1, ric2, ric3,
    argmin); points with lambda2 > lambda3 are canonicalized by swapping,
    which permutes ric2/ric3 and fixes ric1.  A counterexample is a point
    where ric1 is the strict minimum.
    """

    rows: np.ndarray
    counterexamples: int

    @property
    def points(self) -> int:
        return self.rows.shape[0]

    @property
    def passed(self) -> bool:
        return self.counterexamples == 0


def milnor_min_direction_scan(grid: MilnorGrid | None = None) -> ScanReport:
    """Scan the sl2-ordered region for frames where the first direction
    (the one with the negative constant) realizes the strict Ricci minimum.

    None exist in this region; the report counts violations found.
    """
    grid = grid or MilnorGrid()
    l1, l2, l3 = grid.axes()
    rows, counter = kernels.milnor_scan(l1, l2, l3, True)
    return ScanReport(rows=_freeze(rows), counterexamples=int(counter))


@dataclass(frozen=True, eq=False)
class NilsolitonFit:
    """Best least-squares solution of Ric = c I + D over derivations D."""

    c: float
    derivation: np.ndarray
    residual: float

    def is_soliton(self, tol: float = SOLITON_TOL) -> bool:
        return self.residual <= tol


def nilsoliton_fit(mla: MetricLieAlgebra) -> NilsolitonFit:
    """Fit the soliton equation on a nilpotent metric algebra.

    The Ricci operator is projected onto span(I) + Der in the Frobenius
    sense; the residual is the projection error, zero exactly when the
    metric is a nilsoliton.  Non-nilpotent input is rejected.
    """
    alg = mla.algebra
    if not lower_central_series(alg).is_nilpotent:
        raise InvariantError("nilsoliton fit requires a nilpotent algebra")
    n = alg.dim
    ric = ricci_left_invariant(mla).ric_operator
    ders = derivation_algebra(alg)
    cols = [np.eye(n).ravel()] + [D.ravel() for D in ders]
    A = np.stack(cols, axis=1)
    coef, *_ = np.linalg.lstsq(A, ric.ravel(), rcond=None)
    c = float(coef[0])
    D = sum((coef[1 + q] * ders[q] for q in range(len(ders))), np.zeros((n, n)))
    residual = float(np.linalg.norm(ric - c * np.eye(n) - D))
    return NilsolitonFit(c=c, derivation=_freeze(D), residual=residual)


def c_theta_operator(theta: Representation) -> np.ndarray:
    """The quadratic curvature correction of a representation.

    Defined by <C(Y), Z>_domain = (1/4) tr(S(theta(Y)) S(theta(Z))) with S
    the G_target-symmetrization; returned as an operator on the domain,
    self-adjoint for G_domain and positive semidefinite.
    """
    k = theta.domain_dim
    syms = np.stack(
        [0.5 * (M + theta.target_adjoint(M)) for M in theta.matrices]
    )
    Q = 0.25 * np.einsum("iab,jba->ij", syms, syms)
    Q = 0.5 * (Q + Q.T)
    return theta.G_domain.inverse @ Q


def ric_uk_model(theta: Representation, c: float) -> np.ndarray:
    """Ricci operator of the reductive-quotient model: c I + C_theta.

    The constant c is background curvature data supplied by the caller; it
    is not derivable from theta alone.
    """
    return c * np.eye(theta.domain_dim) + c_theta_operator(theta)
