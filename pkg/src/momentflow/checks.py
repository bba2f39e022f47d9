"""Structural verification: orthogonal parts, ideal splits, skewness at limits.

These are the cross-checks one runs after a flow has converged: extract the
orthogonal factor of an invertible image, split a semisimple domain into
compact and noncompact ideals, and confirm that a minimal point represents
the compact part by skew-adjoint matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import RANK_RTOL, commutant, row_space
from .errors import InvariantError, NotSemisimpleError, SchemaError
from .liealg import (
    InnerProduct,
    LieAlgebra,
    Subspace,
    _freeze,
    g_adjoint,
    killing_form,
    restrict_to,
)
from .moment import FlowConfig, Representation, gradient_flow

PHI_TOL = 1e-8
SKEW_TOL = 1e-6


def normal_operator_check(A: np.ndarray, G: InnerProduct | None = None) -> float:
    """Residual ||A A* - A* A||_F; zero iff A is normal for G."""
    A = np.asarray(A, dtype=float)
    if G is None:
        G = InnerProduct.identity(A.shape[0])
    As = g_adjoint(A, G)
    return float(np.linalg.norm(A @ As - As @ A))


@dataclass(frozen=True, eq=False)
class PhiReport:
    """Polar-type orthogonal part phi = A (A*)^{-1} of an invertible A.

    For normal A, phi is a G-isometry commuting with A; the two residuals
    quantify exactly that.  Non-normal input is accepted but flagged, and
    the residuals then measure how badly the construction degrades.
    """

    phi: np.ndarray
    orthogonality_residual: float
    commutation_residual: float
    normality_residual: float
    normal: bool


def phi_orthogonal_part(A: np.ndarray, G: InnerProduct | None = None,
                        tol: float = PHI_TOL) -> PhiReport:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise SchemaError("expected a square matrix")
    if G is None:
        G = InnerProduct.identity(A.shape[0])
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e12:
        raise InvariantError(f"matrix is singular or near-singular (cond {cond:.3e})")
    As = g_adjoint(A, G)
    normality = float(np.linalg.norm(A @ As - As @ A))
    phi = A @ np.linalg.inv(As)
    phis = g_adjoint(phi, G)
    orth = float(np.linalg.norm(phis @ phi - np.eye(A.shape[0])))
    comm = float(np.linalg.norm(phi @ A - A @ phi))
    return PhiReport(
        phi=_freeze(phi),
        orthogonality_residual=orth,
        commutation_residual=comm,
        normality_residual=normality,
        normal=normality <= tol,
    )


def symmetric_a_extraction(mats, G: InnerProduct | None = None,
                           tol: float = PHI_TOL) -> list:
    """G-symmetric parts of a family of normal matrices.

    Each input must be normal for G (so its symmetric and skew parts
    commute and the decomposition is canonical); a non-normal entry is a
    domain error.
    """
    mats = [np.asarray(A, dtype=float) for A in mats]
    if G is None and mats:
        G = InnerProduct.identity(mats[0].shape[0])
    out = []
    for idx, A in enumerate(mats):
        resid = normal_operator_check(A, G)
        if resid > tol:
            raise InvariantError(
                f"matrix {idx} is not normal (residual {resid:.3e} > {tol:.1e})"
            )
        out.append(0.5 * (A + g_adjoint(A, G)))
    return out


@dataclass(frozen=True, eq=False)
class SplitReport:
    """Decomposition of a semisimple algebra into minimal ideals.

    ``killing_signatures`` holds (positive, negative, zero) inertia counts
    of the restricted Killing form, aligned with compact_ideals followed by
    noncompact_ideals.  An ideal is compact exactly when its restricted
    Killing form is negative definite.
    """

    compact_ideals: tuple
    noncompact_ideals: tuple
    killing_signatures: tuple
    seed: int

    @property
    def ideals(self) -> tuple:
        return self.compact_ideals + self.noncompact_ideals


def _killing_signature(B_sub: np.ndarray) -> tuple:
    eigs = np.linalg.eigvalsh(B_sub)
    scale = max(float(np.abs(eigs).max()), 1e-300)
    pos = int(np.count_nonzero(eigs > RANK_RTOL * scale))
    neg = int(np.count_nonzero(eigs < -RANK_RTOL * scale))
    zero = eigs.size - pos - neg
    return (pos, neg, zero)


def _split_ideal(alg: LieAlgebra, rows: np.ndarray, rng) -> list:
    """Recursively split an ideal (given by orthonormal rows) into minimal
    ideals using random elements of the adjoint commutant.

    The commutant of the adjoint action on a semisimple algebra is a sum of
    one field (R or C) per minimal ideal, so a random element is
    diagonalizable and its real eigen-clusters are exactly the ideals.
    """
    sub = Subspace(parent=alg, vectors=rows)
    mats = np.stack(restrict_to(alg, sub))
    comm = commutant(mats)
    if len(comm) <= 1:
        return [rows]
    for _ in range(8):
        X = sum(rng.standard_normal() * Cm for Cm in comm)
        eigvals, eigvecs = np.linalg.eig(X)
        scale = max(float(np.abs(eigvals).max()), 1.0)
        order = np.lexsort((np.abs(eigvals.imag), eigvals.real))
        clusters = []
        for idx in order:
            ev = eigvals[idx]
            placed = False
            for cl in clusters:
                if (abs(cl[0].real - ev.real) <= 1e-8 * scale
                        and abs(abs(cl[0].imag) - abs(ev.imag)) <= 1e-8 * scale):
                    cl[1].append(idx)
                    placed = True
                    break
            if not placed:
                clusters.append((ev, [idx]))
        if len(clusters) <= 1:
            continue  # unlucky draw, try again
        pieces = []
        for _, idxs in clusters:
            vecs = eigvecs[:, idxs]
            real_cols = np.hstack([vecs.real, vecs.imag])
            piece = row_space(real_cols.T)
            pieces.append(piece @ rows)
        out = []
        for piece in pieces:
            out.extend(_split_ideal(alg, piece, rng))
        return out
    raise InvariantError("could not separate commutant eigenvalues; split failed")


def compact_noncompact_split(alg: LieAlgebra, seed: int = 0) -> SplitReport:
    """Split a semisimple algebra into compact and noncompact minimal ideals.

    Raises NotSemisimpleError when the Killing form is degenerate.  The
    randomness (seeded, reproducible) only picks separating elements of the
    adjoint commutant; the resulting ideals are deterministic up to basis.
    """
    B = killing_form(alg)
    eigs = np.linalg.eigvalsh(B)
    scale = float(np.abs(eigs).max())
    if scale == 0.0 or float(np.abs(eigs).min()) <= RANK_RTOL * scale:
        raise NotSemisimpleError("Killing form is degenerate; algebra is not semisimple")

    rng = np.random.default_rng(seed)
    pieces = _split_ideal(alg, np.eye(alg.dim), rng)

    compact = []
    noncompact = []
    for rows in sorted(pieces, key=lambda r: r.shape[0]):
        sub = Subspace(parent=alg, vectors=rows)
        sig = _killing_signature(rows @ B @ rows.T)
        if sig[0] == 0 and sig[2] == 0:
            compact.append((sub, sig))
        else:
            noncompact.append((sub, sig))
    return SplitReport(
        compact_ideals=tuple(s for s, _ in compact),
        noncompact_ideals=tuple(s for s, _ in noncompact),
        killing_signatures=tuple(sig for _, sig in compact + noncompact),
        seed=seed,
    )


@dataclass(frozen=True, eq=False)
class SkewReport:
    """Skewness of the limit images along compact ideals after a flow."""

    converged: bool
    symmetric_part_max: float
    per_ideal: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return self.converged and self.symmetric_part_max <= self.tol


def skew_at_minimal_check(theta: Representation, split: SplitReport,
                          config: FlowConfig | None = None,
                          tol: float = SKEW_TOL) -> SkewReport:
    """Flow theta to a minimal point and measure the G_target-symmetric part
    of the limit images of each compact ideal.

    At a minimal point the compact part must act by skew-adjoint matrices;
    an empty compact list passes vacuously.  Stagnation propagates.
    """
    for sub in split.ideals:
        if sub.parent.dim != theta.domain_dim:
            raise SchemaError("split and representation domains do not match")
    trace = gradient_flow(theta, config)
    limit = trace.limit
    per_ideal = []
    for sub in split.compact_ideals:
        worst = 0.0
        for y in sub.vectors:
            M = limit.apply(y)
            sym = 0.5 * (M + limit.target_adjoint(M))
            worst = max(worst, float(np.linalg.norm(sym)))
        per_ideal.append(worst)
    return SkewReport(
        converged=trace.converged,
        symmetric_part_max=max(per_ideal, default=0.0),
        per_ideal=tuple(per_ideal),
        tol=tol,
    )
