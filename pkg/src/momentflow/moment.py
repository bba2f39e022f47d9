"""Moment maps and norm-square gradient flows for algebra representations.

A point is a linear map theta from a k-dimensional domain into n x n
matrices, stored as a stack of images of the domain basis.  Both sides carry
inner products; the moment map is

    m(theta) = sum_i [theta(Y_i), theta(Y_i)*]

over any G_domain-orthonormal basis {Y_i}, with * the G_target-adjoint.  The
defining property, and the only thing callers should rely on, is

    tr(m(theta) A*) = <A . theta, theta>   for every matrix A,

where (A . theta)(Y) = [A, theta(Y)] and <.,.> is the induced inner product
on maps.  Zeros of m are the minimal points; the flow module descends
||m||^2 along its gradient 4 m(theta) . theta.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from ._linalg import commutant, gram_schmidt, nullspace
from .errors import InvariantError, SchemaError, StagnationError
from .liealg import InnerProduct, LieAlgebra, _freeze, center, derived_subalgebra, g_adjoint

MINIMAL_TOL = 1e-7
CHECK_TOL = 1e-8
COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class Representation:
    """A stack of matrices theta(Y_1), ..., theta(Y_k) with inner products.

    ``matrices`` has shape (k, n, n); G_domain lives on the k-dimensional
    domain, G_target on R^n.  Immutable: the arrays are frozen on
    construction, so values can be shared across threads freely.
    """

    matrices: np.ndarray
    G_domain: InnerProduct
    G_target: InnerProduct

    def __post_init__(self):
        M = np.asarray(self.matrices, dtype=float)
        if M.ndim != 3 or M.shape[1] != M.shape[2] or M.shape[0] == 0:
            raise SchemaError("representation matrices must be a nonempty (k, n, n) stack")
        if not np.all(np.isfinite(M)):
            raise SchemaError("representation matrices must be finite")
        if self.G_domain.dim != M.shape[0]:
            raise SchemaError(
                f"G_domain has dimension {self.G_domain.dim}, expected {M.shape[0]}"
            )
        if self.G_target.dim != M.shape[1]:
            raise SchemaError(
                f"G_target has dimension {self.G_target.dim}, expected {M.shape[1]}"
            )
        object.__setattr__(self, "matrices", _freeze(M))

    @classmethod
    def from_matrices(cls, mats, G_domain=None, G_target=None) -> "Representation":
        M = np.asarray(mats, dtype=float)
        if M.ndim != 3:
            raise SchemaError("expected a (k, n, n) stack of matrices")
        k, n = M.shape[0], M.shape[1]
        return cls(
            matrices=M,
            G_domain=G_domain if G_domain is not None else InnerProduct.identity(k),
            G_target=G_target if G_target is not None else InnerProduct.identity(n),
        )

    @property
    def domain_dim(self) -> int:
        return self.matrices.shape[0]

    @property
    def target_dim(self) -> int:
        return self.matrices.shape[1]

    def apply(self, y) -> np.ndarray:
        """theta(Y) for a domain coordinate vector Y."""
        y = np.asarray(y, dtype=float)
        if y.shape != (self.domain_dim,):
            raise SchemaError("expected a domain coordinate vector")
        return np.tensordot(y, self.matrices, axes=1)

    def replace_matrices(self, mats) -> "Representation":
        return Representation(matrices=mats, G_domain=self.G_domain, G_target=self.G_target)

    @cached_property
    def _domain_combos(self) -> np.ndarray:
        """C with C^T G_domain C = I; columns give an orthonormal domain basis."""
        if self.G_domain.is_identity:
            return np.eye(self.domain_dim)
        L = np.linalg.cholesky(self.G_domain.matrix)
        return np.linalg.inv(L).T

    def orthonormalized(self) -> np.ndarray:
        """Images of a G_domain-orthonormal basis, shape (k, n, n)."""
        C = self._domain_combos
        return np.einsum("ij,iab->jab", C, self.matrices)

    def target_adjoint(self, A: np.ndarray) -> np.ndarray:
        return g_adjoint(A, self.G_target)

    def derivation_residual(self, alg: LieAlgebra) -> float:
        """How far theta is from being a homomorphism on alg's basis."""
        if alg.dim != self.domain_dim:
            raise SchemaError("algebra dimension does not match the representation domain")
        T = alg.bracket_tensor
        M = self.matrices
        lhs = np.einsum("ijk,kab->ijab", T, M)
        rhs = np.einsum("iac,jcb->ijab", M, M) - np.einsum("jac,icb->ijab", M, M)
        return float(np.abs(lhs - rhs).max())


def _check_compatible(a: Representation, b: Representation) -> None:
    if a.domain_dim != b.domain_dim or a.target_dim != b.target_dim:
        raise SchemaError("representations have mismatched dimensions")
    if not np.allclose(a.G_domain.matrix, b.G_domain.matrix, atol=1e-12):
        raise SchemaError("representations carry different domain inner products")
    if not np.allclose(a.G_target.matrix, b.G_target.matrix, atol=1e-12):
        raise SchemaError("representations carry different target inner products")


def v_inner(a: Representation, b: Representation) -> float:
    """Induced inner product <a, b> = sum_i tr(a(Y_i) b(Y_i)*) over an
    orthonormal domain basis."""
    _check_compatible(a, b)
    ea = a.orthonormalized()
    eb = b.orthonormalized()
    ebs = np.stack([a.target_adjoint(Mi) for Mi in eb])
    return float(np.einsum("kab,kba->", ea, ebs))


def v_norm(a: Representation) -> float:
    return float(np.sqrt(max(v_inner(a, a), 0.0)))


def moment_map(theta: Representation) -> np.ndarray:
    """m(theta) = sum_i [eta_i, eta_i*] over an orthonormal domain basis."""
    eta = theta.orthonormalized()
    etas = np.stack([theta.target_adjoint(Mi) for Mi in eta])
    return np.einsum("kab,kbc->ac", eta, etas) - np.einsum("kab,kbc->ac", etas, eta)


def moment_norm(theta: Representation) -> float:
    """Frobenius norm of the moment map value."""
    return float(np.linalg.norm(moment_map(theta)))


def is_minimal(theta: Representation, tol: float = MINIMAL_TOL) -> bool:
    return moment_norm(theta) <= tol


def infinitesimal_action(A: np.ndarray, theta: Representation) -> Representation:
    """(A . theta)(Y) = [A, theta(Y)]."""
    A = np.asarray(A, dtype=float)
    n = theta.target_dim
    if A.shape != (n, n):
        raise SchemaError(f"acting matrix must be {n} x {n}")
    mats = A @ theta.matrices - theta.matrices @ A
    return theta.replace_matrices(mats)


def gl_action(g: np.ndarray, theta: Representation) -> Representation:
    """(g . theta)(Y) = g theta(Y) g^{-1} for invertible g."""
    g = np.asarray(g, dtype=float)
    n = theta.target_dim
    if g.shape != (n, n):
        raise SchemaError(f"acting matrix must be {n} x {n}")
    cond = np.linalg.cond(g)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise InvariantError(f"acting matrix is singular or near-singular (cond {cond:.3e})")
    ginv = np.linalg.inv(g)
    return theta.replace_matrices(g @ theta.matrices @ ginv)


def gradient(theta: Representation) -> Representation:
    """Gradient of ||m||^2 at theta: Y -> 4 [m(theta), theta(Y)]."""
    return infinitesimal_action(4.0 * moment_map(theta), theta)


@dataclass(frozen=True)
class FlowConfig:
    """Step-control knobs for the norm-square descent."""

    max_steps: int = 50_000
    step_init: float = 0.01
    step_min: float = 1e-14
    grad_norm_stop: float = 1e-8
    backtrack_factor: float = 0.5

    def __post_init__(self):
        if not isinstance(self.max_steps, int) or self.max_steps < 0:
            raise SchemaError("max_steps must be a nonnegative integer")
        if not (0.0 < self.step_min < self.step_init):
            raise SchemaError("need 0 < step_min < step_init")
        if self.grad_norm_stop <= 0.0:
            raise SchemaError("grad_norm_stop must be positive")
        if not (0.0 < self.backtrack_factor < 1.0):
            raise SchemaError("backtrack_factor must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class FlowTrace:
    """Result of a descent run.

    ``history`` holds one (step, t, m_norm2) row per accepted step (row 0 is
    the initial point); ``samples`` is a thinned sequence of
    (t, representation, m_norm2) snapshots -- a doubling subsequence of
    steps, always including the first and last point.  m_norm2 here is the
    flow energy tr(m m*), strictly decreasing along accepted steps.
    """

    samples: tuple
    converged: bool
    limit: Representation
    history: np.ndarray
    status: str

    @property
    def n_steps(self) -> int:
        return self.history.shape[0] - 1

    @property
    def final_m_norm2(self) -> float:
        return float(self.history[-1, 2])


def _build_trace(theta0, eta_fin, hist, snaps, snap_steps, status_code) -> FlowTrace:
    C = theta0._domain_combos
    Cinv = np.linalg.inv(C)

    def back(eta):
        return np.einsum("ji,jab->iab", Cinv, eta)

    limit = theta0.replace_matrices(back(eta_fin))
    samples = tuple(
        (float(hist[s, 1]), theta0.replace_matrices(back(snaps[i])), float(hist[s, 2]))
        for i, s in enumerate(snap_steps)
    )
    names = {
        kernels.STATUS_CONVERGED: "converged",
        kernels.STATUS_MAX_STEPS: "max_steps",
        kernels.STATUS_STAGNATED: "stagnated",
    }
    return FlowTrace(
        samples=samples,
        converged=status_code == kernels.STATUS_CONVERGED,
        limit=limit,
        history=hist,
        status=names[status_code],
    )


def gradient_flow(theta0: Representation, config: FlowConfig | None = None) -> FlowTrace:
    """Descend ||m||^2 with backtracking first-order group steps.

    Each step conjugates the point by I - 4 h m(theta): to first order in h
    this is the Euler step against the gradient, but it stays exactly inside
    the group orbit, so the limit lands in the minimal set of the starting
    orbit rather than drifting to a neighboring one.

    Stops when the moment norm sqrt(tr(m m*)) drops to grad_norm_stop, the
    step budget runs out (trace.converged is False), or no decrease exists
    above step_min (StagnationError carrying the partial trace).
    """
    config = config or FlowConfig()
    eta0 = theta0.orthonormalized()
    G = theta0.G_target
    eta_fin, hist, snaps, snap_steps, status = kernels.flow_loop(
        np.ascontiguousarray(eta0),
        G.matrix,
        G.inverse,
        bool(G.is_identity),
        config.max_steps,
        config.step_init,
        config.step_min,
        config.grad_norm_stop,
        config.backtrack_factor,
    )
    trace = _build_trace(theta0, eta_fin, hist, snaps, snap_steps, status)
    if status == kernels.STATUS_STAGNATED:
        raise StagnationError(
            f"flow stagnated after {trace.n_steps} steps at m_norm2 "
            f"{trace.final_m_norm2:.6e}: no decrease above step_min",
            trace=trace,
        )
    return trace


def stabilizer_algebra(theta: Representation) -> list:
    """Basis of {A : [A, theta(Y)] = 0 for all Y}."""
    return commutant(theta.matrices)


@dataclass(frozen=True, eq=False)
class SelfAdjointReport:
    passed: bool
    max_residual: float
    residuals: tuple
    tol: float


def self_adjointness_check(mats, G: InnerProduct, tol: float = 1e-6) -> SelfAdjointReport:
    """Is the span of ``mats`` closed under the G-adjoint?

    For each A in the list, measures the distance from A* to span(mats) in
    the Frobenius norm.
    """
    mats = [np.asarray(A, dtype=float) for A in mats]
    if not mats:
        return SelfAdjointReport(passed=True, max_residual=0.0, residuals=(), tol=tol)
    n = G.dim
    for A in mats:
        if A.shape != (n, n):
            raise SchemaError("all matrices must match the form dimension")
    V = np.stack([A.ravel() for A in mats], axis=1)
    Q, _ = np.linalg.qr(V)
    residuals = []
    for A in mats:
        a = g_adjoint(A, G).ravel()
        residuals.append(float(np.linalg.norm(a - Q @ (Q.T @ a))))
    max_residual = max(residuals)
    return SelfAdjointReport(
        passed=max_residual <= tol,
        max_residual=max_residual,
        residuals=tuple(residuals),
        tol=tol,
    )


def associated_inner_product(a_parts: np.ndarray) -> InnerProduct:
    """Inner product declaring the rows of ``a_parts`` orthonormal.

    Row i holds the coordinates of the bracket component A_i of the i-th
    orthonormal basis vector of the center-complement, expressed in a basis
    of the derived part.  Dependent rows (two basis vectors sharing a
    bracket component, say) make the decomposition degenerate and raise.
    """
    A = np.asarray(a_parts, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise SchemaError("expected a square matrix of component rows")
    M = A.T  # columns are the A_i
    if np.linalg.cond(M) > COND_LIMIT:
        raise InvariantError(
            "degenerate decomposition: bracket components are linearly dependent"
        )
    Minv = np.linalg.inv(M)
    return InnerProduct(Minv.T @ Minv)


@dataclass(frozen=True, eq=False)
class CompatReport:
    """Outcome of the two-part compatibility test at a minimal point.

    ``normality_residuals`` and ``commutation_residuals`` are per central
    direction: ||[Z, Z*]|| and max_a ||[Z*, theta(Y_a)]||.  ``associated_m_norm``
    is the moment norm of the bracket components re-declared orthonormal.
    """

    minimal: bool
    m_norm: float
    central_indices: tuple
    normality_residuals: tuple
    commutation_residuals: tuple
    associated_m_norm: float
    normal_ok: bool
    commute_ok: bool
    reduced_ok: bool
    tol: float

    @property
    def passed(self) -> bool:
        return self.minimal and self.normal_ok and self.commute_ok and self.reduced_ok


def compatibility_split_check(
    theta: Representation,
    central_indices,
    domain_alg: LieAlgebra | None = None,
    tol: float = CHECK_TOL,
    require_minimal: bool = True,
) -> CompatReport:
    """Split the minimality conditions along center vs bracket directions.

    Condition (i): each central image is normal and its adjoint commutes
    with the whole image of theta.  Condition (ii): the bracket components
    A_i of an orthonormal basis of the center-complement, re-declared
    orthonormal, have vanishing moment map.  Together these are equivalent
    to minimality of theta.

    ``central_indices`` are 0-based domain basis indices spanning the
    center.  When ``domain_alg`` is given, the Y_i are decomposed against
    derived-subalgebra + center (error when those do not span); otherwise
    A_i = Y_i, the orthogonal-sum case.
    """
    k = theta.domain_dim
    central = sorted(set(int(i) for i in central_indices))
    if any(i < 0 or i >= k for i in central):
        raise SchemaError("central index out of range")

    m_norm = moment_norm(theta)
    minimal = m_norm <= MINIMAL_TOL
    if require_minimal and not minimal:
        raise InvariantError(
            f"point is not minimal (moment norm {m_norm:.3e}); "
            "pass require_minimal=False to run the checks anyway"
        )

    # (i) central images: normality and adjoint commutation
    normality = []
    commutation = []
    for c in central:
        Z = theta.matrices[c]
        Zs = theta.target_adjoint(Z)
        normality.append(float(np.linalg.norm(Z @ Zs - Zs @ Z)))
        worst = 0.0
        for a in range(k):
            Ya = theta.matrices[a]
            worst = max(worst, float(np.linalg.norm(Zs @ Ya - Ya @ Zs)))
        commutation.append(worst)

    # (ii) moment map of the bracket components, declared orthonormal
    Gd = theta.G_domain
    if central:
        rows = np.eye(k)[central]
        perp_cols = nullspace(rows @ Gd.matrix)
        Y = gram_schmidt(perp_cols.T, Gd.matrix) if perp_cols.shape[1] else np.zeros((0, k))
    else:
        Y = theta._domain_combos.T

    if domain_alg is not None:
        if domain_alg.dim != k:
            raise SchemaError("domain algebra dimension does not match the representation")
        derived = derived_subalgebra(domain_alg)
        zc = center(domain_alg)
        for c in central:
            if not zc.contains(np.eye(k)[c], tol=1e-9):
                raise InvariantError(
                    f"index {c} does not point into the center of the domain algebra"
                )
        if derived.dim != Y.shape[0]:
            raise InvariantError(
                "domain is not reductive: derived subalgebra does not complement the center"
            )
        basis = np.vstack([derived.vectors, np.eye(k)[central]]) if central else derived.vectors
        a_coords = []
        a_ambient = []
        for y in Y:
            coef, *_ = np.linalg.lstsq(basis.T, y, rcond=None)
            resid = basis.T @ coef - y
            if np.abs(resid).max() > 1e-9 * max(1.0, float(np.abs(y).max())):
                raise InvariantError(
                    "domain does not split as derived subalgebra + center"
                )
            a_coords.append(coef[: derived.dim])
            a_ambient.append(derived.vectors.T @ coef[: derived.dim])
        a_coords = np.array(a_coords)
        a_ambient = np.array(a_ambient)
    else:
        a_coords = np.eye(Y.shape[0])
        a_ambient = Y

    if a_coords.shape[0]:
        associated_inner_product(a_coords)  # validates independence
        mats = np.stack([theta.apply(y) for y in a_ambient])
        matss = np.stack([theta.target_adjoint(M) for M in mats])
        m_assoc = np.einsum("kab,kbc->ac", mats, matss) - np.einsum(
            "kab,kbc->ac", matss, mats
        )
        associated_m_norm = float(np.linalg.norm(m_assoc))
    else:
        associated_m_norm = 0.0

    normal_ok = max(normality, default=0.0) <= tol
    commute_ok = max(commutation, default=0.0) <= tol
    reduced_ok = associated_m_norm <= tol
    return CompatReport(
        minimal=minimal,
        m_norm=m_norm,
        central_indices=tuple(central),
        normality_residuals=tuple(normality),
        commutation_residuals=tuple(commutation),
        associated_m_norm=associated_m_norm,
        normal_ok=normal_ok,
        commute_ok=commute_ok,
        reduced_ok=reduced_ok,
        tol=tol,
    )
