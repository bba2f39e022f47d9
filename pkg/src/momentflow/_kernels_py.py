"""Pure NumPy fallback for the hot kernels.

Mirrors the compiled extension exactly: same signatures, same return
structure, same step-acceptance logic, so the two backends are
interchangeable and comparable in the benchmark.
"""

from __future__ import annotations

import numpy as np

ARMIJO_C1 = 1e-4

STATUS_CONVERGED = 0
STATUS_MAX_STEPS = 1
STATUS_STAGNATED = 2


def _star(mats, G, Ginv, identity):
    t = np.swapaxes(mats, -1, -2)
    if identity:
        return np.ascontiguousarray(t)
    return Ginv @ t @ G


def _moment(eta, G, Ginv, identity):
    es = _star(eta, G, Ginv, identity)
    return np.einsum("kab,kbc->ac", eta, es) - np.einsum("kab,kbc->ac", es, eta)


def _energy(m, G, Ginv, identity):
    ms = _star(m, G, Ginv, identity)
    return float(np.einsum("ab,ba->", m, ms))


def flow_loop(eta0, G, Ginv, identity, max_steps, step_init, step_min,
              grad_norm_stop, backtrack_factor, snap_capacity=72):
    """Backtracking descent on ||m||^2 along the group action.

    Each accepted step conjugates the point by I - 4 h m: first-order in h
    this is the Euler step against the gradient 4 m . eta, but conjugation
    keeps the trajectory exactly inside the group orbit, which is what pins
    the norm of the limit.  Step sizes grow by 1/backtrack_factor after
    each acceptance and shrink by backtrack_factor until the Armijo
    condition holds.

    Returns (eta_final, history, snapshots, snapshot_steps, status) where
    history rows are (step, t, m_norm2), snapshots holds the point at a
    doubling subsequence of accepted steps (plus first and last), and
    snapshot_steps gives the history row of each snapshot.
    """
    eta = np.array(eta0, dtype=float)
    n = eta.shape[1]
    eye = np.eye(n)
    m = _moment(eta, G, Ginv, identity)
    f = _energy(m, G, Ginv, identity)

    hist = [(0.0, 0.0, f)]
    snaps = [eta.copy()]
    snap_steps = [0]
    next_snap = 1

    stop2 = grad_norm_stop * grad_norm_stop
    h = step_init
    t = 0.0
    step = 0
    status = STATUS_MAX_STEPS

    while True:
        if f <= stop2:
            status = STATUS_CONVERGED
            break
        if step >= max_steps:
            status = STATUS_MAX_STEPS
            break
        grad = 4.0 * (m @ eta - eta @ m)
        gstar = _star(grad, G, Ginv, identity)
        g2 = float(np.einsum("kab,kba->", grad, gstar))
        if g2 <= 0.0 or not np.isfinite(g2):
            status = STATUS_STAGNATED
            break
        accepted = False
        while h >= step_min:
            C = eye - (4.0 * h) * m
            try:
                Cinv = np.linalg.inv(C)
            except np.linalg.LinAlgError:
                h *= backtrack_factor
                continue
            trial = C @ eta @ Cinv
            mt = _moment(trial, G, Ginv, identity)
            ft = _energy(mt, G, Ginv, identity)
            if np.isfinite(ft) and ft < f - ARMIJO_C1 * h * g2:
                accepted = True
                break
            h *= backtrack_factor
        if not accepted:
            status = STATUS_STAGNATED
            break
        eta = trial
        m = mt
        f = ft
        t += h
        step += 1
        hist.append((float(step), t, f))
        if step == next_snap and len(snaps) < snap_capacity - 1:
            snaps.append(eta.copy())
            snap_steps.append(step)
            next_snap *= 2
        h /= backtrack_factor

    if snap_steps[-1] != step:
        snaps.append(eta.copy())
        snap_steps.append(step)

    return (eta, np.array(hist), np.array(snaps),
            np.array(snap_steps, dtype=np.int64), status)


def milnor_scan(l1, l2, l3, canonicalize=True):
    """Diagonal Ricci over the product grid of frame constants.

    Returns (rows, counterexample_count): rows has columns
    (lambda1, lambda2, lambda3, ric1, ric2, ric3, argmin) with argmin the
    1-based index of the first minimal entry; a counterexample is a point
    where ric1 is the strict minimum.
    """
    L1, L2, L3 = np.meshgrid(np.asarray(l1, dtype=float),
                             np.asarray(l2, dtype=float),
                             np.asarray(l3, dtype=float), indexing="ij")
    a = L1.ravel()
    b = L2.ravel()
    c = L3.ravel()
    if canonicalize:
        swap = b > c
        b, c = np.where(swap, c, b), np.where(swap, b, c)
    mu1 = 0.5 * (-a + b + c)
    mu2 = 0.5 * (a - b + c)
    mu3 = 0.5 * (a + b - c)
    r1 = 2.0 * mu2 * mu3
    r2 = 2.0 * mu3 * mu1
    r3 = 2.0 * mu1 * mu2
    R = np.stack([r1, r2, r3], axis=1)
    argmin = np.argmin(R, axis=1) + 1
    counter = int(np.count_nonzero((r1 < r2) & (r1 < r3)))
    rows = np.column_stack([a, b, c, r1, r2, r3, argmin.astype(float)])
    return rows, counter
