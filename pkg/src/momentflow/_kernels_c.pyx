# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: gradient-flow inner loop and Milnor grid scan.

Logic mirrors _kernels_py exactly; only the execution strategy differs
(tight C loops over typed memoryviews instead of vectorized NumPy).
"""

import numpy as np

from libc.math cimport isfinite

cdef double ARMIJO_C1 = 1e-4

STATUS_CONVERGED = 0
STATUS_MAX_STEPS = 1
STATUS_STAGNATED = 2


cdef inline void _transpose(const double[:, :] a, double[:, :] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            out[i, j] = a[j, i]


cdef inline void _matmul(const double[:, :] a, const double[:, :] b, double[:, :] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, l
    cdef double acc
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for l in range(n):
                acc += a[i, l] * b[l, j]
            out[i, j] = acc


cdef void _star_into(const double[:, :] a, bint identity, const double[:, :] G,
                     const double[:, :] Ginv, double[:, :] w1, double[:, :] w2,
                     double[:, :] out, Py_ssize_t n) noexcept nogil:
    # out = Ginv a^T G, or the plain transpose for the identity form
    if identity:
        _transpose(a, out, n)
    else:
        _transpose(a, w1, n)
        _matmul(w1, G, w2, n)
        _matmul(Ginv, w2, out, n)


cdef void _moment_into(const double[:, :, :] eta, bint identity, const double[:, :] G,
                       const double[:, :] Ginv, double[:, :] w1, double[:, :] w2,
                       double[:, :] s, double[:, :] p, double[:, :] m,
                       Py_ssize_t k, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t j, a, b
    for a in range(n):
        for b in range(n):
            m[a, b] = 0.0
    for j in range(k):
        _star_into(eta[j], identity, G, Ginv, w1, w2, s, n)
        _matmul(eta[j], s, p, n)
        for a in range(n):
            for b in range(n):
                m[a, b] += p[a, b]
        _matmul(s, eta[j], p, n)
        for a in range(n):
            for b in range(n):
                m[a, b] -= p[a, b]


cdef double _energy(const double[:, :] m, bint identity, const double[:, :] G,
                    const double[:, :] Ginv, double[:, :] w1, double[:, :] w2,
                    double[:, :] s, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t a, b
    cdef double f = 0.0
    _star_into(m, identity, G, Ginv, w1, w2, s, n)
    for a in range(n):
        for b in range(n):
            f += m[a, b] * s[b, a]
    return f


cdef bint _invert(const double[:, :] a, double[:, :] out, double[:, :] work,
                  Py_ssize_t n) noexcept nogil:
    # Gauss-Jordan with partial pivoting; False on a (near-)singular pivot
    cdef Py_ssize_t i, j, p, piv
    cdef double best, tmp, factor
    for i in range(n):
        for j in range(n):
            work[i, j] = a[i, j]
            out[i, j] = 1.0 if i == j else 0.0
    for p in range(n):
        piv = p
        best = work[p, p] if work[p, p] >= 0.0 else -work[p, p]
        for i in range(p + 1, n):
            tmp = work[i, p] if work[i, p] >= 0.0 else -work[i, p]
            if tmp > best:
                best = tmp
                piv = i
        if best <= 1e-300:
            return False
        if piv != p:
            for j in range(n):
                tmp = work[p, j]
                work[p, j] = work[piv, j]
                work[piv, j] = tmp
                tmp = out[p, j]
                out[p, j] = out[piv, j]
                out[piv, j] = tmp
        factor = work[p, p]
        for j in range(n):
            work[p, j] /= factor
            out[p, j] /= factor
        for i in range(n):
            if i != p:
                factor = work[i, p]
                if factor != 0.0:
                    for j in range(n):
                        work[i, j] -= factor * work[p, j]
                        out[i, j] -= factor * out[p, j]
    return True


def flow_loop(eta0, G, Ginv, bint identity, long max_steps, double step_init,
              double step_min, double grad_norm_stop, double backtrack_factor,
              long snap_capacity=72):
    """See _kernels_py.flow_loop; identical contract and step rule."""
    eta_np = np.array(eta0, dtype=np.float64, order="C")
    cdef double[:, :, :] eta = eta_np
    cdef Py_ssize_t k = eta.shape[0]
    cdef Py_ssize_t n = eta.shape[1]

    # np.array copies, so frozen inputs still yield writable buffers
    G_np = np.array(G, dtype=np.float64, order="C")
    Ginv_np = np.array(Ginv, dtype=np.float64, order="C")
    cdef double[:, :] Gv = G_np
    cdef double[:, :] Ginvv = Ginv_np

    trial_np = np.empty_like(eta_np)
    grad_np = np.empty_like(eta_np)
    cdef double[:, :, :] trial = trial_np
    cdef double[:, :, :] grad = grad_np

    m_np = np.empty((n, n))
    mt_np = np.empty((n, n))
    w1_np = np.empty((n, n))
    w2_np = np.empty((n, n))
    s_np = np.empty((n, n))
    p_np = np.empty((n, n))
    C_np = np.empty((n, n))
    Cinv_np = np.empty((n, n))
    winv_np = np.empty((n, n))
    cdef double[:, :] m = m_np
    cdef double[:, :] mt = mt_np
    cdef double[:, :] w1 = w1_np
    cdef double[:, :] w2 = w2_np
    cdef double[:, :] s = s_np
    cdef double[:, :] p = p_np
    cdef double[:, :] C = C_np
    cdef double[:, :] Cinv = Cinv_np
    cdef double[:, :] winv = winv_np

    hist_np = np.empty((max_steps + 1, 3))
    cdef double[:, :] hist = hist_np
    snaps_np = np.empty((snap_capacity, k, n, n))
    snap_steps_np = np.empty(snap_capacity, dtype=np.int64)
    cdef long[:] snap_steps = snap_steps_np

    cdef double stop2 = grad_norm_stop * grad_norm_stop
    cdef double h = step_init
    cdef double t = 0.0
    cdef double f, ft, g2
    cdef long step = 0
    cdef long ns = 1
    cdef long next_snap = 1
    cdef int status = STATUS_MAX_STEPS
    cdef Py_ssize_t j, a, b
    cdef bint accepted

    _moment_into(eta, identity, Gv, Ginvv, w1, w2, s, p, m, k, n)
    f = _energy(m, identity, Gv, Ginvv, w1, w2, s, n)
    hist[0, 0] = 0.0
    hist[0, 1] = 0.0
    hist[0, 2] = f
    snaps_np[0] = eta_np
    snap_steps[0] = 0

    while True:
        if f <= stop2:
            status = STATUS_CONVERGED
            break
        if step >= max_steps:
            status = STATUS_MAX_STEPS
            break
        g2 = 0.0
        for j in range(k):
            _matmul(m, eta[j], p, n)
            for a in range(n):
                for b in range(n):
                    grad[j, a, b] = 4.0 * p[a, b]
            _matmul(eta[j], m, p, n)
            for a in range(n):
                for b in range(n):
                    grad[j, a, b] -= 4.0 * p[a, b]
        for j in range(k):
            _star_into(grad[j], identity, Gv, Ginvv, w1, w2, s, n)
            for a in range(n):
                for b in range(n):
                    g2 += grad[j, a, b] * s[b, a]
        if g2 <= 0.0 or not isfinite(g2):
            status = STATUS_STAGNATED
            break
        accepted = False
        while h >= step_min:
            for a in range(n):
                for b in range(n):
                    C[a, b] = (1.0 if a == b else 0.0) - 4.0 * h * m[a, b]
            if not _invert(C, Cinv, winv, n):
                h = h * backtrack_factor
                continue
            for j in range(k):
                _matmul(C, eta[j], p, n)
                _matmul(p, Cinv, trial[j], n)
            _moment_into(trial, identity, Gv, Ginvv, w1, w2, s, p, mt, k, n)
            ft = _energy(mt, identity, Gv, Ginvv, w1, w2, s, n)
            if isfinite(ft) and ft < f - ARMIJO_C1 * h * g2:
                accepted = True
                break
            h = h * backtrack_factor
        if not accepted:
            status = STATUS_STAGNATED
            break
        for j in range(k):
            for a in range(n):
                for b in range(n):
                    eta[j, a, b] = trial[j, a, b]
        for a in range(n):
            for b in range(n):
                m[a, b] = mt[a, b]
        f = ft
        t = t + h
        step = step + 1
        hist[step, 0] = step
        hist[step, 1] = t
        hist[step, 2] = f
        if step == next_snap and ns < snap_capacity - 1:
            snaps_np[ns] = eta_np
            snap_steps[ns] = step
            ns += 1
            next_snap *= 2
        h = h / backtrack_factor

    if snap_steps[ns - 1] != step:
        snaps_np[ns] = eta_np
        snap_steps[ns] = step
        ns += 1

    return (eta_np, hist_np[: step + 1].copy(), snaps_np[:ns].copy(),
            snap_steps_np[:ns].copy(), status)


def milnor_scan(l1, l2, l3, bint canonicalize=True):
    """See _kernels_py.milnor_scan; identical contract."""
    l1_np = np.array(l1, dtype=np.float64, order="C")
    l2_np = np.array(l2, dtype=np.float64, order="C")
    l3_np = np.array(l3, dtype=np.float64, order="C")
    cdef double[:] v1 = l1_np
    cdef double[:] v2 = l2_np
    cdef double[:] v3 = l3_np
    cdef Py_ssize_t n1 = v1.shape[0]
    cdef Py_ssize_t n2 = v2.shape[0]
    cdef Py_ssize_t n3 = v3.shape[0]
    rows_np = np.empty((n1 * n2 * n3, 7))
    cdef double[:, :] rows = rows_np
    cdef Py_ssize_t i, j, q, r = 0
    cdef double a, b, c, tmp, mu1, mu2, mu3, r1, r2, r3, best
    cdef long counter = 0
    cdef int am
    for i in range(n1):
        a = v1[i]
        for j in range(n2):
            for q in range(n3):
                b = v2[j]
                c = v3[q]
                if canonicalize and b > c:
                    tmp = b
                    b = c
                    c = tmp
                mu1 = 0.5 * (-a + b + c)
                mu2 = 0.5 * (a - b + c)
                mu3 = 0.5 * (a + b - c)
                r1 = 2.0 * mu2 * mu3
                r2 = 2.0 * mu3 * mu1
                r3 = 2.0 * mu1 * mu2
                am = 1
                best = r1
                if r2 < best:
                    am = 2
                    best = r2
                if r3 < best:
                    am = 3
                    best = r3
                if r1 < r2 and r1 < r3:
                    counter += 1
                rows[r, 0] = a
                rows[r, 1] = b
                rows[r, 2] = c
                rows[r, 3] = r1
                rows[r, 4] = r2
                rows[r, 5] = r3
                rows[r, 6] = am
                r += 1
    return rows_np, int(counter)
