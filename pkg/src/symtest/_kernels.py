"""Hot row-batched kernels with a numba backend and a pure-numpy fallback.

All kernels take a 2-D float64 array whose rows are independent samples
(already sorted ascending along axis 1 where noted) and return one result
per row. The backend is chosen once at import: numba when importable and
``SYMTEST_DISABLE_NUMBA`` is unset, numpy otherwise. Both backends are kept
importable as :data:`numpy_backend` and :data:`numba_backend` so they can be
compared directly.

Order-statistics closed form used throughout, for sorted ``x_1..x_n``::

    delta = sum_i c_i x_i,
    c_i = (n+4)/(2n(n-2)) - 3 (i(n+1-i) - 1)/(n(n-1)(n-2))

The coefficients sum to zero, so rows are centred on their middle order
statistic before the dot product.

EL status codes: 0 converged, 1 hull violation, 2 no convergence. The EL
iteration stops once ``|mean q| <= 1e-12 * mean |q|`` with
``q = v / (1 + lam v)``, a test that does not depend on the scale of ``v``.
"""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np

from ._config import numba_disabled

EL_OK = 0
EL_HULL = 1
EL_NOCONV = 2

EL_MAXITER = 200
EL_RTOL = 1e-12
EL_MARGIN = 1e-10
EL_LAM_CAP = np.finfo(np.float64).max  # replaces an overflowed bracket end


def delta_coefficients(n: int) -> np.ndarray:
    i = np.arange(1, n + 1, dtype=np.float64)
    a = (n + 4.0) / (2.0 * n * (n - 2.0))
    b = 3.0 / (n * (n - 1.0) * (n - 2.0))
    return a - b * (i * (n + 1.0 - i) - 1.0)


# -- numpy backend -----------------------------------------------------------


def _np_delta_rows(xs: np.ndarray) -> np.ndarray:
    n = xs.shape[1]
    centred = xs - xs[:, n // 2 : n // 2 + 1]
    return centred @ delta_coefficients(n)


def _np_pseudo_rows(xs: np.ndarray) -> np.ndarray:
    r, n = xs.shape
    m = n - 1
    x = xs - xs[:, n // 2 : n // 2 + 1]
    j = np.arange(1, n + 1, dtype=np.float64)
    x1 = x * j
    x2 = x1 * j
    c0, c1, c2 = np.cumsum(x, axis=1), np.cumsum(x1, axis=1), np.cumsum(x2, axis=1)
    s0, s1, s2 = c0[:, -1:], c1[:, -1:], c2[:, -1:]
    # strictly-below (P) and strictly-above (Q) partial sums of x, j*x, j^2*x
    p0, p1, p2 = c0 - x, c1 - x1, c2 - x2
    q0, q1, q2 = s0 - c0, s1 - c1, s2 - c2
    # after removing x_i, ranks above i drop by one: weights j(n-j)-1 below, (n+2)j-j^2-(n+2) above
    t = n * p1 - p2 - p0 + (n + 2.0) * q1 - q2 - (n + 2.0) * q0
    am = (m + 4.0) / (2.0 * m * (m - 2.0))
    bm = 3.0 / (m * (m - 1.0) * (m - 2.0))
    loo = am * (s0 - x) - bm * t
    full = x @ delta_coefficients(n)
    return n * full[:, None] - (n - 1.0) * loo


def _np_el_rows(v: np.ndarray):
    r, m = v.shape
    vmin = v.min(axis=1)
    vmax = v.max(axis=1)
    hull_ok = (vmin < 0) & (vmax > 0)
    lam = np.zeros(r)
    iters = np.zeros(r, dtype=np.int64)
    status = np.where(hull_ok, EL_NOCONV, EL_HULL).astype(np.int64)
    if not hull_ok.any():
        return np.full(r, np.nan), np.full(r, np.nan), iters, status

    idx = np.flatnonzero(hull_ok)
    # solve for the multiplier of v / max|v|; -2 log R is unchanged
    scale = np.maximum(-vmin[idx], vmax[idx])
    vv = v[idx] / scale[:, None]
    with np.errstate(divide="ignore", over="ignore"):
        lo = np.maximum(-1.0 / (vmax[idx] / scale), -EL_LAM_CAP)
        hi = np.minimum(-1.0 / (vmin[idx] / scale), EL_LAM_CAP)
    a = lo * (1.0 - EL_MARGIN)
    b = hi * (1.0 - EL_MARGIN)
    lm = np.zeros(idx.size)
    dx_old = b - a
    it = np.zeros(idx.size, dtype=np.int64)
    done = np.zeros(idx.size, dtype=bool)
    for k in range(1, EL_MAXITER + 1):
        act = ~done
        if not act.any():
            break
        va = vv[act]
        la = lm[act]
        den = 1.0 + la[:, None] * va
        q = va / den
        res = q.mean(axis=1)
        deriv = -(q * q).mean(axis=1)
        it[act] = k
        conv = np.abs(res) <= EL_RTOL * np.abs(q).mean(axis=1)
        aa, bb = a[act], b[act]
        aa = np.where(res > 0, la, aa)
        bb = np.where(res > 0, bb, la)
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = -res / deriv  # deriv == 0 only on rows that converge or bisect
        step = la + dx
        # bisect when Newton leaves the bracket or fails to halve the previous step
        bad = ~((step > aa) & (step < bb)) | (np.abs(dx) > 0.5 * dx_old[act])
        step = np.where(bad, 0.5 * (aa + bb), step)
        dx_old[act] = np.abs(step - la)
        stalled = (step == la) | (bb - aa <= 4.0 * np.finfo(float).eps * np.maximum(np.abs(aa), np.abs(bb)))
        finished = conv | stalled
        a[act], b[act] = aa, bb
        lm[act] = np.where(finished, la, step)
        act_idx = np.flatnonzero(act)
        done[act_idx[finished]] = True
    lam[idx] = lm / scale
    iters[idx] = it
    status[idx] = np.where(done, EL_OK, EL_NOCONV)
    half = np.full(r, np.nan)
    half[idx] = np.log1p(lm[:, None] * vv).sum(axis=1)
    lam[~hull_ok] = np.nan
    return lam, half, iters, status


numpy_backend = SimpleNamespace(
    name="numpy",
    delta_rows=_np_delta_rows,
    pseudo_rows=_np_pseudo_rows,
    el_rows=_np_el_rows,
)


# -- numba backend -----------------------------------------------------------


def _build_numba_backend():
    from numba import njit

    @njit(cache=True, nogil=True)
    def _coefficients(n):
        c = np.empty(n)
        a = (n + 4.0) / (2.0 * n * (n - 2.0))
        b = 3.0 / (n * (n - 1.0) * (n - 2.0))
        for k in range(n):
            i = k + 1.0
            c[k] = a - b * (i * (n + 1.0 - i) - 1.0)
        return c

    @njit(cache=True, nogil=True)
    def _dot_neumaier(c, x, ref):
        s = 0.0
        comp = 0.0
        for k in range(x.shape[0]):
            term = c[k] * (x[k] - ref)
            t = s + term
            if abs(s) >= abs(term):
                comp += (s - t) + term
            else:
                comp += (term - t) + s
            s = t
        return s + comp

    @njit(cache=True, nogil=True)
    def delta_rows(xs):
        r, n = xs.shape
        c = _coefficients(n)
        out = np.empty(r)
        for row in range(r):
            out[row] = _dot_neumaier(c, xs[row], xs[row, n // 2])
        return out

    @njit(cache=True, nogil=True)
    def pseudo_rows(xs):
        r, n = xs.shape
        m = n - 1
        c = _coefficients(n)
        am = (m + 4.0) / (2.0 * m * (m - 2.0))
        bm = 3.0 / (m * (m - 1.0) * (m - 2.0))
        out = np.empty((r, n))
        x = np.empty(n)
        for row in range(r):
            ref = xs[row, n // 2]
            s0 = 0.0
            s1 = 0.0
            s2 = 0.0
            for k in range(n):
                xk = xs[row, k] - ref
                x[k] = xk
                j = k + 1.0
                s0 += xk
                s1 += j * xk
                s2 += j * j * xk
            full = _dot_neumaier(c, x, 0.0)
            p0 = 0.0
            p1 = 0.0
            p2 = 0.0
            for k in range(n):
                j = k + 1.0
                xk = x[k]
                q0 = s0 - p0 - xk
                q1 = s1 - p1 - j * xk
                q2 = s2 - p2 - j * j * xk
                t = n * p1 - p2 - p0 + (n + 2.0) * q1 - q2 - (n + 2.0) * q0
                loo = am * (s0 - xk) - bm * t
                out[row, k] = n * full - (n - 1.0) * loo
                p0 += xk
                p1 += j * xk
                p2 += j * j * xk
        return out

    @njit(cache=True, nogil=True, error_model="numpy")
    def _el_one(v):
        m = v.shape[0]
        vmin = v[0]
        vmax = v[0]
        for k in range(1, m):
            if v[k] < vmin:
                vmin = v[k]
            if v[k] > vmax:
                vmax = v[k]
        if not (vmin < 0.0 and vmax > 0.0):
            return np.nan, np.nan, 0, EL_HULL
        scale = max(-vmin, vmax)
        v = v / scale
        lo = max(-1.0 / (vmax / scale), -EL_LAM_CAP)
        hi = min(-1.0 / (vmin / scale), EL_LAM_CAP)
        a = lo * (1.0 - EL_MARGIN)
        b = hi * (1.0 - EL_MARGIN)
        eps4 = 4.0 * np.finfo(np.float64).eps
        lam = 0.0
        dx_old = b - a
        status = EL_NOCONV
        it = 0
        for k in range(1, EL_MAXITER + 1):
            it = k
            res = 0.0
            deriv = 0.0
            mag = 0.0
            for i in range(m):
                q = v[i] / (1.0 + lam * v[i])
                res += q
                mag += abs(q)
                deriv -= q * q
            res /= m
            deriv /= m
            if abs(res) <= EL_RTOL * mag / m:
                status = EL_OK
                break
            if res > 0.0:
                a = lam
            else:
                b = lam
            dx = -res / deriv
            step = lam + dx
            if not (step > a and step < b) or abs(dx) > 0.5 * dx_old:
                step = 0.5 * (a + b)
            dx_old = abs(step - lam)
            if step == lam or b - a <= eps4 * max(abs(a), abs(b)):
                status = EL_OK
                break
            lam = step
        half = 0.0
        for i in range(m):
            half += np.log1p(lam * v[i])
        return lam / scale, half, it, status

    @njit(cache=True, nogil=True)
    def el_rows(v):
        r = v.shape[0]
        lam = np.empty(r)
        half = np.empty(r)
        iters = np.empty(r, dtype=np.int64)
        status = np.empty(r, dtype=np.int64)
        for row in range(r):
            lam[row], half[row], iters[row], status[row] = _el_one(v[row])
        return lam, half, iters, status

    return SimpleNamespace(
        name="numba", delta_rows=delta_rows, pseudo_rows=pseudo_rows, el_rows=el_rows
    )


try:
    numba_backend = _build_numba_backend()
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

backend = numpy_backend if (numba_backend is None or numba_disabled()) else numba_backend


def delta_rows(xs: np.ndarray) -> np.ndarray:
    """Order-statistics delta-hat for each sorted row."""
    return backend.delta_rows(np.ascontiguousarray(xs, dtype=np.float64))


def pseudo_rows(xs: np.ndarray) -> np.ndarray:
    """Jackknife pseudo-values (in sorted position order) for each sorted row."""
    return backend.pseudo_rows(np.ascontiguousarray(xs, dtype=np.float64))


def el_rows(v: np.ndarray):
    """Solve the EL multiplier per row.

    Returns ``(lam, half, iters, status)`` where ``half = sum(log1p(lam * v))``
    so that ``-2 log R = 2 * half``.
    """
    return backend.el_rows(np.ascontiguousarray(v, dtype=np.float64))
