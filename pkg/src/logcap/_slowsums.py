"""Pure-NumPy bulk energy sums: the fallback backend.

Mirrors the compiled `_fastsums` extension exactly (same dispatch, same
branch thresholds); the two are differential-tested against each other and
against the scalar reference in `pairkernel`.  The point-charge base term is
evaluated for every pair via a masked matrix product, and the rare pairs that
need a closed-form correction (separation ratio above the policy threshold,
overlap, shared centers) are gathered and fixed up vectorized.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import GeometryError, InvalidArgumentError, PolicyError
from .logdomain import LN2
from .pairkernel import (
    ERROR_CAP,
    EXACT_LOG_RANGE,
    MODE_AUTO,
    MODE_EXACT,
    MODE_POINT_CHARGE,
    OVERLAP_LOG_RANGE,
    S_AT_ONE,
    _PHI_COEFFS,
    _S_COEFFS,
)

BACKEND_NAME = "numpy"

_CHUNK_CELLS = 4_000_000


def _as_f64(a, name):
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional")
    return arr


def s_vec(x: np.ndarray) -> np.ndarray:
    """Vectorized S(x) on [0, 1]."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x < 0.5
    if small.any():
        y = x[small] ** 2
        acc = np.zeros_like(y)
        for c in reversed(_S_COEFFS):
            acc = (acc + c) * y
        out[small] = acc * y
    big = ~small
    if big.any():
        xb = x[big]
        with np.errstate(invalid="ignore", divide="ignore"):
            val = (
                -0.5 * (1.0 - xb) ** 2 * np.log1p(-xb)
                - 0.5 * (1.0 + xb) ** 2 * np.log1p(xb)
                + 1.5 * xb * xb
            )
        val[xb == 1.0] = S_AT_ONE
        out[big] = val
    return out


def _s_derivative_vec(x: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore", divide="ignore"):
        val = (1.0 - x) * np.log1p(-x) - (1.0 + x) * np.log1p(x) + 2.0 * x
    val[x == 1.0] = 2.0 - 2.0 * LN2
    return val


def mutual_correction_vec(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized (S(x_s) - S(x_t)) / (u v) for disjoint closures."""
    xs = 0.5 * (u + v)
    xt = 0.5 * np.abs(u - v)
    a = xs * xs
    b = xt * xt
    out = np.empty_like(xs)
    small = xs < 0.5
    if small.any():
        aa, bb = a[small], b[small]
        qk = aa + bb
        bk = bb.copy()
        tot = np.zeros_like(aa)
        for c in _S_COEFFS:
            tot += c * qk
            bk *= bb
            qk = aa * qk + bk
        out[small] = tot
    big = ~small
    if big.any():
        ab, bbig = a[big], b[big]
        diff = ab - bbig
        num = s_vec(xs[big]) - s_vec(xt[big])
        with np.errstate(divide="ignore", invalid="ignore"):
            res = num / diff
        degenerate = diff == 0.0
        if degenerate.any():
            xsb, xtb = xs[big], xt[big]
            res[degenerate] = _s_derivative_vec(xsb[degenerate]) / (
                xsb[degenerate] + xtb[degenerate]
            )
        out[big] = res
    return out


def _equal_length_correction_vec(x: np.ndarray) -> np.ndarray:
    """S(x)/x**2 for the equal-length case (x = l/d), series below 1/2."""
    out = np.empty_like(x)
    small = x < 0.5
    if small.any():
        y = x[small] ** 2
        acc = np.zeros_like(y)
        for c in reversed(_S_COEFFS):
            acc = (acc + c) * y
        out[small] = acc
    big = ~small
    if big.any():
        xb = x[big]
        out[big] = s_vec(xb) / (xb * xb)
    return out


def phi_vec(beta: np.ndarray) -> np.ndarray:
    beta = np.asarray(beta, dtype=np.float64)
    out = np.empty_like(beta)
    small = beta < 0.5
    if small.any():
        y = beta[small] ** 2
        acc = np.zeros_like(y)
        for c in reversed(_PHI_COEFFS):
            acc = (acc + c) * y
        out[small] = 0.5 + acc
    big = ~small
    if big.any():
        bb = beta[big]
        with np.errstate(divide="ignore", invalid="ignore"):
            val = (
                (1.0 + bb) ** 2 * np.log1p(bb) - (1.0 - bb) ** 2 * np.log1p(-bb)
            ) / (4.0 * bb)
        val[bb == 1.0] = LN2
        out[big] = val
    return out


def concentric_vec(ll1: np.ndarray, ll2: np.ndarray) -> np.ndarray:
    ll_big = np.maximum(ll1, ll2)
    beta = np.exp(-np.abs(ll1 - ll2))
    return -ll_big + LN2 + 1.5 - phi_vec(beta)


def _g_vec(t: np.ndarray) -> np.ndarray:
    a = np.abs(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = 0.5 * a * a * np.log(a) - 0.75 * a * a
    val[a == 0.0] = 0.0
    return val


def overlap_vec(d: np.ndarray, ll1: np.ndarray, ll2: np.ndarray) -> np.ndarray:
    if np.minimum(ll1, ll2).min() < -OVERLAP_LOG_RANGE:
        raise PolicyError(
            "overlapping pieces below length exp(-30) are outside the "
            "closed-form overlap range"
        )
    l1 = np.exp(ll1)
    l2 = np.exp(ll2)
    s = 0.5 * (l1 + l2)
    t = 0.5 * np.abs(l1 - l2)
    raw = _g_vec(d + s) + _g_vec(d - s) - _g_vec(d + t) - _g_vec(d - t)
    return -raw / (l1 * l2)


def _delta_vec(log_rho: np.ndarray) -> np.ndarray:
    """Certified point-charge error from log(rho); -inf maps to 0."""
    rho = np.exp(log_rho)
    with np.errstate(divide="ignore"):
        delta = -np.log1p(-rho)
    return np.minimum(ERROR_CAP, delta)


def _bilinear(c1, ll1, w1, c2, ll2, w2, mode, rho_threshold, same_arrays):
    n1 = len(c1)
    n2 = len(c2)
    if mode == MODE_EXACT:
        hi = 0.0
        if n1:
            hi = max(hi, float(np.abs(ll1).max()))
        if n2:
            hi = max(hi, float(np.abs(ll2).max()))
        if hi > EXACT_LOG_RANGE:
            raise PolicyError(
                f"Exact policy admits |log length| <= {EXACT_LOG_RANGE:g}; "
                "use Auto for extreme scales"
            )
    thr_log = math.log(rho_threshold)
    total = 0.0
    err = 0.0
    n_conc = 0
    n_over = 0
    chunk = max(1, _CHUNK_CELLS // max(1, n2))
    cols = np.arange(n2)
    for i0 in range(0, n1, chunk):
        i1 = min(n1, i0 + chunk)
        d = np.abs(c1[i0:i1, None] - c2[None, :])
        if same_arrays:
            self_mask = cols[None, :] == np.arange(i0, i1)[:, None]
        else:
            self_mask = np.zeros(d.shape, dtype=bool)
        conc = (d == 0.0) & ~self_mask
        with np.errstate(divide="ignore"):
            ln_d = np.log(d)
        log_rho = np.logaddexp(ll1[i0:i1, None], ll2[None, :]) - LN2 - ln_d
        if mode == MODE_POINT_CHARGE:
            if conc.any():
                raise PolicyError("point-charge policy cannot evaluate co-centered pieces")
            lr_m = np.where(self_mask, -np.inf, log_rho)
            if np.any(lr_m >= 0.0):
                raise GeometryError("rho >= 1 somewhere: closures intersect")
            pc = np.where(self_mask, 0.0, -ln_d)
            total += float(w1[i0:i1] @ pc @ w2)
            err += float(w1[i0:i1] @ _delta_vec(lr_m) @ w2)
            continue
        skip = conc | self_mask
        if mode == MODE_EXACT:
            need = ~skip
        else:
            need = (log_rho >= thr_log) & ~skip
        pc = np.where(skip, 0.0, -ln_d)
        log_rho_pc = np.where(need | skip, -np.inf, log_rho)
        total += float(w1[i0:i1] @ pc @ w2)
        err += float(w1[i0:i1] @ _delta_vec(log_rho_pc) @ w2)
        if need.any():
            ii, jj = np.nonzero(need)
            dd = d[ii, jj]
            L1 = ll1[i0 + ii]
            L2 = ll2[jj]
            ww = w1[i0 + ii] * w2[jj]
            lr = log_rho[ii, jj]
            over = lr > 0.0
            if over.any():
                n_over += int(over.sum())
                corr_o = overlap_vec(dd[over], L1[over], L2[over]) + np.log(dd[over])
                total += float(ww[over] @ corr_o)
            dis = ~over
            if dis.any():
                ln_dd = np.log(dd[dis])
                u = np.exp(L1[dis] - ln_dd)
                v = np.exp(L2[dis] - ln_dd)
                total += float(ww[dis] @ mutual_correction_vec(u, v))
        if conc.any():
            ii, jj = np.nonzero(conc)
            n_conc += len(ii)
            vals = concentric_vec(ll1[i0 + ii], ll2[jj])
            total += float((w1[i0 + ii] * w2[jj]) @ vals)
    return total, err, n_conc, n_over


def mutual_sum(c1, ll1, w1, c2, ll2, w2, mode=MODE_AUTO, rho_threshold=1e-8):
    """sum_{i,j} w1_i w2_j M(piece_i, piece_j) plus certified error and counts.

    Returns (value, certified_error, n_concentric, n_overlap).
    """
    c1 = _as_f64(c1, "c1")
    ll1 = _as_f64(ll1, "ll1")
    w1 = _as_f64(w1, "w1")
    c2 = _as_f64(c2, "c2")
    ll2 = _as_f64(ll2, "ll2")
    w2 = _as_f64(w2, "w2")
    if not (len(c1) == len(ll1) == len(w1)) or not (len(c2) == len(ll2) == len(w2)):
        raise InvalidArgumentError("mismatched array lengths")
    return _bilinear(c1, ll1, w1, c2, ll2, w2, mode, rho_threshold, same_arrays=False)


def cross_pairs_sum(c, ll, w, mode=MODE_AUTO, rho_threshold=1e-8):
    """sum_{i != j} w_i w_j M(piece_i, piece_j) within one measure (ordered pairs)."""
    c = _as_f64(c, "c")
    ll = _as_f64(ll, "ll")
    w = _as_f64(w, "w")
    if not (len(c) == len(ll) == len(w)):
        raise InvalidArgumentError("mismatched array lengths")
    return _bilinear(c, ll, w, c, ll, w, mode, rho_threshold, same_arrays=True)


def uniform_cross_fast(n, ll, mode=MODE_AUTO, rho_threshold=1e-8):
    """Cross sum for the uniform level: sum_{i != j} M(d = |i-j|/n) in O(n).

    Pieces have equal length exp(ll) and unit weight; returns (value, err)
    where value = 2 sum_{k=1}^{n-1} (n-k) M(k/n).  The caller normalizes.
    """
    if n < 1:
        raise InvalidArgumentError(f"need n >= 1, got {n}")
    if mode == MODE_EXACT and abs(ll) > EXACT_LOG_RANGE:
        raise PolicyError(
            f"Exact policy admits |log length| <= {EXACT_LOG_RANGE:g}; "
            "use Auto for extreme scales"
        )
    if n == 1:
        return 0.0, 0.0
    k = np.arange(1, n, dtype=np.float64)
    ln_d = np.log(k) - math.log(n)
    log_rho = ll - ln_d
    if np.any(log_rho >= 0.0):
        raise GeometryError("level pieces touch or overlap: need n * length < 1")
    weights = 2.0 * (n - k)
    base = -ln_d
    if mode == MODE_POINT_CHARGE:
        value = float(weights @ base)
        err = float(weights @ _delta_vec(log_rho))
        return value, err
    if mode == MODE_EXACT:
        need = np.ones(len(k), dtype=bool)
    else:
        need = log_rho >= math.log(rho_threshold)
    value = float(weights @ base)
    err = float(weights[~need] @ _delta_vec(log_rho[~need]))
    if need.any():
        x = np.exp(log_rho[need])
        value += float(weights[need] @ _equal_length_correction_vec(x))
    return value, err
