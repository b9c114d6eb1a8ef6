# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled bulk energy sums.

Same dispatch and branch thresholds as the NumPy fallback in `_slowsums`;
the two backends are differential-tested against each other.  Accumulation
uses Kahan compensation so hundreds of millions of O(1)-sized terms keep
full double precision.
"""

import numpy as np

from .errors import GeometryError, InvalidArgumentError, PolicyError

from libc.math cimport INFINITY, exp, fabs, log, log1p

BACKEND_NAME = "compiled"

cdef enum:
    N_SC = 40
    N_PC = 41

cdef double LN2 = 0.6931471805599453094172321214581766
cdef double S_AT_ONE = 1.5 - 2.0 * 0.6931471805599453094172321214581766
cdef double EXACT_LOG_RANGE = 30.0
cdef double OVERLAP_LOG_RANGE = 30.0
cdef double ERROR_CAP = 2.0

cdef int MODE_EXACT = 0
cdef int MODE_POINT_CHARGE = 1
cdef int MODE_AUTO = 2

cdef double[N_SC] S_C
cdef double[N_PC] PHI_C

cdef int _k
for _k in range(2, 2 + N_SC):
    S_C[_k - 2] = 1.0 / (2.0 * _k * (_k - 1) * (2 * _k - 1))
for _k in range(1, 1 + N_PC):
    PHI_C[_k - 1] = 1.0 / ((2 * _k - 1) * 2.0 * _k * (2 * _k + 1))

# error codes surfaced from nogil loops
cdef enum:
    ERR_OK = 0
    ERR_PC_CONCENTRIC = 1
    ERR_PC_GEOMETRY = 2
    ERR_OVERLAP_RANGE = 3


cdef inline void kadd(double* total, double* comp, double term) nogil:
    cdef double y = term - comp[0]
    cdef double t = total[0] + y
    comp[0] = (t - total[0]) - y
    total[0] = t


cdef inline double g_anti(double t) nogil:
    cdef double a = fabs(t)
    if a == 0.0:
        return 0.0
    return 0.5 * a * a * log(a) - 0.75 * a * a


cdef inline double s_func(double x) nogil:
    cdef double y, acc
    cdef int k
    if x < 0.5:
        y = x * x
        acc = 0.0
        for k in range(N_SC - 1, -1, -1):
            acc = (acc + S_C[k]) * y
        return acc * y
    if x == 1.0:
        return S_AT_ONE
    return (-0.5 * (1.0 - x) * (1.0 - x) * log1p(-x)
            - 0.5 * (1.0 + x) * (1.0 + x) * log1p(x)
            + 1.5 * x * x)


cdef inline double s_deriv(double x) nogil:
    if x == 1.0:
        return 2.0 - 2.0 * LN2
    return (1.0 - x) * log1p(-x) - (1.0 + x) * log1p(x) + 2.0 * x


cdef inline double divided_s(double a, double b) nogil:
    # (S(xs) - S(xt)) / (a - b) with a = xs^2, b = xt^2, both < 1/4
    cdef double qk = a + b
    cdef double bk = b
    cdef double total = 0.0
    cdef double term
    cdef int k
    for k in range(N_SC):
        term = S_C[k] * qk
        total += term
        if term <= total * 1e-18:
            break
        bk *= b
        qk = a * qk + bk
    return total


cdef inline double corr(double u, double v) nogil:
    # (S(xs) - S(xt)) / (u v): exact excess over the point-charge value
    cdef double xs = 0.5 * (u + v)
    cdef double xt = 0.5 * fabs(u - v)
    cdef double a, b
    if xs == 0.0:
        return 0.0
    a = xs * xs
    b = xt * xt
    if xs < 0.5:
        return divided_s(a, b)
    if a == b:
        return s_deriv(xs) / (xs + xt)
    return (s_func(xs) - s_func(xt)) / (a - b)


cdef inline double corr_equal(double x) nogil:
    # S(x)/x^2 for equal lengths
    cdef double y, acc
    cdef int k
    if x == 0.0:
        return 0.0
    if x < 0.5:
        y = x * x
        acc = 0.0
        for k in range(N_SC - 1, -1, -1):
            acc = (acc + S_C[k]) * y
        return acc
    return s_func(x) / (x * x)


cdef inline double phi(double beta) nogil:
    cdef double y, acc
    cdef int k
    if beta < 0.5:
        y = beta * beta
        acc = 0.0
        for k in range(N_PC - 1, -1, -1):
            acc = (acc + PHI_C[k]) * y
        return 0.5 + acc
    if beta == 1.0:
        return LN2
    return ((1.0 + beta) * (1.0 + beta) * log1p(beta)
            - (1.0 - beta) * (1.0 - beta) * log1p(-beta)) / (4.0 * beta)


cdef inline double conc_energy(double ll1, double ll2) nogil:
    cdef double ll_big = ll1 if ll1 > ll2 else ll2
    return -ll_big + LN2 + 1.5 - phi(exp(-fabs(ll1 - ll2)))


cdef inline double overlap_energy(double d, double ll1, double ll2) nogil:
    cdef double l1 = exp(ll1)
    cdef double l2 = exp(ll2)
    cdef double s = 0.5 * (l1 + l2)
    cdef double t = 0.5 * fabs(l1 - l2)
    cdef double raw = g_anti(d + s) + g_anti(d - s) - g_anti(d + t) - g_anti(d - t)
    return -raw / (l1 * l2)


cdef inline double pc_delta(double rho) nogil:
    cdef double delta
    if rho <= 0.0:
        return 0.0
    delta = -log1p(-rho)
    if delta > ERROR_CAP:
        delta = ERROR_CAP
    return delta


cdef int _bilinear(double[::1] c1, double[::1] ll1, double[::1] w1,
                   double[::1] c2, double[::1] ll2, double[::1] w2,
                   int mode, double rho_threshold, bint exclude_diag,
                   double* out_total, double* out_err,
                   long* out_conc, long* out_over) nogil:
    cdef Py_ssize_t n1 = c1.shape[0]
    cdef Py_ssize_t n2 = c2.shape[0]
    cdef Py_ssize_t i, j
    cdef double total = 0.0, tcomp = 0.0
    cdef double err = 0.0, ecomp = 0.0
    cdef long n_conc = 0, n_over = 0
    cdef double d, ln_d, e1, e2, u, v, rho, w, val
    for i in range(n1):
        for j in range(n2):
            if exclude_diag and i == j:
                continue
            w = w1[i] * w2[j]
            d = fabs(c1[i] - c2[j])
            if d == 0.0:
                if mode == MODE_POINT_CHARGE:
                    return ERR_PC_CONCENTRIC
                n_conc += 1
                kadd(&total, &tcomp, w * conc_energy(ll1[i], ll2[j]))
                continue
            ln_d = log(d)
            e1 = ll1[i] - ln_d
            e2 = ll2[j] - ln_d
            if e1 > 690.0 or e2 > 690.0:
                rho = INFINITY
                u = INFINITY
                v = INFINITY
            else:
                u = exp(e1)
                v = exp(e2)
                rho = 0.5 * (u + v)
            if rho >= 1.0:
                if mode == MODE_POINT_CHARGE:
                    return ERR_PC_GEOMETRY
                if rho > 1.0:
                    if ll1[i] < -OVERLAP_LOG_RANGE or ll2[j] < -OVERLAP_LOG_RANGE:
                        return ERR_OVERLAP_RANGE
                    n_over += 1
                    val = overlap_energy(d, ll1[i], ll2[j])
                else:
                    val = -ln_d + corr(u, v)
                kadd(&total, &tcomp, w * val)
                continue
            if mode == MODE_POINT_CHARGE or (mode == MODE_AUTO and rho < rho_threshold):
                kadd(&total, &tcomp, w * (-ln_d))
                kadd(&err, &ecomp, w * pc_delta(rho))
            else:
                kadd(&total, &tcomp, w * (-ln_d + corr(u, v)))
    out_total[0] = total
    out_err[0] = err
    out_conc[0] = n_conc
    out_over[0] = n_over
    return ERR_OK


def _raise_for(int code):
    if code == ERR_PC_CONCENTRIC:
        raise PolicyError("point-charge policy cannot evaluate co-centered pieces")
    if code == ERR_PC_GEOMETRY:
        raise GeometryError("rho >= 1 somewhere: closures intersect")
    if code == ERR_OVERLAP_RANGE:
        raise PolicyError(
            "overlapping pieces below length exp(-30) are outside the "
            "closed-form overlap range"
        )


def _prep(a, name):
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional")
    return arr


def _check_exact_range(ll1, ll2, int mode):
    if mode != MODE_EXACT:
        return
    hi = 0.0
    if len(ll1):
        hi = max(hi, float(np.abs(ll1).max()))
    if ll2 is not None and len(ll2):
        hi = max(hi, float(np.abs(ll2).max()))
    if hi > EXACT_LOG_RANGE:
        raise PolicyError(
            "Exact policy admits |log length| <= 30; use Auto for extreme scales"
        )


def mutual_sum(c1, ll1, w1, c2, ll2, w2, int mode=2, double rho_threshold=1e-8):
    """sum_{i,j} w1_i w2_j M(piece_i, piece_j); see _slowsums.mutual_sum."""
    c1 = _prep(c1, "c1"); ll1 = _prep(ll1, "ll1"); w1 = _prep(w1, "w1")
    c2 = _prep(c2, "c2"); ll2 = _prep(ll2, "ll2"); w2 = _prep(w2, "w2")
    if not (len(c1) == len(ll1) == len(w1)) or not (len(c2) == len(ll2) == len(w2)):
        raise InvalidArgumentError("mismatched array lengths")
    _check_exact_range(ll1, ll2, mode)
    cdef double total = 0.0, err = 0.0
    cdef long n_conc = 0, n_over = 0
    cdef int code
    code = _bilinear(c1, ll1, w1, c2, ll2, w2, mode, rho_threshold, 0,
                     &total, &err, &n_conc, &n_over)
    _raise_for(code)
    return total, err, int(n_conc), int(n_over)


def cross_pairs_sum(c, ll, w, int mode=2, double rho_threshold=1e-8):
    """sum_{i != j} w_i w_j M(piece_i, piece_j); see _slowsums.cross_pairs_sum."""
    c = _prep(c, "c"); ll = _prep(ll, "ll"); w = _prep(w, "w")
    if not (len(c) == len(ll) == len(w)):
        raise InvalidArgumentError("mismatched array lengths")
    _check_exact_range(ll, None, mode)
    cdef double total = 0.0, err = 0.0
    cdef long n_conc = 0, n_over = 0
    cdef int code
    code = _bilinear(c, ll, w, c, ll, w, mode, rho_threshold, 1,
                     &total, &err, &n_conc, &n_over)
    _raise_for(code)
    return total, err, int(n_conc), int(n_over)


def uniform_cross_fast(n, double ll, int mode=2, double rho_threshold=1e-8):
    """O(n) cross sum for a uniform level; see _slowsums.uniform_cross_fast."""
    cdef Py_ssize_t nn = n
    if nn < 1:
        raise InvalidArgumentError(f"need n >= 1, got {n}")
    if mode == MODE_EXACT and fabs(ll) > EXACT_LOG_RANGE:
        raise PolicyError(
            "Exact policy admits |log length| <= 30; use Auto for extreme scales"
        )
    if nn == 1:
        return 0.0, 0.0
    cdef double total = 0.0, tcomp = 0.0
    cdef double err = 0.0, ecomp = 0.0
    cdef double ln_n = log(<double> nn)
    cdef Py_ssize_t k
    cdef double ln_d, lr, wgt, x
    cdef double thr_log = log(rho_threshold)
    cdef bint failed = False
    with nogil:
        for k in range(1, nn):
            ln_d = log(<double> k) - ln_n
            lr = ll - ln_d
            if lr >= 0.0:
                failed = True
                break
            wgt = 2.0 * (nn - k)
            kadd(&total, &tcomp, wgt * (-ln_d))
            if mode == MODE_POINT_CHARGE or (mode == MODE_AUTO and lr < thr_log):
                kadd(&err, &ecomp, wgt * pc_delta(exp(lr)))
            else:
                x = exp(lr)
                kadd(&total, &tcomp, wgt * corr_equal(x))
    if failed:
        raise GeometryError("level pieces touch or overlap: need n * length < 1")
    return total, err
