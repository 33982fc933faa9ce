# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the pure-Python kernels (see _pure.py for the contract).

The exact pair functions keep Python arbitrary-precision integers (the values
overflow any machine word) but strip away interpreter dispatch; the float
refinement loop runs entirely on C doubles.  Arithmetic order matches the
pure implementation operation for operation so both backends agree exactly,
including the float path (the build disables FP contraction).
"""

from math import gcd

from libc.stdlib cimport free, malloc

BACKEND_NAME = "compiled"


def norm_pair(num, den):
    """Reduce num/den to lowest terms with den > 0."""
    if den == 0:
        raise ZeroDivisionError("rational with zero denominator")
    if den < 0:
        num = -num
        den = -den
    g = gcd(num, den)
    if g > 1:
        num //= g
        den //= g
    return num, den


def pow_pair(num, den, k):
    """(num/den)**k for k >= 0, with 0**0 == 1."""
    if k < 0:
        raise ValueError("negative exponent")
    if k == 0:
        return 1, 1
    return num ** k, den ** k


cdef list _powers(base, Py_ssize_t top):
    cdef list out = [1]
    cdef Py_ssize_t i
    acc = 1
    for i in range(top):
        acc = acc * base
        out.append(acc)
    return out


def geom_sum_pair(an, ad, bn, bd, k):
    """a**(k-1) + a**(k-2)*b + ... + b**(k-1) (k terms)."""
    cdef Py_ssize_t kk = k
    cdef Py_ssize_t i
    if kk < 1:
        raise ValueError("need at least one term")
    x = an * bd
    y = bn * ad
    cdef list xp = _powers(x, kk - 1)
    cdef list yp = _powers(y, kk - 1)
    total = 0
    for i in range(kk):
        total += xp[kk - 1 - i] * yp[i]
    return norm_pair(total, (ad * bd) ** (kk - 1))


cdef tuple _form(list cn, list cd, an, ad, bn, bd):
    cdef Py_ssize_t k = len(cn)
    cdef Py_ssize_t i
    x = an * bd
    y = bn * ad
    cdef list xp = _powers(x, k - 1)
    cdef list yp = _powers(y, k - 1)
    sn = 0
    sd = 1
    for i in range(k):
        term = cn[i] * xp[k - 1 - i] * yp[i]
        sn = sn * cd[i] + term * sd
        sd = sd * cd[i]
    return norm_pair(sn, sd * (ad * bd) ** (k - 1))


def form_pair(cn, cd, an, ad, bn, bd):
    """sum_i c_i * a**(k-1-i) * b**i with k = len(cn), c_i = cn[i]/cd[i]."""
    return _form(list(cn), list(cd), an, ad, bn, bd)


cdef tuple _shifted_quotient(bn, bd, num_n, num_d, den_n, den_d):
    qn = num_n * den_d
    qd = num_d * den_n
    return norm_pair(bn * qd + qn * bd, bd * qd)


def apply_pairs(n, pn, pd, qn, qd, ln, ld, un, ud, xn, xd):
    """General-form map evaluation; same contract as the pure twin."""
    cdef Py_ssize_t nn = n
    fn, fd = _form(list(pn[: nn + 1]), list(pd[: nn + 1]), ln, ld, un, ud)
    num_n = fn * xd + xn * fd
    num_d = fd * xd
    den_n, den_d = _form(list(pn[nn + 1:]), list(pd[nn + 1:]), ln, ld, un, ud)
    if den_n == 0:
        return 1, 0, 1, 0, 1
    lo_n, lo_d = _shifted_quotient(ln, ld, num_n, num_d, den_n, den_d)

    fn, fd = _form(list(qn[: nn + 1]), list(qd[: nn + 1]), un, ud, ln, ld)
    num_n = fn * xd + xn * fd
    num_d = fd * xd
    den_n, den_d = _form(list(qn[nn + 1:]), list(qd[nn + 1:]), un, ud, ln, ld)
    if den_n == 0:
        return 2, 0, 1, 0, 1
    hi_n, hi_d = _shifted_quotient(un, ud, num_n, num_d, den_n, den_d)
    return 0, lo_n, lo_d, hi_n, hi_d


def apply_reduced_pairs(n, ptn, ptd, qtn, qtd, ln, ld, un, ud, xn, xd):
    """Canonical-map fast path; same contract as the pure twin."""
    cdef Py_ssize_t nn = n
    lpn = ln ** nn
    lpd = ld ** nn
    num_n = xn * lpd - lpn * xd
    num_d = xd * lpd
    den_n, den_d = _form(list(ptn), list(ptd), ln, ld, un, ud)
    if den_n == 0:
        return 1, 0, 1, 0, 1
    lo_n, lo_d = _shifted_quotient(ln, ld, num_n, num_d, den_n, den_d)

    upn = un ** nn
    upd = ud ** nn
    num_n = xn * upd - upn * xd
    num_d = xd * upd
    den_n, den_d = _form(list(qtn), list(qtd), un, ud, ln, ld)
    if den_n == 0:
        return 2, 0, 1, 0, 1
    hi_n, hi_d = _shifted_quotient(un, ud, num_n, num_d, den_n, den_d)
    return 0, lo_n, lo_d, hi_n, hi_d


def refine_float_loop(double x, n, p, q, double eps, max_iter):
    """Double-precision refinement loop; same contract as the pure twin."""
    cdef Py_ssize_t nn = n
    cdef long cap = max_iter
    cdef Py_ssize_t ncoef = 2 * nn + 1
    cdef double* pc = <double*> malloc(ncoef * sizeof(double))
    cdef double* qc = <double*> malloc(ncoef * sizeof(double))
    cdef double* ap = <double*> malloc((nn + 1) * sizeof(double))
    cdef double* bp = <double*> malloc((nn + 1) * sizeof(double))
    if pc == NULL or qc == NULL or ap == NULL or bp == NULL:
        free(pc); free(qc); free(ap); free(bp)
        raise MemoryError()
    cdef Py_ssize_t i
    cdef double lo, hi, w, nlo, nhi, inf, prev_w
    cdef long it
    cdef int status
    try:
        for i in range(ncoef):
            pc[i] = p[i]
            qc[i] = q[i]
        inf = float("inf")
        lo = x if x < 1.0 else 1.0
        hi = x if x > 1.0 else 1.0
        it = 0
        prev_w = inf
        while True:
            w = hi - lo
            if w != w or w == inf:
                status = 3
                break
            if w <= eps:
                status = 0
                break
            if it >= cap:
                status = 1
                break
            if w >= prev_w:
                status = 2
                break
            if not _float_endpoint(pc, nn, lo, hi, lo, x, ap, bp, &nlo):
                status = 3
                break
            if not _float_endpoint(qc, nn, hi, lo, hi, x, ap, bp, &nhi):
                status = 3
                break
            if nlo != nlo or nhi != nhi or nlo == -inf or nhi == inf:
                status = 3
                break
            prev_w = w
            lo = nlo
            hi = nhi
            it += 1
        return status, lo, hi, it
    finally:
        free(pc); free(qc); free(ap); free(bp)


cdef bint _float_endpoint(double* coeffs, Py_ssize_t n, double a, double b,
                          double base, double x, double* ap, double* bp,
                          double* result):
    cdef Py_ssize_t i
    cdef double num, den
    ap[0] = 1.0
    bp[0] = 1.0
    for i in range(1, n + 1):
        ap[i] = ap[i - 1] * a
        bp[i] = bp[i - 1] * b
    num = x
    for i in range(n + 1):
        num += coeffs[i] * ap[n - i] * bp[i]
    den = 0.0
    for i in range(n):
        den += coeffs[n + 1 + i] * ap[n - 1 - i] * bp[i]
    if den == 0.0:
        return False
    result[0] = base + num / den
    return True
