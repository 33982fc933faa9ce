"""Pure-Python reference implementation of the arithmetic kernels.

These are the hot inner loops of the whole package: evaluating one member of
the refinement-map family at one (L, U, x) point, and the double-precision
refinement loop.  The compiled twin (``_speedup.pyx``) implements exactly the
same functions with the same semantics; ``root_enclose._kernels`` picks one
at import time.

Rational values are passed as (numerator, denominator) pairs of Python ints
in lowest terms with a positive denominator, and are returned in the same
form.
"""

from __future__ import annotations

from math import gcd

BACKEND_NAME = "pure"


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
    """(num/den)**k for k >= 0, with 0**0 == 1.

    Reduced input gives reduced output (coprimality survives powering).
    """
    if k < 0:
        raise ValueError("negative exponent")
    if k == 0:
        return 1, 1
    return num ** k, den ** k


def _powers(base, top):
    """[base**0, ..., base**top]."""
    out = [1]
    acc = 1
    for _ in range(top):
        acc = acc * base
        out.append(acc)
    return out


def geom_sum_pair(an, ad, bn, bd, k):
    """a**(k-1) + a**(k-2)*b + ... + b**(k-1) (k terms) for a=an/ad, b=bn/bd."""
    if k < 1:
        raise ValueError("need at least one term")
    # over the common denominator (ad*bd)**(k-1) the terms are products of
    # x = an*bd and y = bn*ad
    x = an * bd
    y = bn * ad
    xp = _powers(x, k - 1)
    yp = _powers(y, k - 1)
    total = 0
    for i in range(k):
        total += xp[k - 1 - i] * yp[i]
    return norm_pair(total, (ad * bd) ** (k - 1))


def form_pair(cn, cd, an, ad, bn, bd):
    """sum_i c_i * a**(k-1-i) * b**i with k = len(cn) and c_i = cn[i]/cd[i].

    This is the homogeneous degree-(k-1) form both map denominators use
    (and, with the leading x added by the caller, the numerators).
    """
    k = len(cn)
    x = an * bd
    y = bn * ad
    xp = _powers(x, k - 1)
    yp = _powers(y, k - 1)
    sn = 0
    sd = 1
    for i in range(k):
        term = cn[i] * xp[k - 1 - i] * yp[i]
        sn = sn * cd[i] + term * sd
        sd = sd * cd[i]
    return norm_pair(sn, sd * (ad * bd) ** (k - 1))


def _shifted_quotient(bn, bd, num_n, num_d, den_n, den_d):
    """base + num/den as a reduced pair; num_d, den_d must be positive."""
    qn = num_n * den_d
    qd = num_d * den_n
    return norm_pair(bn * qd + qn * bd, bd * qd)


def apply_pairs(n, pn, pd, qn, qd, ln, ld, un, ud, xn, xd):
    """Evaluate the general degree-n map at (L, U, x), all given as pairs.

    Returns (status, lo_num, lo_den, hi_num, hi_den) with status 0 on
    success, 1 when the lower denominator form is exactly zero, 2 when the
    upper one is (the pair slots are 0/1 placeholders then).
    """
    # lower endpoint: L + (x + sum_{i<=n} p_i L^(n-i) U^i) / (sum_i p_{n+1+i} L^(n-1-i) U^i)
    fn, fd = form_pair(pn[: n + 1], pd[: n + 1], ln, ld, un, ud)
    num_n = fn * xd + xn * fd
    num_d = fd * xd
    den_n, den_d = form_pair(pn[n + 1:], pd[n + 1:], ln, ld, un, ud)
    if den_n == 0:
        return 1, 0, 1, 0, 1
    lo_n, lo_d = _shifted_quotient(ln, ld, num_n, num_d, den_n, den_d)

    # upper endpoint: same shape with the roles of L and U swapped
    fn, fd = form_pair(qn[: n + 1], qd[: n + 1], un, ud, ln, ld)
    num_n = fn * xd + xn * fd
    num_d = fd * xd
    den_n, den_d = form_pair(qn[n + 1:], qd[n + 1:], un, ud, ln, ld)
    if den_n == 0:
        return 2, 0, 1, 0, 1
    hi_n, hi_d = _shifted_quotient(un, ud, num_n, num_d, den_n, den_d)
    return 0, lo_n, lo_d, hi_n, hi_d


def apply_reduced_pairs(n, ptn, ptd, qtn, qtd, ln, ld, un, ud, xn, xd):
    """Canonical-map fast path: the numerators are exactly x - L**n, x - U**n.

    ptn/ptd and qtn/qtd are the n denominator coefficients of each side.
    Same return convention as apply_pairs.
    """
    lpn = ln ** n
    lpd = ld ** n
    num_n = xn * lpd - lpn * xd
    num_d = xd * lpd
    den_n, den_d = form_pair(ptn, ptd, ln, ld, un, ud)
    if den_n == 0:
        return 1, 0, 1, 0, 1
    lo_n, lo_d = _shifted_quotient(ln, ld, num_n, num_d, den_n, den_d)

    upn = un ** n
    upd = ud ** n
    num_n = xn * upd - upn * xd
    num_d = xd * upd
    den_n, den_d = form_pair(qtn, qtd, un, ud, ln, ld)
    if den_n == 0:
        return 2, 0, 1, 0, 1
    hi_n, hi_d = _shifted_quotient(un, ud, num_n, num_d, den_n, den_d)
    return 0, lo_n, lo_d, hi_n, hi_d


def _float_endpoint(coeffs, n, a, b, base, x):
    """base + (x + form(c[0..n])) / form(c[n+1..2n]) in doubles, or None when
    the denominator form is exactly 0.0."""
    ap = [1.0] * (n + 1)
    bp = [1.0] * (n + 1)
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
        return None
    return base + num / den


def refine_float_loop(x, n, p, q, eps, max_iter):
    """Double-precision refinement loop from [min(1,x), max(1,x)].

    Returns (status, lo, hi, iterations) with status 0 width reached, 1 max
    iterations, 2 stalled (an application failed to strictly shrink the
    width, e.g. endpoints oscillating by one ulp), 3 non-finite value or
    zero denominator (the last finite interval is reported).  Rounding can
    make converged endpoints cross by one ulp; the pair is reported as-is.
    """
    lo = x if x < 1.0 else 1.0
    hi = x if x > 1.0 else 1.0
    it = 0
    prev_w = float("inf")
    while True:
        w = hi - lo
        if w != w or w == float("inf"):
            return 3, lo, hi, it
        if w <= eps:
            return 0, lo, hi, it
        if it >= max_iter:
            return 1, lo, hi, it
        if w >= prev_w:
            return 2, lo, hi, it
        nlo = _float_endpoint(p, n, lo, hi, lo, x)
        nhi = _float_endpoint(q, n, hi, lo, hi, x)
        if nlo is None or nhi is None:
            return 3, lo, hi, it
        if nlo != nlo or nhi != nhi or nlo == float("-inf") or nhi == float("inf"):
            return 3, lo, hi, it
        prev_w = w
        lo = nlo
        hi = nhi
        it += 1
