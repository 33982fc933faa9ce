"""The parametrized family of degree-n interval refinement maps.

A member is a pair of coefficient vectors p, q of length 2n+1 and sends
([L, U], x) to [L', U'] with

    L' = L + (x + p0*L^n + p1*L^(n-1)*U + ... + pn*U^n)
           / (p_{n+1}*L^(n-1) + p_{n+2}*L^(n-2)*U + ... + p_{2n}*U^(n-1))

    U' = U + (x + q0*U^n + q1*U^(n-1)*L + ... + qn*L^n)
           / (q_{n+1}*U^(n-1) + q_{n+2}*U^(n-2)*L + ... + q_{2n}*L^(n-1))

The Secant-Newton member uses the secant chord through (L, L^n) and (U, U^n)
for the lower endpoint and the Newton tangent at U for the upper one.
Canonical form (p0 = q0 = -1 and p1..pn = q1..qn = 0) makes the numerators
exactly x - L^n and x - U^n; the analysis module turns any non-canonical map
into a concrete contraction counterexample, so coefficients are stored
verbatim and canonicalization is always explicit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from ._kernels import apply_pairs, apply_reduced_pairs, form_pair
from .numeric import Interval, as_rational, parse_rational


class DenominatorZeroError(ArithmeticError):
    """A map denominator evaluated to exactly zero at some (L, U).

    ``side`` is "lower" or "upper"; ``iteration`` is filled in by the solver
    when the failure happens mid-refinement.
    """

    def __init__(self, side: str, iteration: int | None = None):
        self.side = side
        self.iteration = iteration
        msg = f"{side} denominator evaluated to zero"
        if iteration is not None:
            msg += f" at iteration {iteration}"
        super().__init__(msg)


class MapSpecError(ValueError):
    """Malformed map specification (file or dict)."""


@dataclass(frozen=True)
class MapCoefficients:
    """One member of the family: degree n plus vectors p, q of length 2n+1."""

    n: int
    p: tuple[Fraction, ...]
    q: tuple[Fraction, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"map degree must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "p", tuple(as_rational(c) for c in self.p))
        object.__setattr__(self, "q", tuple(as_rational(c) for c in self.q))
        want = 2 * self.n + 1
        for name, coeffs in (("p", self.p), ("q", self.q)):
            if len(coeffs) != want:
                raise ValueError(
                    f"{name} must have length {want} (2n+1 for n={self.n}), "
                    f"got {len(coeffs)}"
                )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": [str(c) for c in self.p],
            "q": [str(c) for c in self.q],
        }


@dataclass(frozen=True)
class CanonicalReport:
    """Outcome of the canonical-form check.

    ``violations`` holds (coefficient name, required value, actual value)
    for every head coefficient that differs from the canonical one.
    """

    is_canonical: bool
    violations: tuple[tuple[str, Fraction, Fraction], ...]

    def to_json(self) -> dict:
        return {
            "is_canonical": self.is_canonical,
            "violations": [
                {"coefficient": name, "required": str(req), "actual": str(act)}
                for name, req, act in self.violations
            ],
        }


def secant_newton(n: int) -> MapCoefficients:
    """The Secant-Newton member of the degree-n family.

    p = (-1, 0 x n, 1 x n) gives the secant chord for the lower endpoint;
    q = (-1, 0 x n, n, 0 x (n-1)) gives the Newton tangent at U for the
    upper one.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"need integer n >= 2, got {n!r}")
    zero = Fraction(0)
    one = Fraction(1)
    p = (Fraction(-1),) + (zero,) * n + (one,) * n
    q = (Fraction(-1),) + (zero,) * n + (Fraction(n),) + (zero,) * (n - 1)
    return MapCoefficients(n, p, q)


def counterexample_map(repair_q0: bool = True) -> MapCoefficients:
    """A degree-3 map that is not Secant-Newton yet returns the identical
    interval at ([1, 2], x = 27/8): an equality point of the dominance
    relation.

    The vector is sometimes quoted with q0 = +1, which cannot belong to any
    contracting map (corner probes at x = U^n expose it immediately), so the
    repaired q0 = -1 is the default; pass ``repair_q0=False`` to get the
    unrepaired variant for that diagnostic.
    """
    q0 = Fraction(-1) if repair_q0 else Fraction(1)
    return MapCoefficients(
        3,
        p=(Fraction(-1), 0, 0, 0, Fraction(2), Fraction(1, 2), Fraction(1)),
        q=(q0, 0, 0, 0, Fraction(3), 0, 0),
    )


def check_canonical(m: MapCoefficients) -> CanonicalReport:
    """Check p0 = q0 = -1 and p1..pn = q1..qn = 0."""
    violations = []
    minus_one = Fraction(-1)
    zero = Fraction(0)
    for name, coeffs in (("p", m.p), ("q", m.q)):
        if coeffs[0] != minus_one:
            violations.append((f"{name}0", minus_one, coeffs[0]))
        for i in range(1, m.n + 1):
            if coeffs[i] != zero:
                violations.append((f"{name}{i}", zero, coeffs[i]))
    return CanonicalReport(not violations, tuple(violations))


def canonicalize(m: MapCoefficients) -> MapCoefficients:
    """Force the head coefficients to canonical values, keeping both
    denominator tails untouched.  Idempotent."""
    head = (Fraction(-1),) + (Fraction(0),) * m.n
    return MapCoefficients(m.n, head + m.p[m.n + 1:], head + m.q[m.n + 1:])


class MapEvaluator:
    """One map prepared for repeated exact evaluation.

    Canonical maps are dispatched to the reduced-form fast path (numerators
    x - L^n and x - U^n); everything else goes through the general form.
    The two are algebraically identical on canonical maps, which the test
    suite checks against each other.
    """

    __slots__ = ("map", "_n", "_pn", "_pd", "_qn", "_qd", "_canonical")

    def __init__(self, m: MapCoefficients):
        self.map = m
        self._n = m.n
        self._canonical = check_canonical(m).is_canonical
        if self._canonical:
            p, q = m.p[m.n + 1:], m.q[m.n + 1:]
        else:
            p, q = m.p, m.q
        self._pn = [c.numerator for c in p]
        self._pd = [c.denominator for c in p]
        self._qn = [c.numerator for c in q]
        self._qd = [c.denominator for c in q]

    def pair(self, lo: Fraction, hi: Fraction, x: Fraction) -> tuple[Fraction, Fraction]:
        """Raw refined endpoints at ([lo, hi], x); unclamped and unordered."""
        if not 0 < lo <= hi:
            raise ValueError(f"need 0 < lo <= hi, got [{lo}, {hi}]")
        if x <= 0:
            raise ValueError(f"need x > 0, got {x}")
        kernel = apply_reduced_pairs if self._canonical else apply_pairs
        status, a, b, c, d = kernel(
            self._n, self._pn, self._pd, self._qn, self._qd,
            lo.numerator, lo.denominator,
            hi.numerator, hi.denominator,
            x.numerator, x.denominator,
        )
        if status == 1:
            raise DenominatorZeroError("lower")
        if status == 2:
            raise DenominatorZeroError("upper")
        return Fraction(a, b), Fraction(c, d)

    def general_pair(self, lo, hi, x) -> tuple[Fraction, Fraction]:
        """Same as pair() but always through the general form (for the
        reduced-vs-general equivalence tests)."""
        m = self.map
        status, a, b, c, d = apply_pairs(
            self._n,
            [c.numerator for c in m.p], [c.denominator for c in m.p],
            [c.numerator for c in m.q], [c.denominator for c in m.q],
            lo.numerator, lo.denominator,
            hi.numerator, hi.denominator,
            x.numerator, x.denominator,
        )
        if status == 1:
            raise DenominatorZeroError("lower")
        if status == 2:
            raise DenominatorZeroError("upper")
        return Fraction(a, b), Fraction(c, d)


def evaluator(m: MapCoefficients) -> MapEvaluator:
    return MapEvaluator(m)


def apply_pair(m: MapCoefficients, lo, hi, x) -> tuple[Fraction, Fraction]:
    """Exact refined endpoints, unclamped and unordered.

    This is the falsifier-facing form: a non-contracting map may return a
    pair with lo' > hi', and the pair is reported as-is so the failure can
    be inspected.  Raises DenominatorZeroError when a denominator form is
    exactly zero at (lo, hi).
    """
    return MapEvaluator(m).pair(as_rational(lo), as_rational(hi), as_rational(x))


def apply(m: MapCoefficients, interval: Interval, x) -> Interval:
    """Refine an interval once.

    Raises ValueError if the refined pair is not a valid interval (possible
    only for non-contracting maps; use apply_pair to inspect the raw pair).
    """
    lo, hi = apply_pair(m, interval.lo, interval.hi, x)
    return Interval(lo, hi)


def denominators(m: MapCoefficients, lo, hi) -> tuple[Fraction, Fraction]:
    """Exact values of the two denominator forms at (L, U) = (lo, hi)."""
    lo = as_rational(lo)
    hi = as_rational(hi)
    tail_p = m.p[m.n + 1:]
    tail_q = m.q[m.n + 1:]
    dp = Fraction(*form_pair(
        [c.numerator for c in tail_p], [c.denominator for c in tail_p],
        lo.numerator, lo.denominator, hi.numerator, hi.denominator))
    dq = Fraction(*form_pair(
        [c.numerator for c in tail_q], [c.denominator for c in tail_q],
        hi.numerator, hi.denominator, lo.numerator, lo.denominator))
    return dp, dq


def map_from_dict(data) -> MapCoefficients:
    """Parse a map specification object: {"n": int, "p": [...], "q": [...]}
    with p and q arrays of exactly 2n+1 rational strings."""
    if not isinstance(data, dict):
        raise MapSpecError("map spec must be a JSON object")
    unknown = sorted(set(data) - {"n", "p", "q"})
    if unknown:
        raise MapSpecError(f"unknown fields in map spec: {', '.join(unknown)}")
    missing = sorted({"n", "p", "q"} - set(data))
    if missing:
        raise MapSpecError(f"missing fields in map spec: {', '.join(missing)}")
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise MapSpecError(f"n must be an integer >= 2, got {n!r}")
    want = 2 * n + 1
    vectors = {}
    for name in ("p", "q"):
        arr = data[name]
        if not isinstance(arr, list):
            raise MapSpecError(f"{name} must be an array of rational strings")
        if len(arr) != want:
            raise MapSpecError(
                f"{name} must have exactly {want} entries (2n+1 for n={n}), "
                f"got {len(arr)}"
            )
        try:
            vectors[name] = tuple(parse_rational(item) for item in arr)
        except ValueError as exc:
            raise MapSpecError(f"bad entry in {name}: {exc}") from None
    return MapCoefficients(n, vectors["p"], vectors["q"])


def load_map(path) -> MapCoefficients:
    """Load a map specification from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MapSpecError(f"cannot read map spec {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise MapSpecError(f"map spec {path} is not valid JSON: {exc}") from None
    return map_from_dict(data)
