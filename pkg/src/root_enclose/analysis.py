"""Exact, sampled verification of the refinement-map family's properties.

Nothing here is proved.  Statements quantified over all 0 < L <= root <= U
are checked on deterministic sample sets, and every failure comes back as a
concrete rational witness that can be re-checked by hand.  Sample points are
built as (L, r, U) with x = r**n, so the root of x is rational by
construction and every comparison is exact; irrational values never arise.

The checks:

  * falsify_contraction  - the four endpoint inequalities
                           L <= L' <= r <= U' <= U, with corner probes at
                           x = L**n and x = U**n that catch any map whose
                           head coefficients are not canonical
  * check_denominator_bounds - the two necessary denominator inequalities of
                           canonical contracting maps
  * check_dominance      - Secant-Newton's output is a subset of the checked
                           map's output (and almost always a proper one)
  * equality_locus       - the two polynomials in (L, U, x) whose common
                           zero set is exactly where a canonical map's output
                           coincides with Secant-Newton's
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .maps import (
    DenominatorZeroError,
    MapCoefficients,
    MapEvaluator,
    check_canonical,
    denominators,
    evaluator,
    secant_newton,
)
from .numeric import as_rational, geom_sum, pow_int

PASSED_ON_SAMPLES = "passed-on-samples"
FALSIFIED = "falsified"

_ZERO = Fraction(0)


@dataclass(frozen=True)
class SampleConfig:
    """Deterministic sampling plan for the universally quantified checks."""

    seed: int = 0
    count: int = 10_000
    max_magnitude: int = 10 ** 6
    include_corner_probes: bool = True

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.max_magnitude < 2:
            raise ValueError("max_magnitude must be >= 2")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


class Triple(NamedTuple):
    """A sample point 0 < L <= r <= U with x = r**n held exactly."""

    L: Fraction
    r: Fraction
    U: Fraction
    x: Fraction


@dataclass(frozen=True)
class Witness:
    """A concrete point where a checked inequality fails, both sides evaluated."""

    L: Fraction
    r: Fraction
    U: Fraction
    x: Fraction
    violated: str
    lhs: Fraction
    rhs: Fraction

    def __post_init__(self):
        if not 0 < self.L <= self.r <= self.U:
            raise ValueError("witness must satisfy 0 < L <= r <= U")

    def to_json(self) -> dict:
        return {
            "L": str(self.L),
            "r": str(self.r),
            "U": str(self.U),
            "x": str(self.x),
            "violated": self.violated,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


@dataclass(frozen=True)
class Verdict:
    """Outcome of a sampled property check."""

    outcome: str
    witness: Witness | None
    samples_checked: int

    def __post_init__(self):
        if (self.outcome == FALSIFIED) != (self.witness is not None):
            raise ValueError("falsified verdicts carry a witness, passing ones do not")

    @property
    def falsified(self) -> bool:
        return self.outcome == FALSIFIED

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "samples_checked": self.samples_checked,
            "witness": self.witness.to_json() if self.witness else None,
        }


@dataclass(frozen=True)
class DominanceStats:
    """Subset statistics of Secant-Newton's output against another map's."""

    samples: int
    subset_count: int
    proper_subset_count: int
    equality_points: tuple[tuple[Fraction, Fraction, Fraction], ...]
    violations: tuple[Witness, ...]

    def __post_init__(self):
        if self.subset_count + len(self.violations) != self.samples:
            raise ValueError("every sample is either a subset or a violation")
        if self.proper_subset_count > self.subset_count:
            raise ValueError("proper subsets are subsets")

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "subset_count": self.subset_count,
            "proper_subset_count": self.proper_subset_count,
            "equality_points": [
                [str(L), str(r), str(U)] for L, r, U in self.equality_points
            ],
            "violations": [w.to_json() for w in self.violations],
        }


# Fixed corner grid.  Each pair contributes probes at r = L, r = U, the
# degenerate L = U copies, and the midpoint; (1, 4) is deliberately present
# so that x = U**n probing covers the (1, 4, 4) diagnostic point.
_F = Fraction
_CORNER_PAIRS = (
    (_F(1), _F(1)),
    (_F(1), _F(2)),
    (_F(1), _F(4)),
    (_F(1, 2), _F(1)),
    (_F(3, 2), _F(2)),
    (_F(1), _F(3)),
    (_F(2), _F(3)),
    (_F(1, 2), _F(2)),
    (_F(2, 3), _F(3, 2)),
    (_F(2), _F(2)),
    (_F(3), _F(5)),
    (_F(5, 2), _F(7, 2)),
    (_F(1, 3), _F(1, 2)),
    (_F(4), _F(7)),
    (_F(7, 3), _F(3)),
)


def corner_triples(n: int) -> list[Triple]:
    """The fixed head of every corner-enabled sample sequence."""
    out = []
    for L, U in _CORNER_PAIRS:
        out.append(Triple(L, L, U, pow_int(L, n)))
        out.append(Triple(L, U, U, pow_int(U, n)))
        out.append(Triple(L, L, L, pow_int(L, n)))
        out.append(Triple(U, U, U, pow_int(U, n)))
        mid = (L + U) / 2
        out.append(Triple(L, mid, U, pow_int(mid, n)))
    return out


def _random_positive(rng: random.Random, mag: int) -> Fraction:
    return Fraction(rng.randint(1, mag), rng.randint(1, mag))


def sample_triples(n: int, cfg: SampleConfig) -> list[Triple]:
    """Deterministic list of exactly cfg.count sample triples.

    With corner probes enabled the fixed corner block comes first (truncated
    if cfg.count is smaller); pseudo-random triples with numerators and
    denominators bounded by cfg.max_magnitude fill the rest.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    out = corner_triples(n) if cfg.include_corner_probes else []
    rng = random.Random(cfg.seed)
    while len(out) < cfg.count:
        a = _random_positive(rng, cfg.max_magnitude)
        b = _random_positive(rng, cfg.max_magnitude)
        c = _random_positive(rng, cfg.max_magnitude)
        L, r, U = sorted((a, b, c))
        out.append(Triple(L, r, U, pow_int(r, n)))
    return out[: cfg.count]


def _contraction_witness(ev: MapEvaluator, t: Triple) -> Witness | None:
    """First failing inequality of L <= L' <= r <= U' <= U at one triple."""
    try:
        lo, hi = ev.pair(t.L, t.U, t.x)
    except DenominatorZeroError:
        return Witness(t.L, t.r, t.U, t.x, "denominator-zero", _ZERO, _ZERO)
    if lo < t.L:
        return Witness(t.L, t.r, t.U, t.x, "L <= L'", t.L, lo)
    if lo > t.r:
        return Witness(t.L, t.r, t.U, t.x, "L' <= r", lo, t.r)
    if hi < t.r:
        return Witness(t.L, t.r, t.U, t.x, "r <= U'", t.r, hi)
    if hi > t.U:
        return Witness(t.L, t.r, t.U, t.x, "U' <= U", hi, t.U)
    return None


def _scan_contraction_chunk(args) -> tuple[int, Witness] | None:
    m, triples = args
    ev = evaluator(m)
    for idx, t in enumerate(triples):
        w = _contraction_witness(ev, t)
        if w is not None:
            return idx, w
    return None


def falsify_contraction(m: MapCoefficients, cfg: SampleConfig, jobs: int = 1) -> Verdict:
    """Search the sample set for a violation of L <= L' <= r <= U' <= U.

    A zero denominator counts as a violation (the map is not defined on the
    whole domain the contraction condition quantifies over).  Maps that fail
    the canonical-form check are short-circuited: for a p-side violation the
    corner x = L**n forces the lower numerator away from zero at generic
    (L, U), so probing the sampled pairs there yields a witness immediately,
    and likewise x = U**n for q-side violations.

    samples_checked counts evaluated points (probes included); with
    jobs > 1 the scan is partitioned but merged in sample order, so the
    verdict is identical to the sequential one.
    """
    ev = evaluator(m)
    triples = sample_triples(m.n, cfg)
    checked = 0

    report = check_canonical(m)
    if not report.is_canonical:
        p_violated = any(name.startswith("p") for name, _, _ in report.violations)
        q_violated = any(name.startswith("q") for name, _, _ in report.violations)
        seen = set()
        for t in triples:
            if (t.L, t.U) in seen:
                continue
            seen.add((t.L, t.U))
            probes = []
            if p_violated:
                probes.append(Triple(t.L, t.L, t.U, pow_int(t.L, m.n)))
            if q_violated:
                probes.append(Triple(t.L, t.U, t.U, pow_int(t.U, m.n)))
            for probe in probes:
                checked += 1
                w = _contraction_witness(ev, probe)
                if w is not None:
                    return Verdict(FALSIFIED, w, checked)

    if jobs > 1:
        chunk = max(64, (len(triples) + jobs - 1) // jobs)
        chunks = [triples[i:i + chunk] for i in range(0, len(triples), chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_scan_contraction_chunk, [(m, c) for c in chunks])
            base = 0
            for part, found in zip(chunks, results):
                if found is not None:
                    idx, w = found
                    return Verdict(FALSIFIED, w, checked + base + idx + 1)
                base += len(part)
        return Verdict(PASSED_ON_SAMPLES, None, checked + len(triples))

    for t in triples:
        checked += 1
        w = _contraction_witness(ev, t)
        if w is not None:
            return Verdict(FALSIFIED, w, checked)
    return Verdict(PASSED_ON_SAMPLES, None, checked)


def check_denominator_bounds(m: MapCoefficients, cfg: SampleConfig) -> Verdict:
    """Check the two denominator lower bounds every canonical contracting
    map satisfies: the p-denominator dominates the secant form
    L^(n-1) + L^(n-2) U + ... + U^(n-1) and the q-denominator dominates the
    Newton form n*U^(n-1), exactly, on the sampled (L, U) pairs.

    Rejects non-canonical maps: the bounds are statements about the reduced
    form.
    """
    if not check_canonical(m).is_canonical:
        raise ValueError("denominator bounds apply to canonical maps only")
    n = m.n
    checked = 0
    for t in sample_triples(n, cfg):
        L, U = t.L, t.U
        checked += 1
        dp, dq = denominators(m, L, U)
        secant = geom_sum(L, U, n)
        if dp < secant:
            w = Witness(L, L, U, pow_int(L, n),
                        "p-denominator >= secant form", dp, secant)
            return Verdict(FALSIFIED, w, checked)
        newton = n * pow_int(U, n - 1)
        if dq < newton:
            w = Witness(L, L, U, pow_int(L, n),
                        "q-denominator >= n*U^(n-1)", dq, newton)
            return Verdict(FALSIFIED, w, checked)
    return Verdict(PASSED_ON_SAMPLES, None, checked)


def _scan_dominance_chunk(args):
    m, triples = args
    m_ev = evaluator(m)
    sn_ev = evaluator(secant_newton(m.n))
    subset = 0
    proper = 0
    equality = []
    violations = []
    for t in triples:
        try:
            mlo, mhi = m_ev.pair(t.L, t.U, t.x)
        except DenominatorZeroError:
            violations.append(
                Witness(t.L, t.r, t.U, t.x, "denominator-zero", _ZERO, _ZERO))
            continue
        slo, shi = sn_ev.pair(t.L, t.U, t.x)
        if mlo > slo:
            violations.append(Witness(t.L, t.r, t.U, t.x, "L' <= L*", mlo, slo))
        elif shi > mhi:
            violations.append(Witness(t.L, t.r, t.U, t.x, "U* <= U'", shi, mhi))
        else:
            subset += 1
            if mlo == slo and mhi == shi:
                equality.append((t.L, t.r, t.U))
            else:
                proper += 1
    return subset, proper, equality, violations


def check_dominance(m: MapCoefficients, cfg: SampleConfig, jobs: int = 1) -> DominanceStats:
    """Compare the checked map's output interval against Secant-Newton's on
    every sampled triple: count exact subsets ([L*, U*] inside [L', U']),
    proper subsets, and equality points.  Zero denominators in the checked
    map count as violations.  Results are merged in sample order."""
    triples = sample_triples(m.n, cfg)
    if jobs > 1:
        chunk = max(64, (len(triples) + jobs - 1) // jobs)
        chunks = [triples[i:i + chunk] for i in range(0, len(triples), chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_dominance_chunk, [(m, c) for c in chunks]))
    else:
        parts = [_scan_dominance_chunk((m, triples))]
    subset = sum(p[0] for p in parts)
    proper = sum(p[1] for p in parts)
    equality = tuple(pt for p in parts for pt in p[2])
    violations = tuple(w for p in parts for w in p[3])
    return DominanceStats(len(triples), subset, proper, equality, violations)


class TrivariatePoly:
    """Dense trivariate polynomial: coeffs[i][j][k] multiplies L^i U^j x^k.

    Stored trimmed to the minimal bounding degrees of its nonzero terms (the
    zero polynomial is the single zero coefficient), so structural equality
    is semantic equality.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = coeffs

    @classmethod
    def from_terms(cls, terms: dict) -> "TrivariatePoly":
        live = {key: as_rational(c) for key, c in terms.items() if c != 0}
        if not live:
            return cls((((Fraction(0),),),))
        di = max(k[0] for k in live)
        dj = max(k[1] for k in live)
        dk = max(k[2] for k in live)
        dense = tuple(
            tuple(
                tuple(live.get((i, j, k), Fraction(0)) for k in range(dk + 1))
                for j in range(dj + 1)
            )
            for i in range(di + 1)
        )
        return cls(dense)

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (((Fraction(0),),),)

    def terms(self) -> dict:
        """Nonzero terms as {(L-exp, U-exp, x-exp): coefficient}."""
        out = {}
        for i, plane in enumerate(self.coeffs):
            for j, row in enumerate(plane):
                for k, c in enumerate(row):
                    if c != 0:
                        out[(i, j, k)] = c
        return out

    def evaluate(self, L, U, x) -> Fraction:
        L = as_rational(L)
        U = as_rational(U)
        x = as_rational(x)
        total = Fraction(0)
        for (i, j, k), c in self.terms().items():
            total += c * pow_int(L, i) * pow_int(U, j) * pow_int(x, k)
        return total

    def __eq__(self, other):
        if not isinstance(other, TrivariatePoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if self.is_zero:
            return "0"
        def monomial(i, j, k):
            parts = []
            for sym, e in (("L", i), ("U", j), ("x", k)):
                if e == 1:
                    parts.append(sym)
                elif e > 1:
                    parts.append(f"{sym}^{e}")
            return "*".join(parts) if parts else "1"
        pieces = []
        for (i, j, k), c in sorted(self.terms().items(),
                                   key=lambda kv: (-kv[0][2], -kv[0][0], -kv[0][1])):
            mono = monomial(i, j, k)
            mag = abs(c)
            body = mono if mag == 1 and mono != "1" else (
                f"{mag}" if mono == "1" else f"{mag}*{mono}")
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"TrivariatePoly({self})"


def equality_locus(m: MapCoefficients) -> tuple[TrivariatePoly, TrivariatePoly]:
    """The two polynomials whose simultaneous vanishing marks the points
    where a canonical map's output equals Secant-Newton's:

        f_p = (x - L^n) * (coefficientwise excess of the p-denominator
                           over the secant form)
        f_q = (x - U^n) * (coefficientwise excess of the q-denominator
                           over n*U^(n-1))

    returned expanded in a dense coefficient representation over (L, U, x).
    Both are identically zero exactly for Secant-Newton itself; for any
    other canonical map their common zero set has measure zero.
    """
    if not check_canonical(m).is_canonical:
        raise ValueError("equality locus applies to canonical maps only")
    n = m.n
    terms_p: dict = {}
    for i in range(n):
        c = m.p[n + 1 + i] - 1
        if c != 0:
            key_hi = (n - 1 - i, i, 1)         # L^(n-1-i) U^i * x
            key_lo = (2 * n - 1 - i, i, 0)     # L^(n-1-i) U^i * L^n
            terms_p[key_hi] = terms_p.get(key_hi, _ZERO) + c
            terms_p[key_lo] = terms_p.get(key_lo, _ZERO) - c
    terms_q: dict = {}
    for i in range(n):
        c = m.q[n + 1 + i] - (n if i == 0 else 0)
        if c != 0:
            key_hi = (i, n - 1 - i, 1)         # U^(n-1-i) L^i * x
            key_lo = (i, 2 * n - 1 - i, 0)     # U^(n-1-i) L^i * U^n
            terms_q[key_hi] = terms_q.get(key_hi, _ZERO) + c
            terms_q[key_lo] = terms_q.get(key_lo, _ZERO) - c
    return TrivariatePoly.from_terms(terms_p), TrivariatePoly.from_terms(terms_q)


def evaluate_locus(m: MapCoefficients, L, U, x) -> tuple[Fraction, Fraction]:
    """Evaluate both locus polynomials at (L, U, x).

    Provided neither map hits a zero denominator there, the result is (0, 0)
    exactly when the checked map and Secant-Newton return the identical
    interval at ([L, U], x).
    """
    L = as_rational(L)
    U = as_rational(U)
    x = as_rational(x)
    if not 0 < L <= U:
        raise ValueError(f"need 0 < L <= U, got ({L}, {U})")
    if not pow_int(L, m.n) <= x <= pow_int(U, m.n):
        raise ValueError(f"need L^n <= x <= U^n, got x={x}")
    f_p, f_q = equality_locus(m)
    return f_p.evaluate(L, U, x), f_q.evaluate(L, U, x)


# ---------------------------------------------------------------------------
# Map generators for randomized testing.

def _as_rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def perturbed_contracting_map(n: int, seed_or_rng, *, perturb_p: bool = True,
                              perturb_q: bool = True,
                              max_magnitude: int = 6) -> MapCoefficients:
    """Secant-Newton plus non-negative denominator perturbations.

    The perturbed denominators dominate Secant-Newton's coefficientwise,
    which certifies contraction pointwise without any positivity solving.
    Each perturbed side gets at least one strictly positive bump, so the
    p-side excess form is strictly positive whenever L, U > 0 (making the
    lower endpoint strictly worse than the secant one whenever x > L^n),
    and similarly for the q-side when x < U^n.
    """
    rng = _as_rng(seed_or_rng)
    base = secant_newton(n)
    p = list(base.p)
    q = list(base.q)
    if perturb_p:
        bumped = False
        for i in range(n):
            if rng.random() < 0.6:
                p[n + 1 + i] += _random_positive(rng, max_magnitude)
                bumped = True
        if not bumped:
            p[n + 1 + rng.randrange(n)] += _random_positive(rng, max_magnitude)
    if perturb_q:
        bumped = False
        for i in range(n):
            if rng.random() < 0.6:
                q[n + 1 + i] += _random_positive(rng, max_magnitude)
                bumped = True
        if not bumped:
            q[n + 1 + rng.randrange(n)] += _random_positive(rng, max_magnitude)
    return MapCoefficients(n, tuple(p), tuple(q))


def random_noncanonical_map(n: int, seed_or_rng, *, max_magnitude: int = 6) -> MapCoefficients:
    """Secant-Newton with a nonzero perturbation of one or more head
    coefficients (p0..pn or q0..qn), i.e. a map that cannot be contracting."""
    rng = _as_rng(seed_or_rng)
    base = secant_newton(n)
    p = list(base.p)
    q = list(base.q)
    side = rng.choice(("p", "q", "both"))
    def bump(vec):
        for i in rng.sample(range(n + 1), rng.randint(1, min(2, n + 1))):
            delta = _random_positive(rng, max_magnitude)
            if rng.random() < 0.5:
                delta = -delta
            vec[i] += delta
    if side in ("p", "both"):
        bump(p)
    if side in ("q", "both"):
        bump(q)
    return MapCoefficients(n, tuple(p), tuple(q))


def random_canonical_map(n: int, seed_or_rng, *, positive_denominators: bool = False,
                         max_magnitude: int = 6) -> MapCoefficients:
    """Random canonical map: canonical head, arbitrary denominator tails.

    Not contracting in general.  With positive_denominators the tail
    coefficients are non-negative with a strictly positive leading one, so
    neither denominator form can vanish on L, U > 0.
    """
    rng = _as_rng(seed_or_rng)
    head = [Fraction(-1)] + [Fraction(0)] * n

    def tail():
        out = []
        for i in range(n):
            c = _random_positive(rng, max_magnitude)
            if positive_denominators:
                if i > 0 and rng.random() < 0.3:
                    c = Fraction(0)
            else:
                if rng.random() < 0.5:
                    c = -c
                if rng.random() < 0.2:
                    c = Fraction(0)
            out.append(c)
        if not positive_denominators and all(c == 0 for c in out):
            out[rng.randrange(n)] = _random_positive(rng, max_magnitude)
        return out

    p = head + tail()
    q = head + tail()
    return MapCoefficients(n, tuple(p), tuple(q))
