from fractions import Fraction as F

import pytest

from root_enclose.analysis import perturbed_contracting_map
from root_enclose.maps import DenominatorZeroError, MapCoefficients, secant_newton
from root_enclose.numeric import Interval, pow_int
from root_enclose.solver import (
    MAX_ITERATIONS,
    NON_FINITE,
    STALLED,
    WIDTH_REACHED,
    NotContractingError,
    bisect_float,
    bisect_to_eps,
    initial_interval,
    refine_float,
    refine_to_eps,
)


def test_initial_interval():
    assert initial_interval(F(27, 8)) == Interval(F(1), F(27, 8))
    assert initial_interval(F(1)) == Interval(F(1), F(1))
    assert initial_interval(F(1, 2)) == Interval(F(1, 2), F(1))


@pytest.mark.parametrize("bad", [F(0), F(-3)])
def test_initial_interval_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        initial_interval(bad)


def test_refine_one_step():
    trace = refine_to_eps(F(2), 2, F(1, 6))
    assert trace.iterations == 1
    assert trace.final == Interval(F(4, 3), F(3, 2))
    assert trace.terminated == WIDTH_REACHED


def test_refine_three_steps_with_exact_intermediate():
    trace = refine_to_eps(F(2), 2, F(1, 1000))
    assert trace.iterations == 3
    assert trace.intervals[2] == Interval(F(24, 17), F(17, 12))
    assert trace.widths[2] == F(1, 204)
    assert trace.widths[-1] <= F(1, 1000)


def test_refine_zero_iterations_on_degenerate_input():
    trace = refine_to_eps(F(1), 5, F(1, 10))
    assert trace.iterations == 0
    assert trace.final == Interval(F(1), F(1))


def test_refine_records_widths_consistently():
    trace = refine_to_eps(F(10), 3, F(1, 10 ** 4))
    assert len(trace.intervals) == trace.iterations + 1
    for iv, w in zip(trace.intervals, trace.widths):
        assert w == iv.width


def test_refine_max_iterations():
    trace = refine_to_eps(F(2), 2, F(1, 10 ** 40), max_iter=2)
    assert trace.terminated == MAX_ITERATIONS
    assert trace.iterations == 2
    assert trace.widths[-1] > F(1, 10 ** 40)


def test_termination_flag_matches_width():
    for eps in (F(1), F(1, 7), F(1, 10 ** 6)):
        trace = refine_to_eps(F(3), 3, eps)
        assert (trace.terminated == WIDTH_REACHED) == (trace.widths[-1] <= eps)


def test_refine_rejects_bad_inputs():
    with pytest.raises(ValueError):
        refine_to_eps(F(0), 2, F(1, 10))
    with pytest.raises(ValueError):
        refine_to_eps(F(2), 2, F(0))
    with pytest.raises(ValueError):
        refine_to_eps(F(2), 2, F(1, 10), max_iter=0)
    with pytest.raises(ValueError):
        refine_to_eps(F(2), 1, F(1, 10))
    with pytest.raises(ValueError):
        refine_to_eps(F(2), 2, F(1, 10), secant_newton(3))


def test_refine_propagates_denominator_zero_with_iteration():
    # p-denominator 2L - U is zero exactly at the initial interval of x=2
    m = MapCoefficients(2, (F(-1), 0, 0, 2, -1), (F(-1), 0, 0, 2, 0))
    with pytest.raises(DenominatorZeroError) as exc:
        refine_to_eps(F(2), 2, F(1, 10), m)
    assert exc.value.side == "lower"
    assert exc.value.iteration == 0


def test_refine_flags_noncontracting_map():
    # tiny p-denominator overshoots the lower endpoint far past U'
    m = MapCoefficients(2, (F(-1), 0, 0, F(1, 10), 0), (F(-1), 0, 0, 2, 0))
    with pytest.raises(NotContractingError) as exc:
        refine_to_eps(F(2), 2, F(1, 100), m)
    assert exc.value.iteration == 0
    assert exc.value.lo > exc.value.hi


# eps must respect the exact-arithmetic reality: endpoint digit counts grow
# by a factor of roughly 2n-1 per iteration, so deep refinement at large n
# is for the float path; dominated maps converge slower still and get a
# hard iteration cap here
@pytest.mark.parametrize("n,x,eps", [
    (2, F(2), F(1, 10 ** 8)),
    (3, F(27, 8), F(1, 10 ** 4)),
    (3, F(1, 3), F(1, 10 ** 4)),
    (5, F(2), F(1, 100)),
])
def test_enclosure_and_nesting(n, x, eps):
    def assert_enclosing_and_nested(trace):
        for iv in trace.intervals:
            assert pow_int(iv.lo, n) <= x <= pow_int(iv.hi, n)
        for prev, cur in zip(trace.intervals, trace.intervals[1:]):
            assert prev.lo <= cur.lo and cur.hi <= prev.hi

    trace = refine_to_eps(x, n, eps, secant_newton(n))
    assert trace.terminated == WIDTH_REACHED
    assert_enclosing_and_nested(trace)

    perturbed = perturbed_contracting_map(n, 17)
    assert_enclosing_and_nested(refine_to_eps(x, n, eps, perturbed, max_iter=4))


def test_bisection_iteration_count():
    trace = bisect_to_eps(F(2), 2, F(1, 1000))
    assert trace.iterations == 10  # unit start width, halves each step
    assert trace.terminated == WIDTH_REACHED


def test_bisection_zero_iterations():
    assert bisect_to_eps(F(1), 4, F(1, 10)).iterations == 0


def test_bisection_bracketing_invariant():
    for x in (F(2), F(27, 8), F(1, 5)):
        trace = bisect_to_eps(x, 3, F(1, 10 ** 6))
        for iv in trace.intervals:
            assert pow_int(iv.lo, 3) <= x <= pow_int(iv.hi, 3)


def test_both_solvers_contain_exact_root_of_perfect_power():
    c = F(3, 2)
    x = pow_int(c, 3)
    for trace in (refine_to_eps(x, 3, F(1, 10 ** 6)),
                  bisect_to_eps(x, 3, F(1, 10 ** 6))):
        for iv in trace.intervals:
            assert iv.lo <= c <= iv.hi


def test_trace_json():
    trace = refine_to_eps(F(2), 2, F(1, 6))
    data = trace.to_json()
    assert data == {
        "iterations": 1,
        "terminated": "width-reached",
        "final_interval": ["4/3", "3/2"],
        "final_width": "1/6",
    }
    full = trace.to_json(include_intervals=True)
    assert full["intervals"] == [["1", "2"], ["4/3", "3/2"]]
    assert full["widths"] == ["1", "1/6"]


# --- float fast path --------------------------------------------------------

def test_refine_float_sqrt2():
    trace = refine_float(2.0, 2, 1e-12)
    assert trace.terminated == WIDTH_REACHED
    assert abs(trace.lo - 1.4142135623730951) < 1e-11
    assert abs(trace.hi - 1.4142135623730951) < 1e-11
    assert trace.lo <= 2 ** 0.5 <= trace.hi


def test_refine_float_degenerate():
    trace = refine_float(1.0, 5, 1e-6)
    assert trace.iterations == 0
    assert trace.terminated == WIDTH_REACHED


def test_refine_float_iterations_match_rational_on_corpus():
    corpus = [
        (F(2), 2, (3, 6)),
        (F(3), 2, (3, 6)),
        (F(27, 8), 3, (3, 6)),
        (F(1, 2), 3, (3, 6)),
        (F(2), 5, (3,)),
    ]
    for x, n, eps_exps in corpus:
        for eps_exp in eps_exps:
            exact = refine_to_eps(x, n, F(1, 10 ** eps_exp))
            fast = refine_float(float(x), n, 10.0 ** -eps_exp)
            assert fast.iterations == exact.iterations, (x, n, eps_exp)


def test_refine_float_converges_past_double_resolution():
    # converged endpoints may cross by one ulp in round-to-nearest; the pair
    # is reported raw and the width bound is (vacuously) met
    trace = refine_float(2.0, 2, 1e-30)
    assert trace.terminated == WIDTH_REACHED
    assert abs(trace.lo - 1.4142135623730951) <= 3e-16
    assert abs(trace.hi - 1.4142135623730951) <= 3e-16


def test_refine_float_stall_detection():
    # an enormous q-denominator freezes the upper endpoint at double
    # precision: lo pins at the root and oscillates by one ulp, which the
    # width-based stall rule catches
    m = MapCoefficients(2, (F(-1), 0, 0, 1, 1), (F(-1), 0, 0, 10 ** 20, 0))
    trace = refine_float(2.0, 2, 1e-12, m)
    assert trace.terminated == STALLED
    assert trace.hi - trace.lo > 1e-12


def test_refine_float_overflow_is_reported():
    trace = refine_float(1e300, 7, 1e-6)
    assert trace.terminated == NON_FINITE


def test_refine_float_rejects_bad_inputs():
    with pytest.raises(ValueError):
        refine_float(0.0, 2, 1e-3)
    with pytest.raises(ValueError):
        refine_float(float("nan"), 2, 1e-3)
    with pytest.raises(ValueError):
        refine_float(2.0, 2, 0.0)


def test_bisect_float_matches_rational_iterations():
    fast = bisect_float(2.0, 2, 1e-3)
    exact = bisect_to_eps(F(2), 2, F(1, 1000))
    assert fast.iterations == exact.iterations == 10
