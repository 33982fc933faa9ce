import json
import os
import subprocess
import sys

import pytest

SN3_SPEC = {
    "n": 3,
    "p": ["-1", "0", "0", "0", "1", "1", "1"],
    "q": ["-1", "0", "0", "0", "3", "0", "0"],
}
COUNTEREXAMPLE_SPEC = {
    "n": 3,
    "p": ["-1", "0", "0", "0", "2", "1/2", "1"],
    "q": ["-1", "0", "0", "0", "3", "0", "0"],
}
PERTURBED_SPEC = {
    "n": 3,
    "p": ["-1", "0", "0", "0", "2", "1", "1"],
    "q": ["-1", "0", "0", "0", "4", "0", "0"],
}


def run_cli(*argv, env_extra=None):
    env = dict(os.environ)
    env.pop("ROOT_ENCLOSE_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "root_enclose.cli", *argv],
        capture_output=True, text=True, env=env)


def test_root_contains_cube_root():
    out = run_cli("root", "--x", "27/8", "--n", "3", "--eps", "1/100", "--json")
    assert out.returncode == 0
    data = json.loads(out.stdout)
    lo, hi = data["final_interval"]
    from fractions import Fraction as F
    assert F(lo) <= F(3, 2) <= F(hi)
    assert data["terminated"] == "width-reached"


def test_root_exact_one_step():
    out = run_cli("root", "--x", "2", "--n", "2", "--eps", "1/6")
    assert out.returncode == 0
    assert "[4/3, 3/2]" in out.stdout
    assert "iterations: 1" in out.stdout


def test_root_rejects_nonpositive_x():
    out = run_cli("root", "--x", "0", "--n", "3", "--eps", "1")
    assert out.returncode == 2


def test_root_rejects_garbage_eps():
    out = run_cli("root", "--x", "2", "--n", "2", "--eps", "0.001")
    assert out.returncode == 2


def test_root_eps_shorthand_and_trace():
    out = run_cli("root", "--x", "2", "--n", "2", "--eps", "1e-3",
                  "--trace", "--json")
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["iterations"] == 3
    assert data["intervals"][2] == ["24/17", "17/12"]


def test_root_float_backend():
    out = run_cli("root", "--x", "2", "--n", "2", "--eps", "1e-12",
                  "--backend", "float", "--json")
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["backend"] == "float"
    lo = float(data["final_interval"][0])
    assert abs(lo - 1.4142135623730951) < 1e-11


def test_root_max_iter_exit_code():
    out = run_cli("root", "--x", "2", "--n", "2", "--eps", "1e-9",
                  "--max-iter", "1")
    assert out.returncode == 1
    assert "max-iterations" in out.stdout


def test_root_denominator_zero_is_a_failure(write_map):
    zero_den = {"n": 2, "p": ["-1", "0", "0", "2", "-1"],
                "q": ["-1", "0", "0", "2", "0"]}
    out = run_cli("root", "--x", "2", "--n", "2", "--eps", "1/10",
                  "--map", write_map(zero_den))
    assert out.returncode == 1
    assert "denominator" in out.stderr


def test_root_prints_endpoints_beyond_digit_guard():
    # endpoints here carry tens of thousands of digits; printing them must
    # not trip the interpreter's int-to-str conversion limit
    out = run_cli("root", "--x", "10", "--n", "3", "--eps", "1e-8")
    assert out.returncode == 0
    assert "iterations:" in out.stdout
    assert len(out.stdout) > 10_000


def test_check_secant_newton_passes(write_map):
    out = run_cli("check", write_map(SN3_SPEC), "--samples", "300")
    assert out.returncode == 0
    assert "canonical form: yes" in out.stdout
    assert "passed-on-samples" in out.stdout


def test_check_counterexample_witness(write_map):
    out = run_cli("check", write_map(COUNTEREXAMPLE_SPEC), "--samples", "300")
    assert out.returncode == 1
    assert "witness: L=1  r=4  U=4  x=64" in out.stdout
    assert "83/20" in out.stdout
    assert "L' <= r" in out.stdout


def test_check_rejects_wrong_length(write_map):
    bad = {**SN3_SPEC, "p": ["-1", "0", "1"]}
    out = run_cli("check", write_map(bad))
    assert out.returncode == 2
    assert "7" in out.stderr


def test_check_json_schema(write_map):
    out = run_cli("check", write_map(COUNTEREXAMPLE_SPEC),
                  "--samples", "300", "--json")
    assert out.returncode == 1
    data = json.loads(out.stdout)
    assert data["canonical"]["is_canonical"] is True
    assert data["denominator_bounds"]["outcome"] == "falsified"
    assert data["contraction"]["witness"]["lhs"] == "83/20"


def test_compare_reflexive(write_map):
    out = run_cli("compare", write_map(SN3_SPEC), "--samples", "200")
    assert out.returncode == 0
    assert "200 (100.0%)" in out.stdout
    assert "proper subset: 0 (0.0%)" in out.stdout


def test_compare_certified_perturbed_map(write_map):
    out = run_cli("compare", write_map(PERTURBED_SPEC), "--samples", "200",
                  "--json")
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["subset_count"] == data["samples"] == 200
    assert data["violations"] == []
    assert data["proper_subset_count"] > 0


def test_compare_counterexample_reports_equality_point(write_map):
    out = run_cli("compare", write_map(COUNTEREXAMPLE_SPEC), "--samples", "200")
    assert out.returncode == 1  # not contracting, so dominance fails somewhere
    assert "(L, r, U) = (1, 3/2, 2)" in out.stdout


def test_locus_outputs(write_map):
    out = run_cli("locus", write_map(COUNTEREXAMPLE_SPEC))
    assert out.returncode == 0
    assert "f_p = L^2*x - 1/2*L*U*x - L^5 + 1/2*L^4*U" in out.stdout
    assert "f_q = 0" in out.stdout


def test_locus_evaluation(write_map):
    out = run_cli("locus", write_map(COUNTEREXAMPLE_SPEC),
                  "--L", "1", "--U", "3", "--x", "27")
    assert out.returncode == 0
    assert "f_p = -13" in out.stdout
    assert "outputs coincide with secant-newton: no" in out.stdout


def test_locus_requires_full_point(write_map):
    out = run_cli("locus", write_map(COUNTEREXAMPLE_SPEC), "--L", "1")
    assert out.returncode == 2


def test_locus_rejects_noncanonical(write_map):
    bad = {**SN3_SPEC, "p": ["0", "0", "0", "0", "1", "1", "1"]}
    out = run_cli("locus", write_map(bad))
    assert out.returncode == 2


def test_counterexample_reproduction():
    out = run_cli("counterexample")
    assert out.returncode == 0
    assert out.stdout.count("[75/56, 155/96]") == 2
    assert "equality locus value: (0, 0)" in out.stdout
    assert "identical: yes" in out.stdout


def test_counterexample_locus_flag():
    out = run_cli("counterexample", "--locus", "--json")
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["identical"] is True
    assert data["map_output"] == ["75/56", "155/96"]
    assert data["f_p"] == "L^2*x - 1/2*L*U*x - L^5 + 1/2*L^4*U"


def test_counterexample_unrepaired_q0():
    out = run_cli("counterexample", "--unrepaired-q0")
    assert out.returncode == 1
    assert "corner" in out.stdout
    assert "witness" in out.stdout


def test_bench_default_csv():
    out = run_cli("bench")
    assert out.returncode == 0
    lines = out.stdout.strip().split("\n")
    assert lines[0] == "map,backend,n,x,eps,iterations,final_width,wall_time_ns"
    assert all(len(line.split(",")) == 8 for line in lines)
    sn_rows = [l for l in lines[1:] if l.startswith("secant-newton")]
    bi_rows = [l for l in lines[1:] if l.startswith("bisection")]
    assert all(row.split(",")[5] == "3" for row in sn_rows)
    assert all(row.split(",")[5] == "10" for row in bi_rows)


def test_bench_unknown_map(tmp_path):
    spec = tmp_path / "bench.json"
    spec.write_text(json.dumps({
        "maps": ["newton-raphson"], "xs": ["2"], "ns": [2],
        "epses": ["1/10"], "backend": "rational", "reps": 1}))
    out = run_cli("bench", str(spec))
    assert out.returncode == 2
    assert "unknown map name" in out.stderr


def test_bench_json_format_and_out_file(tmp_path):
    target = tmp_path / "rows.json"
    out = run_cli("bench", "--format", "json", "--out", str(target))
    assert out.returncode == 0
    assert out.stdout == ""
    rows = json.loads(target.read_text())
    assert {row["map"] for row in rows} == {"secant-newton", "bisection"}


def test_unknown_subcommand_exits_2():
    out = run_cli("frobnicate")
    assert out.returncode == 2


def test_json_output_byte_identical_for_same_seed(write_map):
    path = write_map(COUNTEREXAMPLE_SPEC)
    runs = [run_cli("check", path, "--samples", "150", "--seed", "9", "--json")
            for _ in range(2)]
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].returncode == runs[1].returncode == 1


def test_seed_env_variable_is_default(write_map):
    path = write_map(SN3_SPEC)
    via_flag = run_cli("compare", path, "--samples", "120", "--seed", "77", "--json")
    via_env = run_cli("compare", path, "--samples", "120",
                      env_extra={"ROOT_ENCLOSE_SEED": "77"})
    via_env_json = run_cli("compare", path, "--samples", "120", "--json",
                           env_extra={"ROOT_ENCLOSE_SEED": "77"})
    assert via_flag.returncode == via_env.returncode == 0
    assert via_flag.stdout == via_env_json.stdout


def test_bad_seed_env_is_usage_error(write_map):
    out = run_cli("compare", write_map(SN3_SPEC), "--samples", "50",
                  env_extra={"ROOT_ENCLOSE_SEED": "banana"})
    assert out.returncode == 2
    assert "ROOT_ENCLOSE_SEED" in out.stderr


def test_jobs_flag_does_not_change_results(write_map):
    path = write_map(COUNTEREXAMPLE_SPEC)
    seq = run_cli("check", path, "--samples", "150", "--json")
    par = run_cli("check", path, "--samples", "150", "--jobs", "2", "--json")
    assert seq.stdout == par.stdout
