"""One test per acceptance criterion; each records a PASS/FAIL line."""

import subprocess
import sys
import time


from gncs import verify as V

DATA_COMMANDS = {
    "measure curves": ["measure", "--lambda", "1.5", "--r", "2", "3", "4"],
    "r=1 squeezing": ["squeeze", "--lambda", "-0.25", "0.25", "1", "--r", "1",
                 "--phi", "0", "pi/6", "pi/4", "pi/3", "pi/2", "--zsq-max", "0.96", "--steps", "48"],
    "r>=3 squeezing": ["squeeze", "--lambda", "-0.25", "0.25", "1", "--r", "3", "4", "5",
                 "--phi", "0", "--zsq-max", "16", "--steps", "64"],
    "r=4 phase scan": ["squeeze", "--lambda", "-0.25", "0.25", "1", "--r", "4",
                 "--phi", "0", "pi/6", "pi/4", "pi/3", "pi/2", "--zsq-max", "16", "--steps", "64"],
    "statistics": ["stats", "--lambda", "0", "--r", "2", "3", "4", "5", "--zsq-max", "20", "--steps", "80"],
}


def _record(log, result, seconds):
    log.append(f"{result.line()} ({seconds:.1f}s)")
    for w in result.warnings:
        print(f"  note: {w}")


def _run_check(log, check, limit=None):
    start = time.perf_counter()
    result = check()
    elapsed = time.perf_counter() - start
    _record(log, result, elapsed)
    print(result.line())
    assert result.passed, result.detail
    if limit is not None:
        assert elapsed < limit, f"took {elapsed:.1f}s (limit {limit}s)"


def test_01_commutators(acceptance_log):
    _run_check(acceptance_log, V.check_algebra)


def test_02_normalization(acceptance_log):
    _run_check(acceptance_log, V.check_normalization)


def test_03_eigenstate(acceptance_log):
    _run_check(acceptance_log, V.check_eigenstate)


def test_04_temporal_stability(acceptance_log):
    _run_check(acceptance_log, V.check_time_evolution)


def test_05_resolution_of_identity(acceptance_log):
    _run_check(acceptance_log, V.check_measure, limit=120)


def test_06_measure_curves(acceptance_log):
    _run_check(acceptance_log, V.check_measure_curves)


def test_07_position(acceptance_log):
    _run_check(acceptance_log, V.check_position)


def test_08_squeezing(acceptance_log):
    _run_check(acceptance_log, V.check_squeezing, limit=120)


def test_09_statistics(acceptance_log):
    _run_check(acceptance_log, V.check_statistics)


def test_10_closed_forms(acceptance_log):
    _run_check(acceptance_log, V.check_closed_forms)


def _cli(args):
    proc = subprocess.run([sys.executable, "-m", "gncs", *args], capture_output=True, check=False)
    return proc.returncode, proc.stdout


def test_11_determinism(acceptance_log):
    start = time.perf_counter()
    differing = []
    for name, args in [("verify", ["verify", "--quick"]), *DATA_COMMANDS.items()]:
        first, second = _cli(args), _cli(args)
        assert first[0] == 0, f"{name} exited with {first[0]}"
        if first != second:
            differing.append(name)
    # worker count must not change the bytes either
    parallel = _cli(DATA_COMMANDS["r>=3 squeezing"] + ["--workers", "3"])
    if parallel != _cli(DATA_COMMANDS["r>=3 squeezing"]):
        differing.append("r>=3 squeezing with workers")
    result = V.CheckResult(11, "determinism", not differing,
                           "verify and all data commands byte-identical" if not differing
                           else "differs: " + ", ".join(differing))
    _record(acceptance_log, result, time.perf_counter() - start)
    print(result.line())
    assert result.passed, result.detail
