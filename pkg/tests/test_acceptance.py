"""Acceptance criteria, one test per criterion.

Each test prints a ``PASS``/``FAIL`` line with its runtime.  Under pytest
the lines bypass output capture; ``python3 tests/test_acceptance.py`` runs
the same checks without pytest and prints only the summary lines.
"""

import json
import random
import time

import pytest

from surgery_homology import mvsolver, realize, spaces, suites
from surgery_homology.abgroup import FGAbelianGroup, GradedGroup
from surgery_homology.cli import run
from surgery_homology.spaces import Disc, Sphere, YZRemove, lens

SEED = 0


def _report(label, ok, elapsed, limit=None, detail=""):
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    bound = f" (limit {limit:.0f}s)" if limit is not None else ""
    line = f"{status}  {label}: {elapsed:.2f}s{bound}"
    if detail and status == "FAIL":
        line += f"  {detail}"
    return status == "PASS", line


def _suite_detail(res):
    return "; ".join(f"{c.name}: {c.detail}" for c in res.failures()[:5])


def criterion_1():
    start = time.perf_counter()
    res = suites.realization_suite(random.Random(SEED), 200)
    ok = res.ok and res.passed == 200 * 5
    return _report("1 realization round trip, 200 targets, both modes", ok,
                   time.perf_counter() - start, 10, _suite_detail(res))


def criterion_2():
    start = time.perf_counter()
    bad = []
    family = suites.thm5_family()
    for y in family:
        for base in (Disc(5), Sphere(5)):
            formula = spaces.homology(YZRemove(base, y))
            c = 5 - spaces.attrs(y).dim
            solver = mvsolver.solve_remove(base, mvsolver.boundary_E_from_solver(y, c),
                                           spaces.punctured_homology(y))
            if any(formula[j] != solver[j] for j in range(6)):
                bad.append(f"yzrem({base}, {y})")
    for p in range(2, 10):
        if spaces.homology(YZRemove(Disc(5), lens(p, 1))) != GradedGroup.of("Z", "0", f"Z/{p}", "0", "Z", "0"):
            bad.append(f"row D5 lens({p},1)")
        if spaces.homology(YZRemove(Sphere(5), lens(p, 1))) != GradedGroup.of("Z", "0", f"Z/{p}", "0", "0", "0"):
            bad.append(f"row S5 lens({p},1)")
    ok = not bad and len(family) == 8 + 10 + 1
    return _report("2 remove formula vs Mayer-Vietoris solver", ok, time.perf_counter() - start, None, str(bad))


def criterion_3():
    start = time.perf_counter()
    res = suites.chain_suite(random.Random(SEED), 20)
    return _report("3 chain oracle concordance", res.ok, time.perf_counter() - start, 5, _suite_detail(res))


def criterion_4():
    start = time.perf_counter()
    res = suites.snf_suite(random.Random(SEED), 300)
    ok = res.ok and len(res.cases) == 300
    return _report("4 Smith normal form vs gcd-of-minors, 300 matrices", ok,
                   time.perf_counter() - start, 10, _suite_detail(res))


def criterion_5():
    start = time.perf_counter()
    res = suites.duality_suite()
    return _report("5 duality and exactness rank checks", res.ok, time.perf_counter() - start, None,
                   _suite_detail(res))


def criterion_6():
    start = time.perf_counter()
    rng = random.Random(SEED)
    ok = True
    for _ in range(200):
        t = suites.random_target(rng)
        for mode in ("default", "paper"):
            h = realize.verify(realize.plan(t, mode), t).homology
            ok = ok and realize.nishioka_check(h, 5)["passed"]
    fixture = realize.nishioka_check(GradedGroup.parse("Z;0;Z/3;Z/3;Z;0"), 5)
    ok = ok and not fixture["passed"] and fixture["offending_degrees"] == [3]
    return _report("6 freeness criterion on realized outputs and failing fixture", ok,
                   time.perf_counter() - start)


def criterion_7():
    start = time.perf_counter()
    res = suites.discrepancy_suite()
    ok = res.ok
    detail = _suite_detail(res)
    for p in range(2, 10):
        rows = suites.thm5_table(lens(p, 1), Disc(5))
        diff = [r["degree"] for r in rows if not r["relative_agrees"]]
        at = rows[3]
        if diff != [3] or at["boundary_relative"] != FGAbelianGroup(1) or not at["boundary_solver"].is_trivial:
            ok = False
            detail += f" lens({p},1) differs at {diff}"
    cli_ok = _cli_reports_discrepancy()
    return _report("7 relative reading differs only at degree n-2", ok and cli_ok,
                   time.perf_counter() - start, None, detail + ("" if cli_ok else " CLI report missing"))


def _cli_reports_discrepancy():
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = run(["verify", "thm5", "--y", "lens(3,1)", "--base", "D5", "--show-relative-reading",
                    "--format", "json"])
    obj = json.loads(buf.getvalue())
    diff = [r["degree"] for r in obj["degrees"] if not r["relative_agrees"]]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        run(["verify", "thm5", "--y", "lens(3,1)", "--base", "D5", "--show-relative-reading"])
    return code == 0 and diff == [3] and "differs from the solver at degrees [3]" in buf.getvalue()


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 8)])
def test_criterion(criterion, capsys):
    ok, line = criterion()
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
