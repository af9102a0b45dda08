"""Seeded batch checks run by ``verify suite`` and the acceptance tests."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import gcd
from typing import Callable

from . import chain, mvsolver, realize, spaces
from .abgroup import (
    FGAbelianGroup,
    GradedGroup,
    IntegerMatrix,
    cokernel,
    direct_sum,
    smith_normal_form,
    tensor,
    tor,
)
from .spaces import ConnSum, Disc, Sphere, YZRemove, lens

__all__ = [
    "CaseResult",
    "SuiteResult",
    "SuiteReport",
    "minors_invariant_factors",
    "random_matrix",
    "random_target",
    "thm5_family",
    "thm5_table",
    "snf_suite",
    "chain_suite",
    "thm5_suite",
    "duality_suite",
    "realization_suite",
    "discrepancy_suite",
    "verify_suite",
]


@dataclass(frozen=True)
class CaseResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    cases: list[CaseResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.cases.append(CaseResult(name, bool(ok), detail))

    @property
    def passed(self) -> int:
        return sum(c.ok for c in self.cases)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if not c.ok]

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "total": len(self.cases),
            "ok": self.ok,
            "warnings": list(self.warnings),
            "failures": [{"case": c.name, "detail": c.detail} for c in self.failures()],
        }


@dataclass
class SuiteReport:
    seed: int
    suites: list[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def to_json(self) -> dict:
        return {"seed": self.seed, "ok": self.ok, "suites": [s.to_json() for s in self.suites]}


# ---------------------------------------------------------------------------
# independent oracles and generators
# ---------------------------------------------------------------------------


def minors_invariant_factors(A: IntegerMatrix) -> tuple[int, list[int]]:
    """``(rank, invariant factors)`` from gcds of ``k x k`` minors.

    ``d_k / d_{k-1}`` with ``d_k`` the gcd of all ``k x k`` minors; unit
    factors included.  No Smith form involved.
    """
    m, n = A.shape
    prev, factors = 1, []
    for k in range(1, min(m, n) + 1):
        # d_k is a multiple of d_{k-1} * s_{k-1}; stop scanning once reached
        floor = prev * (factors[-1] if factors else 1)
        g = 0
        for rows in itertools.combinations(range(m), k):
            sub = A.select_rows(rows)
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, sub.select_columns(cols).det())
                if g == floor:
                    break
            if g == floor:
                break
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return len(factors), factors


def random_matrix(rng: random.Random, max_dim: int = 6, bound: int = 20) -> IntegerMatrix:
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    if rng.random() < 0.3:
        # low-rank products exercise torsion and zero diagonals
        k = rng.randint(1, min(m, n))
        b = 4
        L = IntegerMatrix.from_rows([[rng.randint(-b, b) for _ in range(k)] for _ in range(m)])
        R = IntegerMatrix.from_rows([[rng.randint(-b, b) for _ in range(n)] for _ in range(k)])
        P = L @ R
        return IntegerMatrix.from_rows([[max(-bound, min(bound, x)) for x in r] for r in P.entries], cols=n)
    return IntegerMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)])


def random_target(rng: random.Random, max_factors: int = 4, max_factor: int = 16, max_rank: int = 5):
    orders = [rng.randint(2, max_factor) for _ in range(rng.randint(0, max_factors))]
    G = FGAbelianGroup.from_orders(rng.randint(0, max_rank), orders)
    return realize.RealizationTarget(G, rng.randint(0, max_rank), rng.randint(0, max_rank))


def thm5_family() -> list:
    fam = [lens(p, 1) for p in range(2, 10)]
    fam += [ConnSum((lens(p, 1), lens(q, 1))) for p, q in itertools.combinations_with_replacement(range(2, 6), 2)]
    fam.append(Sphere(3))
    return fam


def _check_snf(A: IntegerMatrix) -> str:
    s = smith_normal_form(A)
    if s.U @ A @ s.V != s.D:
        return "U A V != D"
    if abs(s.U.det()) != 1 or abs(s.V.det()) != 1:
        return "transform not unimodular"
    D = s.D
    if any(D[i, j] for i in range(D.rows) for j in range(D.cols) if i != j):
        return "D not diagonal"
    diag = s.diagonal
    if any(d < 0 for d in diag):
        return "negative diagonal entry"
    nz = [d for d in diag if d]
    if diag[: len(nz)] != tuple(nz):
        return "zeros not trailing"
    if any(nz[i + 1] % nz[i] for i in range(len(nz) - 1)):
        return "divisibility chain broken"
    r, facs = minors_invariant_factors(A)
    oracle = FGAbelianGroup.from_orders(A.rows - r, facs)
    if cokernel(A) != oracle or list(nz) != facs:
        return f"cokernel {cokernel(A)} != minors oracle {oracle}"
    return ""


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def snf_suite(rng: random.Random, count: int = 300) -> SuiteResult:
    res = SuiteResult("snf")
    for i in range(count):
        A = random_matrix(rng)
        err = _check_snf(A)
        res.add(f"matrix {i} {A.shape}", not err, err)
    return res


def _group_kunneth(h1: GradedGroup, h2: GradedGroup) -> GradedGroup:
    top = h1.top + h2.top
    return GradedGroup(
        direct_sum(
            *[tensor(h1[i], h2[n - i]) for i in range(n + 1)],
            *[tor(h1[i], h2[n - 1 - i]) for i in range(n)],
        )
        for n in range(top + 1)
    )


def chain_suite(rng: random.Random, pairs: int = 20) -> SuiteResult:
    res = SuiteResult("chain")
    for p in range(2, 10):
        h = chain.homology(chain.build(chain.CellModel("lens", (p, 1))))
        want = GradedGroup.of("Z", f"Z/{p}", "0", "Z")
        res.add(f"lens({p},1)", h == want and len(h) == 4, str(h))
    models = [chain.CellModel("point")]
    models += [chain.CellModel("sphere", (k,)) for k in range(1, 5)]
    models += [chain.CellModel("lens", (p, 1)) for p in range(2, 10)]
    for m1, m2 in itertools.product(models, repeat=2):
        C1, C2 = chain.build(m1), chain.build(m2)
        T = chain.tensor(C1, C2)
        h = chain.homology(T)
        want = _group_kunneth(chain.homology(C1), chain.homology(C2))
        euler_ok = T.euler_characteristic() == h.euler_characteristic()
        res.add(f"tensor {m1.name}{m1.params} {m2.name}{m2.params}", h == want and euler_ok, f"{h} vs {want}")
    for i in range(pairs):
        p, q = rng.randint(1, 12), rng.randint(1, 12)
        C = chain.connected_sum_complex(
            chain.build(chain.CellModel("lens", (p, 1))), chain.build(chain.CellModel("lens", (q, 1))), 3
        )
        h = chain.homology(C)
        y = ConnSum((lens(p, 1), lens(q, 1)))
        want = spaces.homology(y)
        res.add(f"connsum lens({p},1) lens({q},1)", h == want, f"{h} vs {want}")
    return res


def thm5_table(y, base, boundary_E: Callable | None = None) -> list[dict]:
    """Per-degree comparison of the formula engine against the solver."""
    boundary_E = boundary_E or spaces.boundary_E_homology
    n = base.k
    c = n - spaces.attrs(y).dim
    f_dE = boundary_E(y, c)
    s_dE = mvsolver.boundary_E_from_solver(y, c)
    rel = spaces.boundary_E_homology(y, c, reading="relative")
    f_X = spaces.homology(YZRemove(base, y))
    s_X = mvsolver.solve_remove(base, s_dE, spaces.punctured_homology(y))
    rows = []
    for j in range(n + 1):
        rows.append({
            "degree": j,
            "boundary_formula": f_dE[j],
            "boundary_solver": s_dE[j],
            "boundary_relative": rel[j],
            "remove_formula": f_X[j],
            "remove_solver": s_X[j],
            "agree": f_dE[j] == s_dE[j] and f_X[j] == s_X[j],
            "relative_agrees": rel[j] == s_dE[j],
        })
    return rows


def thm5_suite(boundary_E: Callable | None = None) -> SuiteResult:
    res = SuiteResult("thm5")
    for y in thm5_family():
        for base in (Disc(5), Sphere(5)):
            rows = thm5_table(y, base, boundary_E)
            bad = [r["degree"] for r in rows if not r["agree"]]
            res.add(f"yzrem({base}, {y})", not bad, f"disagree at degrees {bad}" if bad else "")
    for p in range(2, 10):
        got_d = spaces.homology(YZRemove(Disc(5), lens(p, 1)))
        got_s = spaces.homology(YZRemove(Sphere(5), lens(p, 1)))
        res.add(f"row D5 lens({p},1)", got_d == GradedGroup.of("Z", "0", f"Z/{p}", "0", "Z", "0"), str(got_d))
        res.add(f"row S5 lens({p},1)", got_s == GradedGroup.of("Z", "0", f"Z/{p}", "0", "0", "0"), str(got_s))
    return res


def duality_suite() -> SuiteResult:
    res = SuiteResult("duality")
    for y in thm5_family():
        c = 2
        n = spaces.attrs(y).dim + c
        w = mvsolver.build_boundary_E(y, c)
        h = mvsolver.solve_les_window(w)
        ok = all(
            h[j].free_rank == h[n - 1 - j].free_rank
            and FGAbelianGroup(0, h[j].invariant_factors) == FGAbelianGroup(0, h[n - 2 - j].invariant_factors)
            for j in range(n)
        )
        res.add(f"duality dE({y})", ok, str(h))
        res.add(f"rank check dE({y})", mvsolver.exactness_rank_check(mvsolver.flatten(w, h)))
    return res


def realization_suite(rng: random.Random, count: int = 200) -> SuiteResult:
    res = SuiteResult("thm6")
    if count == 0:
        res.warnings.append("no targets sampled; vacuous pass")
    for i in range(count):
        t = random_target(rng)
        hs = []
        for mode in ("default", "paper"):
            r = realize.plan(t, mode)
            rep = realize.verify(r, t)
            res.add(f"target {i} {mode}", rep.passed, f"{r} fails at {rep.failing_degrees()}")
            nish = realize.nishioka_check(rep.homology, 5)
            res.add(f"target {i} {mode} nishioka", nish["passed"], str(nish["offending_degrees"]))
            hs.append(rep.homology)
        res.add(f"target {i} modes agree", hs[0] == hs[1])
    return res


def discrepancy_suite() -> SuiteResult:
    """The relative reading of dE must differ from the solver only in degree n-2."""
    res = SuiteResult("relative-reading")
    for p in range(2, 10):
        y = lens(p, 1)
        rows = thm5_table(y, Disc(5))
        diff = [r["degree"] for r in rows if not r["relative_agrees"]]
        at = rows[3]
        ok = diff == [3] and at["boundary_relative"] == FGAbelianGroup(1) and at["boundary_solver"].is_trivial
        res.add(f"lens({p},1)", ok, f"differs at {diff}")
    return res


def verify_suite(seed: int = 0, targets: int = 200, matrices: int = 300, boundary_reading: str = "absolute") -> SuiteReport:
    """Run every suite with one seeded generator; order of suites is fixed."""
    rng = random.Random(seed)

    def boundary_E(y, c):
        return spaces.boundary_E_homology(y, c, reading=boundary_reading)

    suites = [
        snf_suite(rng, matrices),
        chain_suite(rng),
        thm5_suite(boundary_E),
        duality_suite(),
        realization_suite(rng, targets),
        discrepancy_suite(),
    ]
    return SuiteReport(seed, suites)
