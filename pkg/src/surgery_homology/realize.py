"""Realizing prescribed homology by compact 5-manifolds in R^5.

``plan`` assembles a boundary connected sum of one optional remove piece
(carrying the torsion) and copies of ``S^k x D^{5-k}``; ``verify`` checks the
result with the homology engine.  ``lift`` describes the special generic
map on a closed ``m``-manifold whose image is such a piece.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abgroup import FGAbelianGroup, GradedGroup, free, trivial
from . import spaces
from .spaces import (
    ASSERTED,
    YES,
    BoundaryConnSum,
    ConnSum,
    Disc,
    Product,
    SpaceExpr,
    Sphere,
    YZRemove,
    lens,
)

__all__ = [
    "RealizationTarget",
    "Recipe",
    "VerificationReport",
    "SpecialGenericDescriptor",
    "DimensionError",
    "NotLiftable",
    "plan",
    "verify",
    "nishioka_check",
    "sgm_candidate_check",
    "codim0_embeddable",
    "lift",
]


class DimensionError(ValueError):
    pass


class NotLiftable(ValueError):
    pass


@dataclass(frozen=True)
class RealizationTarget:
    """Wanted ``H_2 = G``, ``H_3 = Z^r1``, ``H_4 = Z^r2``."""

    G: FGAbelianGroup
    r1: int = 0
    r2: int = 0

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError("free ranks must be nonnegative")

    def expected(self) -> GradedGroup:
        return GradedGroup([free(1), trivial(), self.G, free(self.r1), free(self.r2), trivial()])

    def to_json(self) -> dict:
        return {"G": self.G.to_json(), "r1": self.r1, "r2": self.r2}


@dataclass(frozen=True)
class Recipe:
    pieces: tuple[SpaceExpr, ...]
    assembled: SpaceExpr
    mode: str = "default"

    def __str__(self) -> str:
        return str(self.assembled)


def plan(t: RealizationTarget, mode: str = "default") -> Recipe:
    """Recipe for ``t``.

    Torsion ``d_1 | ... | d_k`` goes into ``Y = lens(d_1,1) # ... # lens(d_k,1)``.
    In default mode the remove always uses the sphere base; in paper mode
    it uses the disc base whenever ``r2 >= 1`` and lets it account for one
    copy of ``Z`` in ``H_4``.
    """
    if mode not in ("default", "paper"):
        raise ValueError(f"unknown mode {mode!r}")
    pieces: list[SpaceExpr] = []
    r2 = t.r2
    factors = t.G.invariant_factors
    if factors:
        lenses = [lens(d, 1) for d in factors]
        y = lenses[0] if len(lenses) == 1 else ConnSum(tuple(lenses))
        if mode == "paper" and r2 >= 1:
            pieces.append(YZRemove(Disc(5), y))
            r2 -= 1
        else:
            pieces.append(YZRemove(Sphere(5), y))
    pieces += [Product(Sphere(2), Disc(3))] * t.G.free_rank
    pieces += [Product(Sphere(3), Disc(2))] * t.r1
    pieces += [Product(Sphere(4), Disc(1))] * r2
    assembled = BoundaryConnSum(tuple(pieces)) if pieces else Disc(5)
    return Recipe(tuple(pieces), assembled, mode)


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    homology: GradedGroup
    expected: GradedGroup
    degree_ok: tuple[bool, ...]
    simply_connected: str
    notes: tuple[str, ...] = ()

    def failing_degrees(self) -> list[int]:
        return [j for j, ok in enumerate(self.degree_ok) if not ok]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "degrees": [
                {"degree": j, "got": self.homology[j].to_json(), "expected": self.expected[j].to_json(), "ok": ok}
                for j, ok in enumerate(self.degree_ok)
            ],
            "simply_connected": self.simply_connected,
            "notes": list(self.notes),
        }


def verify(r: Recipe, t: RealizationTarget) -> VerificationReport:
    a = spaces.attrs(r.assembled)
    h = spaces.homology(r.assembled)
    want = t.expected()
    ok = tuple(h[j] == want[j] for j in range(6))
    notes = []
    if a.dim != 5:
        notes.append(f"assembled manifold has dimension {a.dim}")
    sc_ok = a.simply_connected in (YES, ASSERTED)
    if not sc_ok:
        notes.append("assembled manifold is not simply connected")
    passed = all(ok) and sc_ok and a.dim == 5 and len(h) <= 6
    return VerificationReport(passed, h, want, ok, a.simply_connected, tuple(notes) + a.assumptions)


def nishioka_check(h: GradedGroup, dimP: int) -> dict:
    """Freeness of ``H_{dimP-2}`` and ``H_{dimP-1}``.

    Valid for compact connected orientable ``P`` with ``H_1 = 0`` and
    ``dimP >= 2``; those hypotheses are the caller's to assert and are
    echoed in the report.
    """
    if dimP < 2:
        raise ValueError("dimension must be >= 2")
    bad = [j for j in (dimP - 2, dimP - 1) if not h[j].is_free]
    return {
        "passed": not bad,
        "dim": dimP,
        "offending_degrees": bad,
        "hypotheses": ["compact", "connected", "orientable", "H_1 = 0"],
        "h1_trivial": h[1].is_trivial,
    }


def sgm_candidate_check(h: GradedGroup) -> dict:
    """Homological necessary condition for a closed simply connected
    5-manifold to admit a special generic map into R^3 or R^4.

    Passing means only "not ruled out": such a manifold must look like
    ``S^5`` or a connected sum of ``S^3``-bundles over ``S^2`` in homology.
    """
    reasons = []
    if not h[2].is_free:
        reasons.append("H_2 has torsion")
    if not h[1].is_trivial or not h[4].is_trivial:
        reasons.append("H_1 and H_4 must vanish")
    if h[3] != h[2] or not h[3].is_free:
        reasons.append("H_3 must be free of the same rank as H_2")
    if h[0] != free(1) or h[5] != free(1):
        reasons.append("H_0 and H_5 must be Z")
    return {
        "verdict": "impossible" if reasons else "possible",
        "reasons": reasons,
        "necessary_only": True,
    }


def codim0_embeddable(W: SpaceExpr) -> bool:
    """Whether ``W`` is a recognized form that embeds in ``R^dim W``.

    Discs, ``S^k x D^l`` (``l >= 1``), removes from spheres and discs, and
    boundary connected sums of these.  Removes rely on the standing
    assumption that ``Y`` embeds with trivial normal bundle.
    """
    if isinstance(W, Disc):
        return True
    if isinstance(W, Product):
        pair = (W.a, W.b)
        return any(isinstance(x, (Sphere, Disc)) and isinstance(z, Disc) for x, z in (pair, pair[::-1]))
    if isinstance(W, YZRemove):
        return True
    if isinstance(W, BoundaryConnSum):
        return all(codim0_embeddable(p) for p in W.parts)
    return False


@dataclass(frozen=True)
class SpecialGenericDescriptor:
    m: int
    n: int
    W: SpaceExpr
    predicted: GradedGroup
    singular_set: str
    singular_set_dim: int
    singular_set_embedded: bool
    bundle_flags: dict = field(default_factory=dict)
    simply_connected: str = YES

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "W": str(self.W),
            "predicted": self.predicted.to_rows(),
            "predicted_range": [0, self.m - self.n],
            "singular_set": self.singular_set,
            "singular_set_dim": self.singular_set_dim,
            "singular_set_embedded": self.singular_set_embedded,
            "bundle_flags": dict(self.bundle_flags),
            "simply_connected": self.simply_connected,
        }


def lift(W: SpaceExpr, m: int, embeddable: bool | None = None) -> SpecialGenericDescriptor:
    """Describe a special generic map ``M^m -> R^n`` with image ``W``.

    Only ``H_j(M) = H_j(W)`` for ``0 <= j <= m - n`` is predicted; nothing is
    said about higher degrees.
    """
    a = spaces.attrs(W)
    n = a.dim
    if m <= n:
        raise DimensionError(f"need m > dim W = {n}, got m = {m}")
    if a.closed:
        raise NotLiftable(f"{W} has empty boundary")
    if not a.connected:
        raise NotLiftable(f"{W} is not connected")
    if embeddable is None:
        embeddable = codim0_embeddable(W)
    if not embeddable:
        raise NotLiftable(f"{W} is not flagged as embeddable in R^{n}")
    h = spaces.homology(W)
    predicted = GradedGroup(h[j] for j in range(m - n + 1))
    return SpecialGenericDescriptor(
        m=m,
        n=n,
        W=W,
        predicted=predicted,
        singular_set=f"boundary of {W}",
        singular_set_dim=n - 1,
        singular_set_embedded=True,
        bundle_flags={
            "collar_disc_bundle_trivial": True,
            "collar_disc_fiber_dim": m - n + 1,
            "interior_sphere_bundle_trivial": True,
            "interior_sphere_fiber_dim": m - n,
        },
        simply_connected=a.simply_connected,
    )
