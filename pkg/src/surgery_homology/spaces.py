"""Manifold expressions and their closed-form integral homology.

An expression is built from spheres, discs and lens spaces with products,
connected sums, boundary connected sums and the Y/Z-remove (with Z a
single point)::

    >>> e = parse("yzrem(D5, lens(3,1))")
    >>> homology(e).to_text()
    'Z; 0; Z/3; 0; Z; 0'

Every node validates its own constraints on construction, so a
``SpaceExpr`` in hand is always well formed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Union

from .abgroup import (
    FGAbelianGroup,
    GradedGroup,
    cyclic,
    direct_sum,
    free,
    tensor,
    tor,
    trivial,
)

__all__ = [
    "Sphere",
    "Disc",
    "Lens",
    "Product",
    "ConnSum",
    "BoundaryConnSum",
    "YZRemove",
    "SpaceExpr",
    "SpaceAttrs",
    "KunnethSplit",
    "ParseError",
    "ValidationError",
    "YES",
    "NO",
    "ASSERTED",
    "lens",
    "parse",
    "attrs",
    "homology",
    "punctured_homology",
    "relative_punctured_homology",
    "boundary_E_homology",
    "kunneth_split",
]

YES, NO, ASSERTED = "yes", "no", "asserted-by-paper"

TRIVIAL_NORMAL_BUNDLE = "embedding of Y with trivial normal bundle assumed, not verified"
SPHERE_BASE_CAVEAT = "simple connectivity of the sphere-base remove is extrapolated from the disc case"


class ParseError(ValueError):
    pass


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class SpaceAttrs:
    dim: int
    closed: bool
    orientable: bool
    connected: bool
    simply_connected: str
    assumptions: tuple[str, ...] = ()
    caveats: tuple[str, ...] = ()

    @property
    def has_boundary(self) -> bool:
        return not self.closed

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "closed": self.closed,
            "orientable": self.orientable,
            "connected": self.connected,
            "simply_connected": self.simply_connected,
            "assumptions": list(self.assumptions),
            "caveats": list(self.caveats),
        }


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sphere:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"S{self.k}: sphere dimension must be >= 1")

    def __str__(self):
        return f"S{self.k}"


@dataclass(frozen=True)
class Disc:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"D{self.k}: disc dimension must be >= 1")

    def __str__(self):
        return f"D{self.k}"


@dataclass(frozen=True)
class Lens:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p < 1 or not 1 <= q < max(p, 2) or gcd(p, q) != 1:
            raise ValidationError(f"lens({p},{q}): need p >= 1, 1 <= q < max(p, 2), gcd(p, q) = 1")

    def __str__(self):
        return f"lens({self.p},{self.q})"


@dataclass(frozen=True)
class Product:
    a: "SpaceExpr"
    b: "SpaceExpr"

    def __str__(self):
        return f"prod({self.a},{self.b})"


@dataclass(frozen=True)
class ConnSum:
    parts: tuple["SpaceExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValidationError("connsum needs at least one argument")
        dims = [attrs(p).dim for p in self.parts]
        for p in self.parts:
            a = attrs(p)
            if not (a.closed and a.connected and a.orientable):
                raise ValidationError(f"connsum argument {p} must be closed, connected and orientable")
        if len(set(dims)) > 1:
            raise ValidationError(f"connsum dimension mismatch: {' vs '.join(map(str, dims))}")

    def __str__(self):
        return "connsum(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class BoundaryConnSum:
    parts: tuple["SpaceExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValidationError("bcs needs at least one argument")
        dims = [attrs(p).dim for p in self.parts]
        for p in self.parts:
            a = attrs(p)
            if a.closed:
                raise ValidationError(f"bcs argument {p} has empty boundary")
            if not a.connected:
                raise ValidationError(f"bcs argument {p} must be connected")
        if len(set(dims)) > 1:
            raise ValidationError(f"bcs dimension mismatch: {' vs '.join(map(str, dims))}")

    def __str__(self):
        return "bcs(" + ", ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class YZRemove:
    """Remove ``E(Y, point)`` from a sphere or disc; ``Z`` is always a point."""

    base: Union[Sphere, Disc]
    y: "SpaceExpr"

    def __post_init__(self):
        if not isinstance(self.base, (Sphere, Disc)):
            raise ValidationError(f"yzrem base must be a sphere or a disc, got {self.base}")
        a = attrs(self.y)
        if not (a.closed and a.connected and a.orientable):
            raise ValidationError(f"yzrem submanifold {self.y} must be closed, connected and orientable")
        n = self.base.k
        if not 1 <= a.dim <= n - 2:
            raise ValidationError(
                f"yzrem needs 1 <= dim Y <= dim base - 2 (codimension >= 2), got dim Y = {a.dim}, dim base = {n}"
            )

    @property
    def n(self) -> int:
        return self.base.k

    @property
    def codim(self) -> int:
        return self.base.k - attrs(self.y).dim

    @property
    def sphere_base(self) -> bool:
        return isinstance(self.base, Sphere)

    def __str__(self):
        return f"yzrem({self.base}, {self.y})"


SpaceExpr = Union[Sphere, Disc, Lens, Product, ConnSum, BoundaryConnSum, YZRemove]


def lens(p: int, q: int = 1) -> SpaceExpr:
    """Lens space, with ``lens(1, 1)`` normalized to ``S3``."""
    e = Lens(p, q)
    return Sphere(3) if p == 1 else e


# ---------------------------------------------------------------------------
# attributes
# ---------------------------------------------------------------------------


def _combine_sc(values) -> str:
    values = list(values)
    if NO in values:
        return NO
    if ASSERTED in values:
        return ASSERTED
    return YES


def _merge(*tuples) -> tuple[str, ...]:
    out: list[str] = []
    for t in tuples:
        for s in t:
            if s not in out:
                out.append(s)
    return tuple(out)


def attrs(e: SpaceExpr) -> SpaceAttrs:
    if isinstance(e, Sphere):
        return SpaceAttrs(e.k, True, True, True, YES if e.k >= 2 else NO)
    if isinstance(e, Disc):
        return SpaceAttrs(e.k, False, True, True, YES)
    if isinstance(e, Lens):
        return SpaceAttrs(3, True, True, True, YES if e.p == 1 else NO)
    if isinstance(e, Product):
        a, b = attrs(e.a), attrs(e.b)
        return SpaceAttrs(
            a.dim + b.dim,
            a.closed and b.closed,
            a.orientable and b.orientable,
            a.connected and b.connected,
            _combine_sc([a.simply_connected, b.simply_connected]),
            _merge(a.assumptions, b.assumptions),
            _merge(a.caveats, b.caveats),
        )
    if isinstance(e, (ConnSum, BoundaryConnSum)):
        subs = [attrs(p) for p in e.parts]
        d = subs[0].dim
        sc = _combine_sc(s.simply_connected for s in subs)
        if isinstance(e, ConnSum) and d == 1:
            sc = NO
        return SpaceAttrs(
            d,
            isinstance(e, ConnSum),
            all(s.orientable for s in subs),
            True,
            sc,
            _merge(*(s.assumptions for s in subs)),
            _merge(*(s.caveats for s in subs)),
        )
    if isinstance(e, YZRemove):
        y = attrs(e.y)
        caveats = y.caveats + ((SPHERE_BASE_CAVEAT,) if e.sphere_base else ())
        return SpaceAttrs(
            e.n, False, True, True, ASSERTED,
            _merge(y.assumptions, (TRIVIAL_NORMAL_BUNDLE,)),
            _merge(caveats),
        )
    raise TypeError(f"not a space expression: {e!r}")


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


def _kunneth(h1: GradedGroup, h2: GradedGroup, top: int) -> GradedGroup:
    groups = []
    for n in range(top + 1):
        parts = [tensor(h1[i], h2[n - i]) for i in range(n + 1)]
        parts += [tor(h1[i], h2[n - 1 - i]) for i in range(n)]
        groups.append(direct_sum(*parts))
    return GradedGroup(groups)


def homology(e: SpaceExpr) -> GradedGroup:
    """Integral homology in degrees ``0..dim``."""
    if isinstance(e, Sphere):
        return GradedGroup(free(1) if j in (0, e.k) else trivial() for j in range(e.k + 1))
    if isinstance(e, Disc):
        return GradedGroup([free(1)] + [trivial()] * e.k)
    if isinstance(e, Lens):
        return GradedGroup([free(1), cyclic(e.p), trivial(), free(1)])
    if isinstance(e, Product):
        return _kunneth(homology(e.a), homology(e.b), attrs(e).dim)
    if isinstance(e, ConnSum):
        d = attrs(e).dim
        hs = [homology(p) for p in e.parts]
        groups = [free(1)] + [direct_sum(*(h[j] for h in hs)) for j in range(1, d)] + [free(1)]
        return GradedGroup(groups[: d + 1])
    if isinstance(e, BoundaryConnSum):
        d = attrs(e).dim
        hs = [homology(p) for p in e.parts]
        return GradedGroup([free(1)] + [direct_sum(*(h[j] for h in hs)) for j in range(1, d + 1)])
    if isinstance(e, YZRemove):
        return _yzremove_homology(e)
    raise TypeError(f"not a space expression: {e!r}")


def _yzremove_homology(e: YZRemove) -> GradedGroup:
    n, c = e.n, e.codim
    ce = punctured_homology(e.y)
    groups = []
    for j in range(n + 1):
        if j == 0:
            groups.append(free(1))
        elif j <= c - 1:
            groups.append(trivial())
        elif j < n - 1:
            groups.append(ce[j - (c - 1)])
        elif j == n - 1:
            groups.append(free(0 if e.sphere_base else 1))
        else:
            groups.append(trivial())
    return GradedGroup(groups)


def _require_closed(y: SpaceExpr) -> SpaceAttrs:
    a = attrs(y)
    if not (a.closed and a.connected and a.orientable and a.dim >= 1):
        raise ValidationError(f"{y} must be closed, connected, orientable and of dimension >= 1")
    return a


def punctured_homology(y: SpaceExpr) -> GradedGroup:
    """Homology of ``y`` with an open ball removed."""
    d = _require_closed(y).dim
    h = homology(y)
    return GradedGroup([h[i] for i in range(d)] + [trivial()])


def relative_punctured_homology(y: SpaceExpr) -> GradedGroup:
    """``H_*(CE, dCE)`` for ``CE`` the punctured ``y``; its boundary is a sphere."""
    d = _require_closed(y).dim
    h = homology(y)
    return GradedGroup([trivial()] + [h[i] for i in range(1, d)] + [free(1)])


def boundary_E_homology(y: SpaceExpr, c: int, reading: str = "absolute") -> GradedGroup:
    """Homology of the boundary of ``CE x D^c``, degrees ``0..dim y + c - 1``.

    ``reading="absolute"`` splits ``H_j`` as ``H_j(CE) + H~_{j-c+1}(CE)``.
    ``reading="relative"`` uses the pair ``(CE, dCE)`` in both summands
    instead; it differs from the absolute form only in degree ``dim y``
    and is kept for comparison.
    """
    d = _require_closed(y).dim
    if c < 2:
        raise ValidationError(f"codimension must be >= 2, got {c}")
    n = d + c
    if reading == "absolute":
        ce = punctured_homology(y)
        first = ce
        second = GradedGroup([trivial()] + list(ce.groups[1:]))
    elif reading == "relative":
        first = second = relative_punctured_homology(y)
    else:
        raise ValueError(f"unknown reading {reading!r}")
    groups = [free(1)]
    for j in range(1, n - 1):
        groups.append(direct_sum(first[j], second[j - (c - 1)]))
    groups.append(free(1))
    return GradedGroup(groups)


@dataclass(frozen=True)
class KunnethSplit:
    """``H_i(X x S^k) = base_part + fiber_part``."""

    base_part: FGAbelianGroup
    fiber_part: FGAbelianGroup

    @property
    def total(self) -> FGAbelianGroup:
        return direct_sum(self.base_part, self.fiber_part)


def kunneth_split(x: GradedGroup, k: int, i: int) -> KunnethSplit:
    if k < 1:
        raise ValueError("sphere dimension must be >= 1")
    return KunnethSplit(x[i], x[i - k])


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(connsum|prod|bcs|yzrem|lens)\s*\(|([SD])(\d+)|(\d+)|([(),]))")


@dataclass
class _Parser:
    text: str
    pos: int = 0
    _peeked: tuple | None = field(default=None, repr=False)

    def error(self, msg: str) -> ParseError:
        return ParseError(f"{msg} at position {self.pos} in {self.text!r}")

    def next(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            if not self.text[self.pos:].strip():
                raise self.error("unexpected end of input")
            raise self.error(f"unexpected input {self.text[self.pos:].strip()[:10]!r}")
        self.pos = m.end()
        if m.group(1):
            return ("call", m.group(1))
        if m.group(2):
            return ("atom", m.group(2), int(m.group(3)))
        if m.group(4):
            return ("nat", int(m.group(4)))
        return ("punct", m.group(5))

    def expect(self, ch: str):
        tok = self.next()
        if tok != ("punct", ch):
            raise self.error(f"expected {ch!r}")

    def nat(self) -> int:
        tok = self.next()
        if tok[0] != "nat":
            raise self.error("expected a natural number")
        return tok[1]

    def args(self) -> list:
        out = [self.expr()]
        while True:
            tok = self.next()
            if tok == ("punct", ")"):
                return out
            if tok != ("punct", ","):
                raise self.error("expected ',' or ')'")
            out.append(self.expr())

    def expr(self) -> SpaceExpr:
        tok = self.next()
        if tok[0] == "atom":
            return Sphere(tok[2]) if tok[1] == "S" else Disc(tok[2])
        if tok[0] != "call":
            raise self.error("expected an expression")
        name = tok[1]
        if name == "lens":
            p = self.nat()
            self.expect(",")
            q = self.nat()
            self.expect(")")
            return lens(p, q)
        if name == "prod":
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Product(a, b)
        if name == "yzrem":
            base = self.expr()
            if not isinstance(base, (Sphere, Disc)):
                raise ValidationError(f"yzrem base must be S<n> or D<n>, got {base}")
            self.expect(",")
            y = self.expr()
            self.expect(")")
            return YZRemove(base, y)
        parts = self.args()
        return ConnSum(tuple(parts)) if name == "connsum" else BoundaryConnSum(tuple(parts))


def parse(text: str) -> SpaceExpr:
    p = _Parser(text)
    e = p.expr()
    if p.text[p.pos:].strip():
        raise p.error("trailing input")
    return e
