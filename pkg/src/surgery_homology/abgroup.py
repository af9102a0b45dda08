"""Finitely generated abelian groups and exact integer matrices.

Everything here works over Python's arbitrary-precision ``int``; no
fixed-width arithmetic is used anywhere, since Smith-form pivots grow
quickly even on small inputs.

>>> cokernel(IntegerMatrix.from_rows([[2, 0], [0, 12]]))
FGAbelianGroup(free_rank=0, invariant_factors=(2, 12))
>>> str(direct_sum(cyclic(2), cyclic(3)))
'Z/6'
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from sympy import factorint

__all__ = [
    "IntegerMatrix",
    "SmithDecomposition",
    "FGAbelianGroup",
    "GradedGroup",
    "NotASummand",
    "smith_normal_form",
    "cokernel",
    "direct_sum",
    "direct_complement",
    "tensor",
    "tor",
    "is_isomorphic",
    "rank",
    "torsion",
    "free",
    "cyclic",
    "trivial",
    "diagonal_change_of_basis",
]


class NotASummand(ValueError):
    """Raised when a group cannot be split off as a direct summand."""


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable row-major integer matrix; empty shapes are legal."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntegerMatrix:
        cols = [list(c) for c in columns]
        return cls.from_rows([[c[i] for c in cols] for i in range(rows)], cols=len(cols))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntegerMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = int(v)
        return cls.from_rows(out, cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i][j]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows([self.column(j) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntegerMatrix.from_rows(
            [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self.entries],
            cols=other.cols,
        )

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows([[-x for x in r] for r in self.entries], cols=self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def hstack(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IntegerMatrix.from_rows(
            [a + b for a, b in zip(self.entries, other.entries)], cols=self.cols + other.cols
        )

    def select_rows(self, idx: Iterable[int]) -> IntegerMatrix:
        return IntegerMatrix.from_rows([self.entries[i] for i in idx], cols=self.cols)

    def select_columns(self, idx: Iterable[int]) -> IntegerMatrix:
        idx = list(idx)
        return IntegerMatrix.from_rows([[r[j] for j in idx] for r in self.entries], cols=len(idx))

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _find_pivot(a, t, rows, cols):
    best = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = abs(a[i][j])
            if v and (best is None or v < best[0]):
                best = (v, i, j)
    return best


def smith_normal_form(A: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot is the entry of least nonzero absolute value in the remaining
    block, ties going to the lowest ``(row, col)``.  Diagonal entries are
    nonnegative, each divides the next, and zeros come last.
    """
    m, n = A.shape
    a = A.to_lists()
    # U accumulates row operations applied to A, V column operations.
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(src, dst, c):  # row dst += c * row src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):  # col dst += c * col src
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        piv = _find_pivot(a, t, m, n)
        if piv is None:
            break
        _, pi, pj = piv
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // a[t][t]))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // a[t][t]))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                # a remainder is now smaller than the pivot; re-pivot in row/col t
                piv = _find_pivot(a, t, m, n)
                cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, pi, pj = min(cands)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return SmithDecomposition(
        IntegerMatrix.from_rows(u, cols=m),
        IntegerMatrix.from_rows(a, cols=n),
        IntegerMatrix.from_rows(v, cols=n),
    )


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------


def _primary_parts(n: int) -> list[int]:
    return [p**e for p, e in factorint(n).items()]


def _invariant_factors_from_primary(powers: Iterable[int]) -> tuple[int, ...]:
    by_prime: dict[int, list[int]] = {}
    for q in powers:
        (p,) = factorint(q).keys()
        by_prime.setdefault(p, []).append(q)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    k = max((len(qs) for qs in by_prime.values()), default=0)
    factors = []
    for i in range(k):
        factors.append(reduce(lambda x, y: x * y, (qs[i] for qs in by_prime.values() if i < len(qs)), 1))
    return tuple(reversed(factors))


@dataclass(frozen=True)
class FGAbelianGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k``.

    Instances are always canonical, so ``==`` is isomorphism.  Use
    :meth:`from_orders` to build a group from an arbitrary list of cyclic
    orders.
    """

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        fs = self.invariant_factors
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise ValueError(f"invariant factors must form a divisibility chain, got {fs}")

    @classmethod
    def from_orders(cls, free_rank: int = 0, orders: Iterable[int] = ()) -> FGAbelianGroup:
        """Canonicalize ``Z^free_rank + sum Z/o``; orders of 0 count as free, 1 is dropped."""
        powers = []
        for o in orders:
            o = abs(int(o))
            if o == 0:
                free_rank += 1
            elif o > 1:
                powers.extend(_primary_parts(o))
        return cls(free_rank, _invariant_factors_from_primary(powers))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def order(self) -> int | None:
        """Cardinality, or ``None`` for an infinite group."""
        if self.free_rank:
            return None
        return reduce(lambda x, y: x * y, self.invariant_factors, 1)

    @property
    def generator_orders(self) -> tuple[int, ...]:
        """Orders of the standard generators: free ones (0) first, then torsion."""
        return (0,) * self.free_rank + self.invariant_factors

    def primary_decomposition(self) -> Counter:
        """Multiset of prime powers of the torsion part."""
        return Counter(q for d in self.invariant_factors for q in _primary_parts(d))

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self) -> str:
        terms = []
        if self.free_rank == 1:
            terms.append("Z")
        elif self.free_rank > 1:
            terms.append(f"Z^{self.free_rank}")
        terms.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.invariant_factors)}

    @classmethod
    def from_json(cls, obj: dict) -> FGAbelianGroup:
        return cls.from_orders(int(obj.get("rank", 0)), obj.get("torsion", ()))

    @classmethod
    def parse(cls, text: str) -> FGAbelianGroup:
        """Parse ``"Z^2 + Z/3"``, ``"Z/3+Z"``, ``"0"`` and the like."""
        rank, orders = 0, []
        for term in text.replace(" ", "").split("+"):
            if term in ("", "0"):
                if term == "" and text.strip():
                    raise ValueError(f"empty term in group {text!r}")
                continue
            m = re.fullmatch(r"Z(?:\^(\d+))?", term)
            if m:
                rank += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"(?:Z/(\d+)|\(Z/(\d+)\)\^(\d+))", term)
            if m:
                if m.group(1):
                    orders.append(int(m.group(1)))
                else:
                    orders.extend([int(m.group(2))] * int(m.group(3)))
                if any(o == 0 for o in orders):
                    raise ValueError("Z/0 is not a valid cyclic factor; write Z")
                continue
            raise ValueError(f"cannot parse group term {term!r}")
        return cls.from_orders(rank, orders)


def free(r: int) -> FGAbelianGroup:
    return FGAbelianGroup(r, ())


def cyclic(n: int) -> FGAbelianGroup:
    """``Z/n``; ``cyclic(0)`` is ``Z`` and ``cyclic(1)`` is trivial."""
    return FGAbelianGroup.from_orders(0, [n])


def trivial() -> FGAbelianGroup:
    return FGAbelianGroup()


def cokernel(A: IntegerMatrix) -> FGAbelianGroup:
    """``Z^rows / column-span(A)``."""
    snf = smith_normal_form(A)
    diag = snf.diagonal
    nonzero = [d for d in diag if d != 0]
    return FGAbelianGroup.from_orders(A.rows - len(nonzero), nonzero)


def direct_sum(*groups: FGAbelianGroup) -> FGAbelianGroup:
    return FGAbelianGroup.from_orders(
        sum(g.free_rank for g in groups), [d for g in groups for d in g.invariant_factors]
    )


def direct_complement(A: FGAbelianGroup, B: FGAbelianGroup) -> FGAbelianGroup:
    """The ``C`` with ``A = B + C``, unique by cancellation of primary parts."""
    if B.free_rank > A.free_rank:
        raise NotASummand(f"{B} is not a direct summand of {A}: free rank too large")
    pa, pb = A.primary_decomposition(), B.primary_decomposition()
    if pb - pa:
        raise NotASummand(f"{B} is not a direct summand of {A}")
    rest = pa - pb
    return FGAbelianGroup(A.free_rank - B.free_rank, _invariant_factors_from_primary(rest.elements()))


def tensor(G: FGAbelianGroup, H: FGAbelianGroup) -> FGAbelianGroup:
    orders = [0] * (G.free_rank * H.free_rank)
    orders += [d for d in H.invariant_factors for _ in range(G.free_rank)]
    orders += [d for d in G.invariant_factors for _ in range(H.free_rank)]
    orders += [gcd(a, b) for a in G.invariant_factors for b in H.invariant_factors]
    return FGAbelianGroup.from_orders(0, orders)


def tor(G: FGAbelianGroup, H: FGAbelianGroup) -> FGAbelianGroup:
    return FGAbelianGroup.from_orders(
        0, [gcd(a, b) for a in G.invariant_factors for b in H.invariant_factors]
    )


def is_isomorphic(G: FGAbelianGroup, H: FGAbelianGroup) -> bool:
    return G == H


def rank(G: FGAbelianGroup) -> int:
    return G.free_rank


def torsion(G: FGAbelianGroup) -> FGAbelianGroup:
    return FGAbelianGroup(0, G.invariant_factors)


def diagonal_change_of_basis(orders: Sequence[int]):
    """Canonical coordinates for ``sum Z/o_i`` (``o_i == 0`` meaning ``Z``).

    Returns ``(group, P, Q)``: ``P`` sends old coordinates to canonical ones
    (one row per standard generator of ``group``), ``Q`` sends canonical
    coordinates back (one column per standard generator).
    """
    k = len(orders)
    snf = smith_normal_form(IntegerMatrix.diagonal([abs(int(o)) for o in orders]))
    u = snf.U
    u_inv = _unimodular_inverse(u)
    diag = snf.diagonal
    free_idx = [i for i, d in enumerate(diag) if d == 0]
    tors_idx = [i for i, d in enumerate(diag) if d > 1]
    keep = free_idx + tors_idx
    group = FGAbelianGroup(len(free_idx), tuple(diag[i] for i in tors_idx))
    P = u.select_rows(keep) if k else IntegerMatrix.zeros(0, 0)
    Q = u_inv.select_columns(keep) if k else IntegerMatrix.zeros(0, 0)
    return group, P, Q


def _unimodular_inverse(M: IntegerMatrix) -> IntegerMatrix:
    """Inverse of a unimodular matrix (exact Gauss-Jordan over the rationals)."""
    n = M.rows
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.entries)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                q = a[i][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[c])]
    out = [r[n:] for r in a]
    if any(x.denominator != 1 for r in out for x in r):
        raise ValueError("matrix is not unimodular")
    return IntegerMatrix.from_rows([[int(x) for x in r] for r in out], cols=n)


# ---------------------------------------------------------------------------
# Graded groups
# ---------------------------------------------------------------------------


class GradedGroup:
    """Degree-indexed homology; degrees outside the stored range read as 0.

    Equality compares every degree, so trailing trivial groups do not
    matter.
    """

    __slots__ = ("groups",)

    def __init__(self, groups: Iterable[FGAbelianGroup] = ()):
        object.__setattr__(self, "groups", tuple(groups))

    def __setattr__(self, name, value):
        raise AttributeError("GradedGroup is immutable")

    def __getitem__(self, j: int) -> FGAbelianGroup:
        if 0 <= j < len(self.groups):
            return self.groups[j]
        return FGAbelianGroup()

    def __len__(self) -> int:
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)

    @property
    def top(self) -> int:
        return len(self.groups) - 1

    def _trimmed(self) -> tuple[FGAbelianGroup, ...]:
        gs = list(self.groups)
        while gs and gs[-1].is_trivial:
            gs.pop()
        return tuple(gs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedGroup):
            return NotImplemented
        return self._trimmed() == other._trimmed()

    def __hash__(self) -> int:
        return hash(self._trimmed())

    def __repr__(self) -> str:
        return f"GradedGroup([{', '.join(g.to_text() for g in self.groups)}])"

    def padded(self, top: int) -> GradedGroup:
        return GradedGroup(self[j] for j in range(top + 1))

    def shifted(self, k: int) -> GradedGroup:
        """``H'_j = H_{j-k}``."""
        return GradedGroup(self[j - k] for j in range(len(self.groups) + k))

    def betti(self) -> list[int]:
        return [g.free_rank for g in self.groups]

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * g.free_rank for j, g in enumerate(self.groups))

    def to_rows(self) -> list[dict]:
        return [{"degree": j, **g.to_json()} for j, g in enumerate(self.groups)]

    def to_json(self) -> str:
        return json.dumps(self.to_rows())

    def to_text(self) -> str:
        return "; ".join(g.to_text() for g in self.groups)

    @classmethod
    def parse(cls, text: str) -> GradedGroup:
        """``"Z;0;Z/3+Z"`` style, one group per degree."""
        return cls(FGAbelianGroup.parse(t) for t in text.split(";"))

    @classmethod
    def of(cls, *items) -> GradedGroup:
        """Convenience constructor accepting groups or parseable strings."""
        return cls(g if isinstance(g, FGAbelianGroup) else FGAbelianGroup.parse(str(g)) for g in items)
