"""Cellular chain complexes over the integers.

These are the brute-force side of every cross-check: homology is read off
boundary matrices by Smith normal form, with no formula shortcuts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .abgroup import FGAbelianGroup, GradedGroup, IntegerMatrix, smith_normal_form

__all__ = [
    "ChainComplex",
    "CellModel",
    "InvalidModel",
    "ModelShape",
    "build",
    "homology",
    "tensor",
    "connected_sum_complex",
    "parse_model",
]


class InvalidModel(ValueError):
    pass


class ModelShape(ValueError):
    pass


@dataclass(frozen=True)
class ChainComplex:
    """Free chain complex with ``dims[j]`` cells in degree ``j``.

    ``boundaries[j]`` is the ``dims[j-1] x dims[j]`` matrix of the boundary
    out of degree ``j``; ``boundaries[0]`` is the empty ``0 x dims[0]`` map.
    """

    dims: tuple[int, ...]
    boundaries: tuple[IntegerMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if len(self.boundaries) != len(self.dims):
            raise ValueError("need one boundary matrix per degree")
        for j, (n, d) in enumerate(zip(self.dims, self.boundaries)):
            expect = (self.dims[j - 1] if j else 0, n)
            if d.shape != expect:
                raise ValueError(f"boundary {j} has shape {d.shape}, expected {expect}")
        for j in range(1, len(self.dims) - 1):
            if not (self.boundaries[j] @ self.boundaries[j + 1]).is_zero():
                raise ValueError(f"boundary {j} composed with boundary {j + 1} is nonzero")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def boundary(self, j: int) -> IntegerMatrix:
        if 0 <= j < len(self.dims):
            return self.boundaries[j]
        if j == len(self.dims):
            return IntegerMatrix.zeros(self.dims[-1] if self.dims else 0, 0)
        return IntegerMatrix.zeros(0, 0)

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * n for j, n in enumerate(self.dims))

    @classmethod
    def from_matrices(cls, dims: Sequence[int], mats: Sequence[Sequence[Sequence[int]]]) -> ChainComplex:
        """``mats[j-1]`` is the boundary out of degree ``j`` given as nested lists."""
        bds = [IntegerMatrix.zeros(0, dims[0])]
        for j in range(1, len(dims)):
            bds.append(IntegerMatrix.from_rows(mats[j - 1], cols=dims[j]) if dims[j - 1] else
                       IntegerMatrix.zeros(0, dims[j]))
        return cls(tuple(dims), tuple(bds))


@dataclass(frozen=True)
class CellModel:
    name: str  # point | sphere | disc | lens
    params: tuple[int, ...] = ()

    def validate(self) -> None:
        if self.name == "point":
            if self.params:
                raise InvalidModel("point takes no parameters")
        elif self.name in ("sphere", "disc"):
            if len(self.params) != 1 or self.params[0] < 1:
                raise InvalidModel(f"{self.name}(k) needs k >= 1")
        elif self.name == "lens":
            if len(self.params) != 2:
                raise InvalidModel("lens needs (p, q)")
            p, q = self.params
            if p < 1 or not 1 <= q < max(p, 2) or gcd(p, q) != 1:
                raise InvalidModel(f"lens({p},{q}) needs p >= 1, 1 <= q < max(p, 2), gcd(p, q) = 1")
        else:
            raise InvalidModel(f"unknown cell model {self.name!r}")


def build(model: CellModel) -> ChainComplex:
    model.validate()
    if model.name in ("point", "disc"):
        # discs are contractible everywhere they are used
        return ChainComplex.from_matrices([1], [])
    if model.name == "sphere":
        k = model.params[0]
        dims = [1] + [0] * (k - 1) + [1]
        return ChainComplex.from_matrices(dims, [[[0] * dims[j]] * dims[j - 1] for j in range(1, k + 1)])
    p, _ = model.params
    # one cell per degree; attaching degrees 0, p, 0
    return ChainComplex.from_matrices([1, 1, 1, 1], [[[0]], [[p]], [[0]]])


def homology(C: ChainComplex) -> GradedGroup:
    ranks, torsions = [], []
    for j in range(len(C.dims) + 1):
        snf = smith_normal_form(C.boundary(j))
        ranks.append(snf.rank)
        torsions.append([d for d in snf.diagonal if d > 1])
    groups = []
    for j, n in enumerate(C.dims):
        free_rank = n - ranks[j] - ranks[j + 1]
        groups.append(FGAbelianGroup.from_orders(free_rank, torsions[j + 1]))
    return GradedGroup(groups)


def tensor(C1: ChainComplex, C2: ChainComplex) -> ChainComplex:
    """Cellular chains of the product; signs ``(-1)^i`` on the second factor."""
    top = C1.top + C2.top
    # cells of degree n: (i, a, b) with a a cell of degree i, b of degree n - i
    cells = []
    for n in range(top + 1):
        cells.append([
            (i, a, b)
            for i in range(max(0, n - C2.top), min(n, C1.top) + 1)
            for a in range(C1.dims[i])
            for b in range(C2.dims[n - i])
        ])
    index = [{c: k for k, c in enumerate(cs)} for cs in cells]
    bds = [IntegerMatrix.zeros(0, len(cells[0]))]
    for n in range(1, top + 1):
        out = [[0] * len(cells[n]) for _ in cells[n - 1]]
        for col, (i, a, b) in enumerate(cells[n]):
            if i > 0:
                d1 = C1.boundaries[i]
                for a2 in range(C1.dims[i - 1]):
                    if d1[a2, a]:
                        out[index[n - 1][(i - 1, a2, b)]][col] += d1[a2, a]
            if n - i > 0:
                d2 = C2.boundaries[n - i]
                sign = -1 if i % 2 else 1
                for b2 in range(C2.dims[n - i - 1]):
                    if d2[b2, b]:
                        out[index[n - 1][(i, a, b2)]][col] += sign * d2[b2, b]
        bds.append(IntegerMatrix.from_rows(out, cols=len(cells[n])))
    return ChainComplex(tuple(len(c) for c in cells), tuple(bds))


def connected_sum_complex(Y1: ChainComplex, Y2: ChainComplex, d: int) -> ChainComplex:
    """Splice two single-top-cell closed ``d``-dimensional models.

    The 0-cells are identified, both top cells are replaced by one new top
    cell whose boundary column is the sum of the two removed ones.
    """
    for Y in (Y1, Y2):
        if Y.top != d or Y.dims[0] != 1 or Y.dims[d] != 1:
            raise ModelShape(f"need one 0-cell and one {d}-cell in a {d}-dimensional model, got dims {Y.dims}")
    if d == 0:
        raise ModelShape("connected sum needs d >= 1")
    dims = [1] + [Y1.dims[j] + Y2.dims[j] for j in range(1, d)] + [1]
    bds = [IntegerMatrix.zeros(0, 1)]
    for j in range(1, d + 1):
        a, b = Y1.boundaries[j].to_lists(), Y2.boundaries[j].to_lists()
        n1, n2 = Y1.dims[j], Y2.dims[j]
        if j == 1:
            rows = [a[0] + b[0]] if d > 1 else [[a[0][0] + b[0][0]]]
        elif j == d:
            rows = [[a[r][0]] for r in range(Y1.dims[j - 1])] + [[b[r][0]] for r in range(Y2.dims[j - 1])]
        else:
            rows = [ra + [0] * n2 for ra in a] + [[0] * n1 + rb for rb in b]
        bds.append(IntegerMatrix.from_rows(rows, cols=dims[j]))
    return ChainComplex(tuple(dims), tuple(bds))


_TERM = re.compile(r"\s*(point|sphere|disc|lens|tensor|connsum)\s*")


def parse_model(text: str) -> ChainComplex:
    """Parse an oracle term such as ``tensor(lens(3,1),sphere(1))``."""
    pos = 0

    def term():
        nonlocal pos
        m = _TERM.match(text, pos)
        if not m:
            raise ValueError(f"unexpected input at {pos}: {text[pos:]!r}")
        name = m.group(1)
        pos = m.end()
        if name == "point":
            return build(CellModel("point"))
        expect("(")
        if name in ("tensor", "connsum"):
            left = term()
            expect(",")
            right = term()
            expect(")")
            if name == "tensor":
                return tensor(left, right)
            if left.top != right.top:
                raise ModelShape(f"connsum of models of dimension {left.top} and {right.top}")
            return connected_sum_complex(left, right, left.top)
        nums = [number()]
        while peek() == ",":
            expect(",")
            nums.append(number())
        expect(")")
        return build(CellModel(name, tuple(nums)))

    def peek():
        rest = text[pos:].lstrip()
        return rest[:1]

    def expect(ch):
        nonlocal pos
        rest = text[pos:]
        stripped = rest.lstrip()
        if not stripped.startswith(ch):
            raise ValueError(f"expected {ch!r} at {pos}: {text[pos:]!r}")
        pos += len(rest) - len(stripped) + 1

    def number():
        nonlocal pos
        m = re.compile(r"\s*(\d+)").match(text, pos)
        if not m:
            raise ValueError(f"expected a number at {pos}")
        pos = m.end()
        return int(m.group(1))

    out = term()
    if text[pos:].strip():
        raise ValueError(f"trailing input: {text[pos:]!r}")
    return out
