"""Homomorphisms of finitely generated abelian groups and a Mayer-Vietoris solver.

The solver rebuilds ``H_*(dE)`` for ``E = CE x D^c`` from the sequence

    H_j(SNE) -> H_j(NE) + H_j(SE) -> H_j(dE) -> H_{j-1}(SNE) -> ...

with ``SNE = S^{d-1} x S^{c-1}``, ``NE = S^{d-1} x D^c`` and
``SE = CE x S^{c-1}``, then peels ``H_*(E)`` off to get the homology of
the remove.  It never consults the closed-form rules for ``dE`` or for the
remove, so it is an independent check on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .abgroup import (
    FGAbelianGroup,
    GradedGroup,
    IntegerMatrix,
    cokernel,
    diagonal_change_of_basis,
    direct_complement,
    direct_sum,
    free,
    smith_normal_form,
    trivial,
)
from . import spaces
from .spaces import Disc, Sphere, SpaceExpr, ValidationError

__all__ = [
    "GroupHom",
    "MalformedHom",
    "NotExact",
    "Slot",
    "LesWindow",
    "Ambiguous",
    "kernel",
    "image",
    "cokernel_of",
    "compose",
    "is_exact_at",
    "build_boundary_E",
    "solve_les_window",
    "solve_remove",
    "remove_homology",
    "boundary_E_from_solver",
    "exactness_rank_check",
    "flatten",
]


class MalformedHom(ValueError):
    pass


class NotExact(ValueError):
    pass


# ---------------------------------------------------------------------------
# lattice helpers
# ---------------------------------------------------------------------------


def _relations(G: FGAbelianGroup) -> IntegerMatrix:
    """Columns generate the relation lattice of ``G`` in its standard generators."""
    orders = G.generator_orders
    cols = [[d if i == k else 0 for i in range(len(orders))] for k, d in enumerate(orders) if d]
    return IntegerMatrix.from_columns(cols, rows=len(orders))


def _kernel_basis(A: IntegerMatrix) -> IntegerMatrix:
    """Columns form a basis of ``{x : A x = 0}``."""
    snf = smith_normal_form(A)
    return snf.V.select_columns(range(snf.rank, A.cols))


def _coordinates(K: IntegerMatrix, I: IntegerMatrix) -> IntegerMatrix:
    """Express the columns of ``I`` in a basis of the column lattice of ``K``.

    Raises ``NotExact`` if some column of ``I`` is not in that lattice.
    """
    snf = smith_normal_form(K)
    r = snf.rank
    diag = snf.diagonal
    ui = snf.U @ I
    for i in range(r, ui.rows):
        if any(ui.entries[i]):
            raise NotExact("lattice containment fails")
    rows = []
    for i in range(r):
        row = []
        for x in ui.entries[i]:
            if x % diag[i]:
                raise NotExact("lattice containment fails")
            row.append(x // diag[i])
        rows.append(row)
    return IntegerMatrix.from_rows(rows, cols=I.cols)


def _subquotient(K: IntegerMatrix, I: IntegerMatrix) -> FGAbelianGroup:
    """``span(K) / span(I)`` for lattices ``span(I) <= span(K)``."""
    return cokernel(_coordinates(K, I))


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism written in standard generators.

    ``matrix`` has one row per target generator and one column per source
    generator (free generators first, then torsion ones in invariant-factor
    order).  Rows of torsion targets are stored reduced modulo the order.
    """

    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: IntegerMatrix

    def __post_init__(self):
        so, to = self.source.generator_orders, self.target.generator_orders
        if self.matrix.shape != (len(to), len(so)):
            raise MalformedHom(f"matrix shape {self.matrix.shape} does not match {len(to)} x {len(so)} generators")
        rows = []
        for e, row in zip(to, self.matrix.entries):
            rows.append([x % e for x in row] if e else list(row))
        m = IntegerMatrix.from_rows(rows, cols=len(so))
        for j, d in enumerate(so):
            if not d:
                continue
            for e, x in zip(to, m.column(j)):
                if (d * x) % e if e else d * x:
                    raise MalformedHom(f"generator {j} of order {d} cannot map to {m.column(j)} in {self.target}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_presentation(
        cls, source_orders: Sequence[int], target_orders: Sequence[int], matrix: IntegerMatrix
    ) -> GroupHom:
        """Build from a map between arbitrary cyclic decompositions (0 = free)."""
        S, _, Q_s = diagonal_change_of_basis(source_orders)
        T, P_t, _ = diagonal_change_of_basis(target_orders)
        if matrix.shape != (len(target_orders), len(source_orders)):
            raise MalformedHom("matrix shape does not match the presentations")
        if not source_orders or not target_orders:
            return cls.zero(S, T)
        return cls(S, T, P_t @ matrix @ Q_s)

    @classmethod
    def zero(cls, source: FGAbelianGroup, target: FGAbelianGroup) -> GroupHom:
        return cls(source, target, IntegerMatrix.zeros(len(target.generator_orders), len(source.generator_orders)))

    @classmethod
    def identity(cls, G: FGAbelianGroup) -> GroupHom:
        return cls(G, G, IntegerMatrix.identity(len(G.generator_orders)))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def compose(g: GroupHom, f: GroupHom) -> GroupHom:
    """``g . f``."""
    if f.target != g.source:
        raise MalformedHom(f"cannot compose: {f.target} != {g.source}")
    return GroupHom(f.source, g.target, g.matrix @ f.matrix)


def _preimage_of_relations(f: GroupHom) -> IntegerMatrix:
    """Columns span ``{x in Z^s : f x = 0 in the target}``."""
    s = f.matrix.cols
    full = f.matrix.hstack(_relations(f.target))
    K = _kernel_basis(full)
    return K.select_rows(range(s))


def kernel(f: GroupHom) -> FGAbelianGroup:
    return _subquotient(_preimage_of_relations(f), _relations(f.source))


def image(f: GroupHom) -> FGAbelianGroup:
    s = f.matrix.cols
    return _subquotient(IntegerMatrix.identity(s), _preimage_of_relations(f))


def cokernel_of(f: GroupHom) -> FGAbelianGroup:
    return cokernel(f.matrix.hstack(_relations(f.target)))


def is_exact_at(f: GroupHom, g: GroupHom) -> bool:
    """Whether ``image f == kernel g`` inside ``f.target``."""
    if f.target != g.source:
        raise MalformedHom("maps are not composable")
    if not compose(g, f).is_zero():
        return False
    ker_g = _preimage_of_relations(g)
    im_f = f.matrix.hstack(_relations(f.target))
    return _subquotient(ker_g, im_f).is_trivial


# ---------------------------------------------------------------------------
# long exact sequence windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Slot:
    label: str
    group: Optional[FGAbelianGroup]  # None marks an unknown
    degree: int


@dataclass(frozen=True)
class LesWindow:
    """A stretch of a long exact sequence, read left to right.

    ``maps[k]`` goes from ``slots[k]`` to ``slots[k+1]``; ``None`` where the
    map is not known.  A bounded window has zeros beyond both ends.
    """

    slots: tuple[Slot, ...]
    maps: tuple[Optional[GroupHom], ...]
    bounded: bool = True
    title: str = ""

    def __post_init__(self):
        if len(self.maps) != max(len(self.slots) - 1, 0):
            raise ValueError("need one map between each pair of adjacent slots")
        for k, f in enumerate(self.maps):
            if f is None:
                continue
            a, b = self.slots[k].group, self.slots[k + 1].group
            if a is None or b is None or f.source != a or f.target != b:
                raise MalformedHom(f"map {k} does not match its slots")


@dataclass(frozen=True)
class Ambiguous:
    """Unknown slots whose extension problem is not forced."""

    degrees: tuple[int, ...]
    subgroups: tuple[FGAbelianGroup, ...]
    quotients: tuple[FGAbelianGroup, ...]
    partial: GradedGroup


def _map_or_zero(w: LesWindow, k: int, side: str) -> Optional[GroupHom]:
    """Map ``slots[k] -> slots[k+1]``, with zero groups past the ends."""
    n = len(w.slots)
    if 0 <= k < n - 1:
        return w.maps[k]
    if not w.bounded:
        return None
    if k == -1:
        g = w.slots[0].group
        return None if g is None else GroupHom.zero(trivial(), g)
    if k == n - 1:
        g = w.slots[n - 1].group
        return None if g is None else GroupHom.zero(g, trivial())
    return GroupHom.zero(trivial(), trivial())


def solve_les_window(w: LesWindow) -> Union[GradedGroup, Ambiguous]:
    """Fill every unknown slot as ``coker(previous map) + ker(next map)``.

    The extension ``0 -> coker -> H -> ker -> 0`` is taken as split only when
    it is forced (the kernel is free, or one side is trivial).
    """
    n = len(w.slots)
    for k in range(1, n - 1):
        f, g = w.maps[k - 1], w.maps[k]
        if f is not None and g is not None and not is_exact_at(f, g):
            raise NotExact(f"{w.title}: not exact at {w.slots[k].label}")
    if w.bounded:
        if n and w.maps and w.maps[0] is not None and not kernel(w.maps[0]).is_trivial:
            raise NotExact(f"{w.title}: first map is not injective")
        if n and w.maps and w.maps[-1] is not None and not cokernel_of(w.maps[-1]).is_trivial:
            raise NotExact(f"{w.title}: last map is not surjective")

    solved: dict[int, FGAbelianGroup] = {}
    amb_deg, amb_sub, amb_quo = [], [], []
    for k, slot in enumerate(w.slots):
        if slot.group is not None:
            continue
        before = _map_or_zero(w, k - 2, "left")
        after = _map_or_zero(w, k + 1, "right")
        if before is None or after is None:
            raise ValueError(f"{w.title}: maps next to unknown {slot.label} are not known")
        sub = cokernel_of(before)
        quo = kernel(after)
        if quo.is_free or sub.is_trivial or quo.is_trivial:
            solved[slot.degree] = direct_sum(sub, quo)
        else:
            amb_deg.append(slot.degree)
            amb_sub.append(sub)
            amb_quo.append(quo)
            solved[slot.degree] = sub
    top = max((s.degree for s in w.slots), default=-1)
    result = GradedGroup(solved.get(j, trivial()) for j in range(top + 1))
    if amb_deg:
        return Ambiguous(tuple(amb_deg), tuple(amb_sub), tuple(amb_quo), result)
    if w.bounded and not exactness_rank_check(flatten(w, result)):
        raise NotExact(f"{w.title}: ranks of the completed sequence do not alternate to zero")
    return result


def flatten(w: LesWindow, solution: GradedGroup) -> list[FGAbelianGroup]:
    """The window's groups with unknowns filled in, padded by zeros."""
    out = [trivial()]
    for s in w.slots:
        out.append(s.group if s.group is not None else solution[s.degree])
    out.append(trivial())
    return out


def exactness_rank_check(groups: Sequence[FGAbelianGroup]) -> bool:
    return sum((-1) ** i * g.free_rank for i, g in enumerate(groups)) == 0


# ---------------------------------------------------------------------------
# the boundary of E(Y, point)
# ---------------------------------------------------------------------------


def _sphere_orders(k: int) -> dict[int, list[int]]:
    """Generator orders of ``H_*(S^k)``; ``S^0`` has two points."""
    if k == 0:
        return {0: [0, 0]}
    return {0: [0], k: [0]}


def build_boundary_E(y: SpaceExpr, c: int) -> LesWindow:
    """Mayer-Vietoris window for ``dE = (S^{d-1} x D^c) u (CE x S^{c-1})``.

    Two geometric inputs enter here and nowhere else: the fiber sphere
    bounds in ``NE``, and the boundary sphere of ``CE`` is null-homologous
    in ``CE`` (``Y`` orientable), so inclusion ``dCE -> CE`` is onto ``H_0``
    and zero above.
    """
    a = spaces.attrs(y)
    if not (a.closed and a.connected and a.orientable):
        raise ValidationError(f"{y} must be closed, connected and orientable")
    if c < 2:
        raise ValidationError(f"codimension must be >= 2, got {c}")
    d = a.dim
    n = d + c
    f = c - 1
    dn = _sphere_orders(d - 1)
    ce_groups = spaces.punctured_homology(y)
    ce = {i: list(ce_groups[i].generator_orders) for i in range(d + 1)}

    def gens(table, i):
        return table.get(i, []) if i >= 0 else []

    def incl(i) -> list[list[int]]:
        src, tgt = gens(dn, i), gens(ce, i)
        if i == 0:
            return [[1] * len(src) for _ in tgt]
        return [[0] * len(src) for _ in tgt]

    slots: list[Slot] = []
    maps: list[Optional[GroupHom]] = []
    for j in range(n - 1, -1, -1):
        sne_b, sne_f = gens(dn, j), gens(dn, j - f)
        ne = gens(dn, j)
        se_b, se_f = gens(ce, j), gens(ce, j - f)
        src_orders = sne_b + sne_f
        tgt_orders = ne + se_b + se_f
        rows = []
        for r in range(len(ne)):
            rows.append([int(r == k) for k in range(len(sne_b))] + [0] * len(sne_f))
        for row in incl(j):
            rows.append(row + [0] * len(sne_f))
        for row in incl(j - f):
            rows.append([0] * len(sne_b) + row)
        M = IntegerMatrix.from_rows(rows, cols=len(src_orders))
        beta = GroupHom.from_presentation(src_orders, tgt_orders, M)
        if slots:
            maps.append(None)
        slots.append(Slot(f"H_{j}(SNE)", beta.source, j))
        maps.append(beta)
        slots.append(Slot(f"H_{j}(NE)+H_{j}(SE)", beta.target, j))
        maps.append(None)
        slots.append(Slot(f"H_{j}(dE)", None, j))
    return LesWindow(tuple(slots), tuple(maps), True, f"dE for Y = {y}, codimension {c}")


def boundary_E_from_solver(y: SpaceExpr, c: int) -> GradedGroup:
    out = solve_les_window(build_boundary_E(y, c))
    if isinstance(out, Ambiguous):
        raise NotExact(f"unforced extension in degrees {out.degrees}")
    return out


def solve_remove(base: Union[Disc, Sphere], boundary_E: GradedGroup, E: GradedGroup) -> GradedGroup:
    """Homology of the remove from ``H_*(dE)`` and ``H_*(E)``.

    For ``0 < j < n-1`` the boundary splits as ``H_j(E) + H_j(remove)``;
    the top free rank loses one more for a sphere base.
    """
    if not isinstance(base, (Disc, Sphere)):
        raise ValidationError(f"base must be a sphere or a disc, got {base}")
    n = base.k
    s = 1 if isinstance(base, Sphere) else 0
    groups = [free(1)]
    for j in range(1, n - 1):
        groups.append(direct_complement(boundary_E[j], E[j]))
    if not (boundary_E[n - 1].is_free and E[n - 1].is_free):
        raise NotExact(f"degree {n - 1} groups must be free")
    r = boundary_E[n - 1].free_rank - E[n - 1].free_rank - s
    if r < 0:
        raise NotExact(f"negative rank {r} in degree {n - 1}")
    groups.append(free(r))
    groups.append(trivial())
    return GradedGroup(groups)


def remove_homology(base: Union[Disc, Sphere], y: SpaceExpr) -> GradedGroup:
    """Solver path for ``yzrem(base, y)``, independent of ``spaces.homology``."""
    d = spaces.attrs(y).dim
    c = base.k - d
    if c < 2:
        raise ValidationError(f"codimension must be >= 2, got {c}")
    dE = boundary_E_from_solver(y, c)
    E = spaces.punctured_homology(y)
    return solve_remove(base, dE, E)
