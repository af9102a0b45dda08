import pytest
from hypothesis import given, settings, strategies as st

from surgery_homology import spaces
from surgery_homology.abgroup import GradedGroup, direct_complement, direct_sum, free
from surgery_homology.spaces import (
    ASSERTED,
    NO,
    YES,
    BoundaryConnSum,
    ConnSum,
    Disc,
    Lens,
    ParseError,
    Product,
    Sphere,
    ValidationError,
    YZRemove,
    lens,
    parse,
)

H = GradedGroup.parse


class TestParse:
    def test_yzrem(self):
        e = parse("yzrem(D5, lens(3,1))")
        assert e == YZRemove(Disc(5), Lens(3, 1))
        a = spaces.attrs(e)
        assert a.dim == 5 and a.simply_connected == ASSERTED and not a.closed

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="3 vs 2"):
            parse("connsum(lens(2,1), S2)")

    def test_bcs_of_products(self):
        e = parse("bcs(prod(S2,D3), prod(S3,D2))")
        a = spaces.attrs(e)
        assert a.dim == 5 and a.has_boundary

    def test_whitespace(self):
        assert parse(" prod ( S2 ,\tD3 ) ") == Product(Sphere(2), Disc(3))

    def test_render_roundtrip(self):
        for t in ["bcs(yzrem(S5, lens(3,1)), prod(S2,D3), prod(S3,D2))",
                  "bcs(yzrem(D5, connsum(lens(2,1),lens(4,1))))",
                  "prod(lens(2,1),S1)"]:
            assert str(parse(t)) == t
            assert parse(str(parse(t))) == parse(t)

    def test_lens_one_is_sphere(self):
        assert parse("lens(1,1)") == Sphere(3)

    @pytest.mark.parametrize("text", ["prod(S2", "S", "lens(3)", "foo(S2)", "S2 S3", "bcs()"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse(text)

    @pytest.mark.parametrize("text", [
        "S0", "lens(4,2)", "lens(5,5)", "yzrem(S4, lens(3,1))", "yzrem(prod(S2,D3), S1)",
        "yzrem(D5, D2)", "bcs(S2, D2)", "connsum(D3, S3)", "bcs(D3, D2)",
    ])
    def test_validation_errors(self, text):
        with pytest.raises(ValidationError):
            parse(text)


class TestAttrs:
    def test_simple_connectivity(self):
        assert spaces.attrs(parse("S2")).simply_connected == YES
        assert spaces.attrs(parse("S1")).simply_connected == NO
        assert spaces.attrs(parse("lens(3,1)")).simply_connected == NO
        assert spaces.attrs(parse("prod(S2,D3)")).simply_connected == YES
        assert spaces.attrs(parse("prod(S1,D3)")).simply_connected == NO
        assert spaces.attrs(parse("bcs(yzrem(S5, lens(3,1)), prod(S2,D3))")).simply_connected == ASSERTED

    def test_sphere_base_caveat(self):
        assert spaces.attrs(parse("yzrem(S5, lens(3,1))")).caveats
        assert not spaces.attrs(parse("yzrem(D5, lens(3,1))")).caveats
        assert spaces.attrs(parse("yzrem(D5, lens(3,1))")).assumptions == (spaces.TRIVIAL_NORMAL_BUNDLE,)


class TestHomology:
    def test_remove_disc_base(self):
        assert spaces.homology(parse("yzrem(D5, lens(3,1))")) == H("Z;0;Z/3;0;Z;0")

    def test_remove_sphere_base(self):
        h = spaces.homology(parse("yzrem(S5, lens(3,1))"))
        assert h == H("Z;0;Z/3;0;0;0") and len(h) == 6

    def test_product_with_disc(self):
        assert spaces.homology(parse("prod(S2,D3)")) == H("Z;0;Z;0;0;0")

    def test_bcs_mixture(self):
        e = parse("bcs(yzrem(S5, lens(3,1)), prod(S2,D3), prod(S3,D2))")
        assert spaces.homology(e) == H("Z;0;Z/3+Z;Z;0;0")

    def test_lens_product_tor(self):
        h = spaces.homology(parse("prod(lens(2,1),lens(2,1))"))
        assert h == H("Z;Z/2+Z/2;Z/2;Z^2+Z/2;Z/2+Z/2;0;Z")

    def test_connsum(self):
        h = spaces.homology(parse("connsum(lens(2,1),lens(3,1),prod(S1,S2))"))
        assert h == H("Z;Z/6+Z;Z;Z")

    def test_higher_codimension_remove(self):
        # c = 3: shift by 2
        assert spaces.homology(parse("yzrem(D6, lens(4,1))")) == H("Z;0;0;Z/4;0;Z;0")


class TestPuncturedAndBoundary:
    def test_punctured(self):
        assert spaces.punctured_homology(lens(5, 1)) == H("Z;Z/5;0;0")
        assert spaces.punctured_homology(Sphere(3)) == H("Z;0;0;0")
        assert spaces.punctured_homology(parse("connsum(lens(2,1),lens(3,1))")) == H("Z;Z/6;0;0")

    def test_punctured_rejects_boundary(self):
        with pytest.raises(ValidationError):
            spaces.punctured_homology(Disc(3))

    def test_boundary_E(self):
        assert spaces.boundary_E_homology(lens(7, 1), 2) == H("Z;Z/7;Z/7;0;Z")
        assert spaces.boundary_E_homology(Sphere(3), 2) == H("Z;0;0;0;Z")
        assert spaces.boundary_E_homology(parse("connsum(lens(2,1),lens(3,1))"), 2) == H("Z;Z/6;Z/6;0;Z")

    def test_relative_reading_differs_at_dim_y(self):
        assert spaces.boundary_E_homology(lens(7, 1), 2, reading="relative") == H("Z;Z/7;Z/7;Z;Z")

    def test_codim_validation(self):
        with pytest.raises(ValidationError):
            spaces.boundary_E_homology(lens(3, 1), 1)


class TestKunnethSplit:
    def test_lens_circle(self):
        s = spaces.kunneth_split(spaces.homology(lens(5, 1)), 1, 2)
        assert s.base_part == free(0) and str(s.fiber_part) == "Z/5"

    def test_degree_zero(self):
        s = spaces.kunneth_split(spaces.homology(lens(5, 1)), 1, 0)
        assert s.base_part == free(1) and s.fiber_part == free(0)

    def test_sphere(self):
        s = spaces.kunneth_split(H("Z;0;Z"), 2, 2)
        assert s.base_part == free(1) and s.fiber_part == free(1)

    @pytest.mark.parametrize("y", ["lens(3,1)", "prod(S1,S2)", "connsum(lens(2,1),lens(4,1))"])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_total_matches_product(self, y, k):
        x = spaces.homology(parse(y))
        prod = spaces.homology(Product(parse(y), Sphere(k)))
        for i in range(len(prod)):
            assert spaces.kunneth_split(x, k, i).total == prod[i]


# -- properties ---------------------------------------------------------------

closed_atoms = st.one_of(
    st.builds(Sphere, st.integers(1, 4)),
    st.builds(lambda p: lens(p, 1), st.integers(2, 9)),
)
closed = st.recursive(
    closed_atoms,
    lambda inner: st.builds(Product, inner, inner),
    max_leaves=3,
).filter(lambda e: spaces.attrs(e).dim <= 7)

three_manifolds = st.one_of(
    st.just(Sphere(3)),
    st.builds(lambda p: lens(p, 1), st.integers(2, 9)),
    st.builds(lambda p, q: ConnSum((lens(p, 1), lens(q, 1))), st.integers(2, 9), st.integers(2, 9)),
    st.just(Product(Sphere(1), Sphere(2))),
)
closed_y = st.one_of(three_manifolds, st.just(Sphere(1)), st.just(Product(Sphere(1), Sphere(1))),
                     st.just(Product(Sphere(2), Sphere(2))))


@settings(max_examples=50, deadline=None)
@given(closed, closed)
def test_product_commutes(a, b):
    assert spaces.homology(Product(a, b)) == spaces.homology(Product(b, a))


@settings(max_examples=50, deadline=None)
@given(closed)
def test_connsum_with_sphere_is_identity(a):
    d = spaces.attrs(a).dim
    assert spaces.homology(ConnSum((a, Sphere(d)))) == spaces.homology(a)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9))
def test_bcs_with_disc_is_identity(p):
    x = YZRemove(Disc(5), lens(p, 1))
    assert spaces.homology(BoundaryConnSum((x, Disc(5)))) == spaces.homology(x)


@settings(max_examples=50, deadline=None)
@given(closed_y, st.integers(2, 3))
def test_disc_and_sphere_base_differ_only_in_top_minus_one(y, c):
    n = spaces.attrs(y).dim + c
    hd = spaces.homology(YZRemove(Disc(n), y))
    hs = spaces.homology(YZRemove(Sphere(n), y))
    for j in range(n + 1):
        if j == n - 1:
            assert hd[j].free_rank == hs[j].free_rank + 1
        else:
            assert hd[j] == hs[j]


@settings(max_examples=50, deadline=None)
@given(closed_y, st.integers(2, 4))
def test_boundary_E_duality_and_shift(y, c):
    d = spaces.attrs(y).dim
    n = d + c
    h = spaces.boundary_E_homology(y, c)
    ce = spaces.punctured_homology(y)
    for j in range(1, n - 1):
        shifted = ce[j - (c - 1)] if j - (c - 1) > 0 else free(0)
        assert h[j] == direct_sum(ce[j], shifted)
    for j in range(n):
        assert h[j].free_rank == h[n - 1 - j].free_rank
        assert h[j].invariant_factors == h[n - 2 - j].invariant_factors


@settings(max_examples=50, deadline=None)
@given(closed_y, st.integers(2, 3), st.booleans())
def test_remove_splits_boundary(y, c, sphere):
    n = spaces.attrs(y).dim + c
    base = Sphere(n) if sphere else Disc(n)
    x = spaces.homology(YZRemove(base, y))
    dE = spaces.boundary_E_homology(y, c)
    ce = spaces.punctured_homology(y)
    for j in range(1, n - 1):
        assert direct_complement(dE[j], ce[j]) == x[j]
