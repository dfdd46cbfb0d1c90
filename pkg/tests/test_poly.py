import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permrat.field import cubic_extension, field_of_order
from permrat.poly import (AllZeroABC, BiPoly, DivideByZeroPoly, NotIrreducibleCubic,
                          NotSymmetric, QNotCubicMonic, UniPoly, ZeroOrConstant,
                          build_numerator_F, count_affine_points, count_points_at_infinity,
                          depressed_cubic, char3_cubic, difference_quotient, field_roots,
                          find_linear_root, gcd, is_irreducible, roots_in_cubic_extension,
                          substitute_linear, symmetric_expand, symmetric_reduce)
from permrat.ratmap import family_map


def coeff_lists(q, max_deg):
    return st.lists(st.integers(0, q - 1), min_size=0, max_size=max_deg + 1)


def test_basic_examples():
    f5 = field_of_order(5)
    X = UniPoly.x(f5)
    one = UniPoly.const(f5, 1)
    assert gcd(X * X - one, X - one) == X - one
    assert UniPoly(f5, (1, 1, 0, 1))(2) == 1
    f9 = field_of_order(9)
    d, e = 4, 7
    assert depressed_cubic(f9, d, e).derivative() == UniPoly.const(f9, d)


def test_zero_polynomial_and_division_by_zero():
    f5 = field_of_order(5)
    zero = UniPoly(f5, (0, 0))
    assert zero.degree == -1 and not zero
    with pytest.raises(DivideByZeroPoly):
        divmod(UniPoly(f5, (1, 1)), zero)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_divmod_round_trip(q, data):
    ctx = field_of_order(q)
    f = UniPoly(ctx, data.draw(coeff_lists(q, 7)))
    g = UniPoly(ctx, data.draw(coeff_lists(q, 4)))
    if not g:
        return
    quo, rem = divmod(f, g)
    assert quo * g + rem == f
    assert rem.degree < g.degree


def test_is_irreducible_examples():
    f5 = field_of_order(5)
    assert is_irreducible(UniPoly(f5, (1, 1, 0, 1)))
    f3 = field_of_order(3)
    assert not any(is_irreducible(UniPoly(f3, (e, 0, 0, 1))) for e in range(3))
    assert is_irreducible(UniPoly(field_of_order(2), (1, 1, 1)))
    with pytest.raises(ZeroOrConstant):
        is_irreducible(UniPoly(f5, (3,)))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_is_irreducible_against_trial_division(q):
    ctx = field_of_order(q)

    def monic(deg):
        for low in itertools.product(range(q), repeat=deg):
            yield UniPoly(ctx, low + (1,))

    small = {k: list(monic(k)) for k in (1, 2)}
    for deg in (2, 3, 4):
        if q > 5 and deg == 4:
            continue
        for f in monic(deg):
            divisible = any(not (f % g) for k in range(1, deg // 2 + 1) for g in small[k])
            assert is_irreducible(f) == (not divisible)


@pytest.mark.parametrize("q", [5, 7, 8, 9, 11, 16, 27, 64])
def test_field_roots(q):
    ctx = field_of_order(q)
    roots = [1, 2, min(5, q - 1)]
    f = UniPoly.from_roots(ctx, roots) * UniPoly(ctx, (1, 0, 1, 0, 0, 1))
    expect = sorted(set(roots) | {x for x in range(q) if UniPoly(ctx, (1, 0, 1, 0, 0, 1))(x) == 0})
    assert field_roots(ctx, f) == expect


def test_cubic_roots_examples():
    f5 = field_of_order(5)
    Q = UniPoly(f5, (1, 1, 0, 1))
    emb = cubic_extension(f5)
    big = emb.big
    u1, u2, u3 = roots_in_cubic_extension(Q, emb)
    assert len({u1, u2, u3}) == 3
    assert big.add(big.add(u1, u2), u3) == 0
    e2 = big.add(big.add(big.mul(u1, u2), big.mul(u2, u3)), big.mul(u1, u3))
    assert e2 == emb.embed(1)
    assert big.mul(big.mul(u1, u2), u3) == emb.embed(4)
    Qb = Q.embed(emb)
    assert all(Qb(u) == 0 for u in (u1, u2, u3))
    f3 = field_of_order(3)
    e3 = cubic_extension(f3)
    r = roots_in_cubic_extension(char3_cubic(f3, 2), e3)
    assert e3.big.add(e3.big.add(r[0], r[1]), r[2]) == e3.embed(2)
    with pytest.raises(NotIrreducibleCubic):
        roots_in_cubic_extension(UniPoly(f5, (0, 1, 0, 1)))


def test_symmetric_reduce_small_cases():
    ctx = field_of_order(7)
    S = BiPoly.from_terms(ctx, {(1, 0): 1})
    G = symmetric_reduce(BiPoly.from_terms(ctx, {(1, 0): 1, (0, 1): 1}))
    assert G == S
    G2 = symmetric_reduce(BiPoly.from_terms(ctx, {(2, 0): 1, (0, 2): 1}))
    assert G2 == BiPoly.from_terms(ctx, {(2, 0): 1, (0, 1): ctx.neg(2)})
    with pytest.raises(NotSymmetric):
        symmetric_reduce(BiPoly.from_terms(ctx, {(1, 0): 1}))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 9])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_symmetric_round_trip(q, data):
    ctx = field_of_order(q)
    terms = {}
    for _ in range(data.draw(st.integers(1, 6))):
        i, j = data.draw(st.integers(0, 4)), data.draw(st.integers(0, 4))
        c = data.draw(st.integers(0, q - 1))
        terms[(i, j)] = c
        terms[(j, i)] = c
    F = BiPoly.from_terms(ctx, terms)
    assert symmetric_expand(symmetric_reduce(F)) == F


def family_tuples(q):
    return st.tuples(*(st.integers(0, q - 1) for _ in range(5)))


@pytest.mark.parametrize("q", [3, 5, 7, 8])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_numerator_detects_collisions(q, data):
    ctx = field_of_order(q)
    a, b, c, d, e = data.draw(family_tuples(q))
    Q = depressed_cubic(ctx, d, e)
    if not (a or b or c) or not is_irreducible(Q):
        return
    F = build_numerator_F(a, b, c, Q)
    assert F.is_symmetric()
    assert F.total_degree == 6
    f = family_map(ctx, a, b, c, d, e)
    vals = [f(x) for x in range(q)]
    for x, y in itertools.permutations(range(q), 2):
        assert (F(x, y) == 0) == (vals[x] == vals[y])


def test_numerator_is_exact_difference_quotient():
    ctx = field_of_order(7)
    a, b, c, d, e = 2, 3, 4, 1, 5
    Q = depressed_cubic(ctx, d, e)
    P = UniPoly.x(ctx) * Q + UniPoly(ctx, (c, b, a))
    F = build_numerator_F(a, b, c, Q)
    XmY = BiPoly.from_terms(ctx, {(1, 0): 1, (0, 1): ctx.neg(1)})
    cross = BiPoly.from_x(P) * BiPoly.from_y(Q) - BiPoly.from_y(P) * BiPoly.from_x(Q)
    assert F * XmY == cross
    assert difference_quotient(P, Q) == F


def test_numerator_errors():
    ctx = field_of_order(5)
    with pytest.raises(AllZeroABC):
        build_numerator_F(0, 0, 0, depressed_cubic(ctx, 1, 1))
    with pytest.raises(QNotCubicMonic):
        build_numerator_F(1, 0, 0, UniPoly(ctx, (1, 1, 1)))


def test_condition_tuple_factorization_q5():
    ctx = field_of_order(5)
    d, e = 1, 1
    a, b, c = ctx.scalar(-3, d), ctx.scalar(-9, e), ctx.mul(d, d)
    Q = depressed_cubic(ctx, d, e)
    emb = cubic_extension(ctx)
    big = emb.big
    F = build_numerator_F(a, b, c, Q)
    prod = BiPoly.from_terms(big, {(0, 0): 1})
    for u in roots_in_cubic_extension(Q, emb):
        const = big.neg(big.add(emb.embed(d), big.scalar(2, big.mul(u, u))))
        prod = prod * BiPoly.from_terms(big, {(1, 1): 1, (1, 0): big.neg(u), (0, 1): big.neg(u),
                                              (0, 0): const})
    assert F.embed(emb) == prod
    G = symmetric_reduce(F)
    w = find_linear_root(G, emb)
    assert w is not None
    assert w.v == big.add(emb.embed(d), big.scalar(2, big.mul(w.u, w.u)))
    assert not substitute_linear(G.embed(emb), w.u, w.v)


def test_no_witness_off_condition():
    ctx = field_of_order(7)
    Q = depressed_cubic(ctx, 0, 5)
    assert is_irreducible(Q)
    G = symmetric_reduce(build_numerator_F(1, 1, 1, Q))
    assert find_linear_root(G) is None


def test_char3_witness():
    ctx = field_of_order(9)
    emb = cubic_extension(ctx)
    big = emb.big
    for e in range(9):
        Q = char3_cubic(ctx, e)
        if not is_irreducible(Q):
            continue
        G = symmetric_reduce(build_numerator_F(1, 0, 0, Q))
        w = find_linear_root(G, emb)
        assert w is not None
        assert w.v == big.neg(big.add(w.u, big.mul(w.u, w.u)))


@pytest.mark.parametrize("q", [5, 7])
def test_witness_is_always_exact(q):
    ctx = field_of_order(q)
    emb = cubic_extension(ctx)
    seen = 0
    for a, b, c in itertools.islice(itertools.product(range(q), repeat=3), 1, None):
        Q = depressed_cubic(ctx, 1, 1) if q == 5 else depressed_cubic(ctx, 0, 3)
        G = symmetric_reduce(build_numerator_F(a, b, c, Q))
        w = find_linear_root(G, emb)
        if w is not None:
            seen += 1
            assert not substitute_linear(G.embed(emb), w.u, w.v)
    assert seen >= 1


def test_point_counts():
    ctx = field_of_order(7)
    line = BiPoly.from_terms(ctx, {(1, 0): 1, (0, 1): 6})
    pc = count_affine_points(line)
    assert (pc.affine, pc.diagonal, pc.off_diagonal) == (7, 7, 0)
    pr = build_numerator_F(0, 2, 0, depressed_cubic(ctx, 0, 5))
    assert count_affine_points(pr).off_diagonal == 0
    non = build_numerator_F(1, 1, 1, depressed_cubic(ctx, 0, 5))
    assert count_affine_points(non).off_diagonal > 0
    assert count_points_at_infinity(non) == 2


def test_bipoly_text_round_trip():
    ctx = field_of_order(7)
    F = build_numerator_F(1, 2, 3, depressed_cubic(ctx, 0, 5))
    assert BiPoly.parse(ctx, F.format()) == F
