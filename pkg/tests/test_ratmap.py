import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permrat.classify import table_tuples
from permrat.criteria import CHAR3, GENERAL
from permrat.field import INF, FieldMismatch, cubic_extension, field_of_order
from permrat.poly import UniPoly, is_irreducible, roots_in_cubic_extension
from permrat.ratmap import (DegreeMismatch, FieldTooLargeForEquivalence, Moebius, RatMap,
                            RNotDegreeThree, all_moebius, compose, equivalent_small_q,
                            eval_p1, family_map, from_trace_form, is_permutation, parse_ratmap)
from permrat.search import transform_tuple


def brute_is_permutation(f):
    q = f.ctx.q
    images = {eval_p1(f, x) for x in list(range(q)) + [INF]}
    return len(images) == q + 1


def test_eval_p1_examples():
    f5 = field_of_order(5)
    f = RatMap(UniPoly(f5, (0, 0, 0, 0, 1)) + UniPoly(f5, (1,)), UniPoly(f5, (1, 0, 0, 1)))
    assert eval_p1(f, INF) == INF
    inv = RatMap(UniPoly(f5, (1,)), UniPoly.x(f5))
    assert eval_p1(inv, 0) == INF
    assert eval_p1(inv, INF) == 0
    assert eval_p1(inv, 2) == 3
    lin = RatMap(UniPoly(f5, (1, 2)), UniPoly(f5, (3, 4)))
    assert eval_p1(lin, INF) == f5.div(2, 4)


def test_lowest_terms():
    f5 = field_of_order(5)
    X = UniPoly.x(f5)
    one = UniPoly.const(f5, 1)
    f = RatMap((X - one) * (X + one), (X - one) * UniPoly.const(f5, 2))
    assert f.P == (X + one).scale(3) and f.Q == one
    with pytest.raises(ZeroDivisionError):
        RatMap(X, UniPoly(f5))


def test_is_permutation_examples():
    f2 = field_of_order(2)
    assert is_permutation(family_map(f2, 0, 0, 1, 1, 1))
    f5 = field_of_order(5)
    X = UniPoly.x(f5)
    assert is_permutation(RatMap(X ** 3, UniPoly.const(f5, 1)))
    assert not is_permutation(RatMap(X ** 2, UniPoly.const(f5, 1)))
    assert is_permutation(RatMap(UniPoly.const(f5, 1), X))


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_is_permutation_matches_brute_force(q, data):
    ctx = field_of_order(q)
    P = UniPoly(ctx, data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=5)))
    Q = UniPoly(ctx, data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=4)))
    if not Q:
        return
    f = RatMap(P, Q)
    assert is_permutation(f) == brute_is_permutation(f)


def test_compose_identity_and_inversion():
    f5 = field_of_order(5)
    X = UniPoly.x(f5)
    f = RatMap(X ** 4, UniPoly.const(f5, 1))
    ident = Moebius.identity(f5)
    assert compose(ident, f, ident) == f
    flip = Moebius(f5, 0, 1, 1, 0)
    g = compose(flip, f, ident)
    assert g == RatMap(UniPoly.const(f5, 1), X ** 4)


@pytest.mark.parametrize("q", [3, 4, 5])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_compose_is_pointwise(q, data):
    ctx = field_of_order(q)
    moebius = list(all_moebius(ctx))
    phi = data.draw(st.sampled_from(moebius))
    psi = data.draw(st.sampled_from(moebius))
    a, b, c, d, e = (data.draw(st.integers(0, q - 1)) for _ in range(5))
    f = family_map(ctx, a, b, c, d, e)
    g = compose(phi, f, psi)
    for x in list(range(q)) + [INF]:
        assert eval_p1(g, x) == phi(f(psi(x)))
    assert is_permutation(g) == is_permutation(f)


def test_all_moebius_counts():
    for q in (2, 3, 4, 5):
        ctx = field_of_order(q)
        group = list(all_moebius(ctx))
        assert len(group) == q * (q * q - 1)
        assert len(set(group)) == len(group)


@pytest.mark.parametrize("q", [5, 7, 9])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_transform_tuple_matches_substitution(q, data):
    ctx = field_of_order(q)
    a, b, c, d, e = (data.draw(st.integers(0, q - 1)) for _ in range(5))
    s = data.draw(st.integers(1, q - 1))
    w = data.draw(st.integers(0, q - 1)) if ctx.p == 3 else 0
    f = family_map(ctx, a, b, c, d, e)
    from permrat.criteria import ParamTuple

    t2 = transform_tuple(ctx, ParamTuple(a, b, c, d, e), s, w)
    g = family_map(ctx, *t2.values())
    # g(X) = s^-1 (f(sX + w) - w)
    phi = Moebius(ctx, ctx.inv(s), ctx.neg(ctx.div(w, s)), 0, 1)
    psi = Moebius(ctx, s, w, 0, 1)
    assert compose(phi, f, psi) == g


def test_trace_form_char3_examples():
    f3 = field_of_order(3)
    emb = cubic_extension(f3)
    Q = UniPoly(f3, (1, 2, 0, 1))  # X^3 - X + 1
    r = roots_in_cubic_extension(Q, emb)[0]
    f = from_trace_form(emb, emb.embed(1), r)
    X = UniPoly.x(f3)
    assert f == RatMap(X * Q - UniPoly.const(f3, 1), Q)
    assert is_permutation(f)
    g = from_trace_form(emb, emb.embed(2), r)
    assert g == RatMap(X * Q + UniPoly.const(f3, 1), Q)
    assert is_permutation(g)


@pytest.mark.parametrize("q", [4, 5, 7])
def test_trace_form_with_rational_b(q):
    ctx = field_of_order(q)
    emb = cubic_extension(ctx)
    Q = next(UniPoly(ctx, (e, d, 0, 1)) for d in range(q) for e in range(q)
             if is_irreducible(UniPoly(ctx, (e, d, 0, 1))))
    r = roots_in_cubic_extension(Q, emb)[0]
    X = UniPoly.x(ctx)
    for b in range(1, q):
        f = from_trace_form(emb, emb.embed(b), r)
        assert f == RatMap(X * Q + Q.derivative().scale(b), Q)


def test_trace_form_errors():
    f5 = field_of_order(5)
    emb = cubic_extension(f5)
    with pytest.raises(RNotDegreeThree):
        from_trace_form(emb, 1, emb.embed(2))


def test_equivalence_examples():
    f3 = field_of_order(3)
    Q = UniPoly(f3, (1, 2, 0, 1))
    X = UniPoly.x(f3)
    plus = RatMap(X * Q + UniPoly.const(f3, 1), Q)
    minus = RatMap(X * Q - UniPoly.const(f3, 1), Q)
    assert equivalent_small_q(plus, plus)
    # conjugating by X -> -X gives X - 1/(X^3 - X - 1)
    neg = Moebius(f3, 2, 0, 0, 1)
    Q2 = UniPoly(f3, (2, 2, 0, 1))
    assert compose(neg, minus, neg) == RatMap(X * Q2 - UniPoly.const(f3, 1), Q2)
    # the two signs give inequivalent maps over F_3; confirm by brute force
    assert not equivalent_small_q(plus, minus)
    group = list(all_moebius(f3))
    assert not any(compose(phi, minus, psi) == plus for phi in group for psi in group)


@pytest.mark.parametrize("q", [3, 4, 5])
@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_equivalence_under_random_moebius(q, data):
    ctx = field_of_order(q)
    moebius = list(all_moebius(ctx))
    a, b, c, d, e = (data.draw(st.integers(0, q - 1)) for _ in range(5))
    f = family_map(ctx, a, b, c, d, e)
    if f.degree != 4:
        return
    g = compose(data.draw(st.sampled_from(moebius)), f, data.draw(st.sampled_from(moebius)))
    assert equivalent_small_q(f, g)
    assert equivalent_small_q(g, f)


def test_equivalence_distinguishes_permutation_from_non():
    f5 = field_of_order(5)
    X = UniPoly.x(f5)
    one = UniPoly.const(f5, 1)
    perm = RatMap(X ** 3, one)
    non = RatMap(X ** 3 + X, one)
    assert is_permutation(perm) and not is_permutation(non)
    assert not equivalent_small_q(perm, non)


def test_equivalence_errors():
    f5 = field_of_order(5)
    X = UniPoly.x(f5)
    one = UniPoly.const(f5, 1)
    with pytest.raises(DegreeMismatch):
        equivalent_small_q(RatMap(X ** 3, one), RatMap(X ** 2, one))
    with pytest.raises(FieldMismatch):
        equivalent_small_q(RatMap(X, one), RatMap(UniPoly.x(field_of_order(7)), UniPoly.const(field_of_order(7), 1)))
    big = field_of_order(17)
    with pytest.raises(FieldTooLargeForEquivalence):
        equivalent_small_q(RatMap(UniPoly.x(big), UniPoly.const(big, 1)),
                           RatMap(UniPoly.x(big), UniPoly.const(big, 1)))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_tabulated_tuples_are_permutations(q):
    ctx = field_of_order(q)
    rows = table_tuples(ctx, GENERAL)
    assert rows
    for t in rows:
        assert is_irreducible(t.cubic(ctx))
        assert is_permutation(t.ratmap(ctx))


def test_char3_tabulated_tuples_are_permutations():
    ctx = field_of_order(3)
    rows = table_tuples(ctx, CHAR3)
    assert len(rows) == 4
    assert all(is_permutation(t.ratmap(ctx)) for t in rows)


def test_parse_ratmap():
    f7 = field_of_order(7)
    f = parse_ratmap(f7, "1,0,0,0,1 | 1,0,0,1")
    assert f.degree == 4
    assert parse_ratmap(f7, "0,1 |") == RatMap(UniPoly.x(f7), UniPoly.const(f7, 1))


def test_moebius_rejects_singular():
    from permrat.ratmap import RatMapError

    with pytest.raises(RatMapError):
        Moebius(field_of_order(5), 1, 2, 2, 4)


def test_family_map_degree():
    ctx = field_of_order(7)
    for a, b, c in itertools.product(range(2), repeat=3):
        if a or b or c:
            assert family_map(ctx, a, b, c, 0, 3).degree == 4
