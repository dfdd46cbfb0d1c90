import json
import math

import pytest

from permrat.classify import (EXACT, EXTRAS, SearchReport, audit_bound,
                              check_factorization, condition_tuples, degq2_existence_scan,
                              expand_orbits, format_u_element, format_u_tuple, hasse_weil_audit,
                              identity_suite, point_count_bound, parse_u_element, prime_powers,
                              reproduce_tables, search_q, table_tuples, general_condition,
                              char3_condition, verify_sufficiency, verify_theorem)
from permrat.criteria import CHAR3, GENERAL, ParamTuple, WrongCharacteristic
from permrat.field import FieldTooLarge, field_of_order
from permrat.ratmap import equivalent_small_q, is_permutation


def test_u_element_text():
    f4 = field_of_order(4)
    assert [format_u_element(f4, x) for x in range(4)] == ["0", "1", "u", "1+u"]
    for x in range(4):
        assert parse_u_element(f4, format_u_element(f4, x)) == x
    f27 = field_of_order(27)
    for x in range(27):
        assert parse_u_element(f27, format_u_element(f27, x)) == x
    assert parse_u_element(f27, "2u^2") == f27.element([0, 0, 2])


def test_table_tuples_sizes():
    sizes = {q: len(table_tuples(field_of_order(q), GENERAL)) for q in (2, 4, 3, 5, 7)}
    assert sizes == {2: 2, 4: 5, 3: 3, 5: 14, 7: 4}
    assert len(table_tuples(field_of_order(3), CHAR3)) == 4
    assert table_tuples(field_of_order(11), GENERAL) == []


def test_conditions():
    f7 = field_of_order(7)
    t = ParamTuple(f7.scalar(-3, 1), f7.scalar(-9, 3), 1, 1, 3)
    assert general_condition(f7, t)
    assert not general_condition(f7, ParamTuple(1, 1, 1, 1, 3))
    f9 = field_of_order(9)
    assert char3_condition(f9, ParamTuple.char3(1, 0, 0, 2))
    with pytest.raises(WrongCharacteristic):
        char3_condition(f7, ParamTuple.char3(1, 0, 0, 2))


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13, 16])
def test_condition_tuples_are_permutations(q):
    ctx = field_of_order(q)
    tuples = condition_tuples(ctx, GENERAL)
    assert tuples
    for t in tuples:
        assert general_condition(ctx, t)
        assert is_permutation(t.ratmap(ctx))


def test_search_q2_finds_the_listed_rows():
    report = search_q(2)
    ctx = field_of_order(2)
    assert set(report.extras) == set(table_tuples(ctx, GENERAL))
    assert report.verdict == EXTRAS


def test_search_q3_char3_finds_the_listed_rows():
    report = search_q(3, CHAR3)
    ctx = field_of_order(3)
    extras = [t for t in report.prs_found if not char3_condition(ctx, t)]
    assert sorted(extras) == sorted(table_tuples(ctx, CHAR3))


def test_search_q13_is_exact():
    report = search_q(13)
    assert report.verdict == EXACT
    assert report.prs_found == report.condition_set


@pytest.mark.parametrize("q", [16, 17, 19, 23, 25, 27])
def test_search_is_exact_between_tables_and_theorem(q):
    report = search_q(q)
    assert report.verdict == EXACT


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_verify_theorem_below_range_matches_table(q):
    report = verify_theorem(q, GENERAL)
    assert report.passed


def test_verify_theorem_char3_q3():
    assert verify_theorem(3, CHAR3).passed
    assert verify_theorem(9, CHAR3).passed


def test_q4_table_omits_equivalent_rows():
    # three PRs at q = 4 lie outside the listed rows' X -> sX orbits but are
    # PGL(2)-equivalent to listed rows
    ctx = field_of_order(4)
    report = verify_theorem(4, GENERAL)
    assert not report.passed
    listed = table_tuples(ctx, GENERAL)
    unlisted = set(report.extras) - expand_orbits(ctx, listed)
    assert {format_u_tuple(ctx, t) for t in unlisted} == {
        "1,0,0,u,1", "1,u,u,1,1", "1,1+u,1+u,1,1"}
    for t in unlisted:
        assert any(equivalent_small_q(t.ratmap(ctx), s.ratmap(ctx)) for s in listed)


def test_q8_has_sporadic_tuples():
    ctx = field_of_order(8)
    report = search_q(8)
    extras = {t.values() for t in report.extras}
    assert extras == {(1, 3, 6, 4, 2), (1, 5, 3, 7, 4), (1, 6, 5, 2, 7)}
    # a single orbit under the Frobenius x -> x^2
    frob = {tuple(ctx.frobenius(v) for v in t) for t in extras}
    assert frob == extras
    conds = condition_tuples(ctx, GENERAL)
    for t in report.extras:
        assert not any(equivalent_small_q(t.ratmap(ctx), s.ratmap(ctx)) for s in conds)


def test_reproduce_tables_diff_is_confined_to_q4():
    report = reproduce_tables()
    bad = [(d.table, d.q) for d in report.diffs if not d.ok]
    assert bad == [("1", 4)]
    d4 = next(d for d in report.diffs if d.q == 4)
    assert len(d4.only_found) == 3 and not d4.only_expected
    assert set(d4.note) == set(d4.only_found)
    tsv = report.to_tsv()
    assert tsv.startswith("table\tq\ttuple\tfound\texpected\tDIFF\tnote\n")
    assert "# total diff lines: 3" in tsv
    for line in report.to_jsonl().splitlines():
        json.loads(line)


def test_report_serialization_skips_timing():
    a = search_q(7)
    b = search_q(7)
    a.elapsed, b.elapsed = 1.0, 99.0
    assert a.to_tsv() == b.to_tsv()
    assert a.to_jsonl() == b.to_jsonl()
    assert a == b
    summary = json.loads(a.to_jsonl().splitlines()[0])["summary"]
    assert "elapsed" not in summary


def test_search_rejects_large_q():
    with pytest.raises(FieldTooLarge):
        search_q(4099)


def test_sufficiency_small():
    report = verify_sufficiency(prime_powers(2, 16))
    assert report.ok
    assert [r.q for r in report.rows] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
    char3 = verify_sufficiency([3, 9, 27], CHAR3)
    assert char3.ok


def test_sufficiency_q27_trace_example():
    ctx = field_of_order(27)
    # X^3 - X - b is irreducible over F_27 exactly when Tr(b) != 0
    hits = 0
    for b in range(27):
        t = ParamTuple(0, 0, 1, ctx.neg(1), b)
        irreducible = t.is_candidate(ctx)
        assert irreducible == (ctx.trace(ctx.neg(b), 3) != 0)
        if irreducible:
            hits += 1
            assert is_permutation(t.ratmap(ctx))
            assert check_factorization(ctx, t)
    assert hits == 18


def test_prime_powers():
    assert prime_powers(2, 20) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]


def test_identity_suite_small():
    for q in (3, 4, 5):
        report = identity_suite(q)
        assert report.ok, report.checks
        assert "carlitz" in report.checks
    assert "char3_relation" in identity_suite(9).checks


def test_degq2_scan():
    counts = {q: len(degq2_existence_scan(q)) for q in (2, 3, 4, 5)}
    assert counts == {2: 6, 3: 54, 4: 120, 5: 200}
    assert degq2_existence_scan(9) == []
    with pytest.raises(FieldTooLarge):
        degq2_existence_scan(16)


def test_point_count_bound_value():
    assert point_count_bound(121, 3, 3, 6) == pytest.approx(121 + 1 - 8 * 11 - 20)
    assert point_count_bound(169, 3, 3, 6) == pytest.approx(170 - 8 * math.sqrt(169) - 20)


def test_audit_skips_condition_tuples():
    ctx = field_of_order(11)
    t = condition_tuples(ctx, GENERAL)[0]
    rec = hasse_weil_audit(ctx, t)
    assert not rec.applicable and rec.count is None


def test_audit_small_sample():
    recs = audit_bound(49, samples=10, seed=1)
    assert len(recs) == 10
    for r in recs:
        assert r.applicable
        assert (r.d1, r.d2, r.d3, r.d) == (3, 3, 6, 6)
        assert r.passed
    assert audit_bound(49, samples=10, seed=1) == recs


def test_search_report_fields():
    r = search_q(5)
    assert isinstance(r, SearchReport)
    assert r.tuples_scanned >= r.prefilter_survivors >= len(r.prs_found)
    assert r.normalization.startswith("a in {0,1,u}")
