"""
Exhaustive search at small q
============================

Every tuple (a, b, c, d, e) with X^3 + dX + e irreducible is tested; the
permutations that do not satisfy a = -3d, b = -9e, c = d^2 are the sporadic
ones.  They are compared with the listed rows up to equivalence.
"""

from permrat.classify import (condition_tuples, expand_orbits, format_u_tuple, search_q,
                              table_tuples)
from permrat.criteria import GENERAL
from permrat.field import field_of_order
from permrat.ratmap import equivalent_small_q

for q in (2, 3, 4, 5, 7, 8):
    ctx = field_of_order(q)
    report = search_q(q)
    print(f"q={q}: scanned {report.tuples_scanned}, prefilter kept {report.prefilter_survivors},"
          f" PRs {len(report.prs_found)}, sporadic {len(report.extras)}")

# q = 4: three sporadic tuples fall outside the X -> sX orbits of the listed
# rows; each is still equivalent to a listed row under PGL(2, F_4) on both sides
ctx = field_of_order(4)
listed = table_tuples(ctx, GENERAL)
found = search_q(4).extras
for t in sorted(set(found) - expand_orbits(ctx, listed)):
    twin = next(s for s in listed if equivalent_small_q(t.ratmap(ctx), s.ratmap(ctx)))
    print(f"  q=4 {format_u_tuple(ctx, t)} ~ listed {format_u_tuple(ctx, twin)}")

# q = 8: three sporadic tuples, one Frobenius orbit, not equivalent to the family
ctx = field_of_order(8)
conds = condition_tuples(ctx, GENERAL)
for t in search_q(8).extras:
    near = any(equivalent_small_q(t.ratmap(ctx), s.ratmap(ctx)) for s in conds)
    print(f"  q=8 sporadic {t.values()}; equivalent to a condition tuple: {near}")
