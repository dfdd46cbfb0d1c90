"""
Collision curves and point counts
=================================

For f = P/Q the pairs x != y with f(x) = f(y) are the off-diagonal zeros of
F(X, Y) = (P(X)Q(Y) - P(Y)Q(X))/(X - Y).  When F has no factor over F_q^3
its curve has many points, so f cannot permute.
"""

import math

from permrat.classify import (audit_bound, check_factorization, condition_tuples,
                              reduced_numerator)
from permrat.criteria import GENERAL
from permrat.field import field_of_order
from permrat.poly import count_affine_points, build_numerator_F

# on the condition set G(s, p) with F(X, Y) = G(X + Y, XY) splits into three
# conjugate linear factors, and the curve has no off-diagonal points
ctx = field_of_order(11)
t = condition_tuples(ctx, GENERAL)[0]
G = reduced_numerator(ctx, t)
print("tuple", t.values(), "G has degrees", (G.deg_x, G.deg_y))
print("G splits over F_11^3 as predicted:", check_factorization(ctx, t))
pc = count_affine_points(build_numerator_F(t.a, t.b, t.c, t.cubic(ctx)))
print("affine points:", pc.affine, "diagonal:", pc.diagonal, "off-diagonal:", pc.off_diagonal)

# generic tuples: projective point counts against q + 1 - 8 sqrt(q) - 20
for q in (49, 121):
    recs = audit_bound(q, samples=10, seed=3)
    floor = q + 1 - 8 * math.sqrt(q) - 20
    counts = sorted(r.count for r in recs)
    print(f"q={q}: bound {floor:.1f}, counts {counts}")
