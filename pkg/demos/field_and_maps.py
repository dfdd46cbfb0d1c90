"""
Finite fields and rational maps of the projective line
=======================================================

Build a small field, evaluate a degree-four map on P^1, and check that it
permutes the q + 1 points.
"""

from permrat.classify import format_u_element
from permrat.criteria import hermite_test
from permrat.field import INF, cubic_extension, field_of_order
from permrat.poly import UniPoly, is_irreducible, roots_in_cubic_extension
from permrat.ratmap import RatMap, family_map, from_trace_form, is_permutation
from permrat.search import irreducible_cubics

# F_9 is F_3[u]/(u^2 + 1); elements are indices c0 + 3 c1
f9 = field_of_order(9)
print("modulus of F_9 (low degree first):", f9.modulus)
print("u * u =", format_u_element(f9, f9.mul(3, 3)))

# X + (aX^2 + bX + c)/(X^3 + dX + e) over F_7 with a = -3d, b = -9e, c = d^2
f7 = field_of_order(7)
d, e = irreducible_cubics(f7)[0]
Q = UniPoly(f7, (e, d, 0, 1))
print(f"X^3 + {d}X + {e} irreducible over F_7:", is_irreducible(Q))
f = family_map(f7, f7.scalar(-3, d), f7.scalar(-9, e), f7.mul(d, d), d, e)
images = [f(x) for x in range(7)] + [f(INF)]
print("images of 0..6, inf:", images)
print("permutation:", is_permutation(f), " Hermite power sums agree:", hermite_test(f))

# the same kind of map written with the roots of its denominator:
# X + sum over r, r^q, r^q^2 of b/(X - r)
f3 = field_of_order(3)
emb = cubic_extension(f3)
Q3 = UniPoly(f3, (1, 2, 0, 1))  # X^3 - X + 1
r = roots_in_cubic_extension(Q3, emb)[0]
g = from_trace_form(emb, emb.embed(1), r)
print("trace form over F_3:", g.format(), "-> permutation:", is_permutation(g))

# a map with a repeated value is caught by the same test
h = RatMap(UniPoly(f7, (0, 0, 1)), UniPoly.const(f7, 1))
print("X^2 permutes P^1(F_7):", is_permutation(h))
