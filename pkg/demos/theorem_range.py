"""
The condition set is everything
================================

Past the small fields the search returns only the condition tuples.  This
runs a few moderate q; ``permrat verify-theorem --q 113`` does the first q
of the claimed range.
"""

import time

from permrat.classify import CHAR3, search_q

for q in (19, 29, 31, 32):
    start = time.perf_counter()
    r = search_q(q)
    print(f"q={q:3d} {r.normalization:<40s} PRs {len(r.prs_found):4d}"
          f" verdict {r.verdict}  ({time.perf_counter() - start:.1f}s)")

# characteristic 3 with denominator X^3 + X^2 + e: only (1, 0, 0, e) once n >= 2
for q in (9, 27, 81):
    r = search_q(q, CHAR3)
    rows = sorted({t.values()[:3] for t in r.prs_found})
    print(f"q={q:3d} X^3+X^2+e family: {len(r.prs_found)} PRs, (a,b,c) values {rows}")
