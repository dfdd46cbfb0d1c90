"""Dense univariate and bivariate polynomials over a FieldCtx.

Also builds the difference-quotient numerator F(X, Y) of a rational map,
its reduction G with F(X, Y) = G(X + Y, XY), and the search for linear
roots Y = uX + v of G over the cubic extension.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .field import Embedding, FieldCtx, FieldMismatch, cubic_extension

log = logging.getLogger(__name__)

COUNT_LIMIT = 2 ** 12


class PolyError(ValueError):
    pass


class DivideByZeroPoly(ZeroDivisionError):
    pass


class ZeroOrConstant(PolyError):
    pass


class NotIrreducibleCubic(PolyError):
    pass


class AllZeroABC(PolyError):
    pass


class QNotCubicMonic(PolyError):
    pass


class NotSymmetric(PolyError):
    pass


class FieldTooLargeForCount(PolyError):
    pass


def _trimmed(cs) -> tuple:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class UniPoly:
    """Polynomial over ``ctx`` with coefficients listed low degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        self.ctx = ctx
        self.coeffs = _trimmed(int(c) for c in coeffs)

    @classmethod
    def x(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, (c,))

    @classmethod
    def from_roots(cls, ctx, roots):
        out = cls(ctx, (1,))
        for r in roots:
            out = out * cls(ctx, (ctx.neg(r), 1))
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)} over F_{self.ctx.q})"

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _same(self, other):
        if isinstance(other, int):
            return UniPoly(self.ctx, (other,))
        if other.ctx != self.ctx:
            raise FieldMismatch("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._same(other)
        add = self.ctx.add
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly(self.ctx, [add(x, b[i]) if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._same(other))

    def __mul__(self, other):
        other = self._same(other)
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(ctx)
        out = [0] * (len(a) + len(b) - 1)
        mul, add = ctx.mul, ctx.add
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return UniPoly(ctx, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "UniPoly":
        return UniPoly(self.ctx, [self.ctx.mul(c, x) for x in self.coeffs])

    def __pow__(self, k: int):
        out = UniPoly(self.ctx, (1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        other = self._same(other)
        if not other:
            raise DivideByZeroPoly("division by the zero polynomial")
        ctx = self.ctx
        r = list(self.coeffs)
        db = other.degree
        inv = ctx.inv(other.lead)
        quo = [0] * max(0, len(r) - db)
        bc = other.coeffs
        for k in range(len(r) - 1 - db, -1, -1):
            c = ctx.mul(r[k + db], inv)
            quo[k] = c
            if c:
                for i, y in enumerate(bc):
                    if y:
                        r[k + i] = ctx.sub(r[k + i], ctx.mul(c, y))
        return UniPoly(ctx, quo), UniPoly(ctx, r[:db] if db > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "UniPoly":
        if not self:
            return self
        return self.scale(self.ctx.inv(self.lead))

    def __call__(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def evaluate_all(self) -> np.ndarray:
        """Values at every element of the field, in enumeration order."""
        ctx = self.ctx
        xs = np.arange(ctx.q, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = ctx.vadd(ctx.vmul(acc, xs), np.int64(c))
        return acc

    def derivative(self) -> "UniPoly":
        ctx = self.ctx
        return UniPoly(ctx, [ctx.scalar(i, c) for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly(self.ctx)
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly(self.ctx, (c,))
        return acc

    def powmod(self, k: int, mod: "UniPoly") -> "UniPoly":
        out = UniPoly(self.ctx, (1,)) % mod
        base = self % mod
        while k:
            if k & 1:
                out = (out * base) % mod
            base = (base * base) % mod
            k >>= 1
        return out

    def map_coeffs(self, ctx: FieldCtx, fn) -> "UniPoly":
        return UniPoly(ctx, [fn(c) for c in self.coeffs])

    def embed(self, emb: Embedding) -> "UniPoly":
        return self.map_coeffs(emb.big, emb.embed)

    def format(self) -> str:
        return ",".join(str(c) for c in self.coeffs) or "0"


def gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while g:
        f, g = g, f % g
    return f.monic()


def has_root(f: UniPoly) -> bool:
    ctx = f.ctx
    if ctx.has_tables:
        return bool(np.any(f.evaluate_all() == 0))
    return any(f(x) == 0 for x in ctx.elements())


def is_irreducible(f: UniPoly) -> bool:
    """Irreducibility over f's field.

    Degree 2 and 3 use a root scan; higher degrees check
    gcd(X^(q^i) - X mod f, f) = 1 for i <= deg f / 2.
    """
    if f.degree < 1:
        raise ZeroOrConstant("irreducibility of a constant")
    if f.degree == 1:
        return True
    if f.degree <= 3:
        return not has_root(f)
    ctx = f.ctx
    fm = f.monic()
    x = UniPoly.x(ctx)
    xq = x
    for _ in range(1, f.degree // 2 + 1):
        xq = xq.powmod(ctx.q, fm)
        if gcd(fm, xq - x).degree > 0:
            return False
    return True


def field_roots(ctx: FieldCtx, f) -> list[int]:
    """All roots in ctx of f (a UniPoly or a coefficient list), sorted.

    Cantor-Zassenhaus equal-degree splitting with deterministic
    splitting elements, so the cost is polylogarithmic in q.
    """
    if not isinstance(f, UniPoly):
        f = UniPoly(ctx, f)
    if f.degree < 1:
        raise ZeroOrConstant("roots of a constant")
    f = f.monic()
    x = UniPoly.x(ctx)
    lin = gcd(f, x.powmod(ctx.q, f) - x)
    if lin.degree <= 0:
        return []
    roots = []
    _split(lin, roots)
    return sorted(roots)


def _split(g: UniPoly, out: list):
    ctx = g.ctx
    if g.degree == 1:
        out.append(ctx.neg(g.coeffs[0]))
        return
    if ctx.q <= 64 or g.degree == ctx.q:
        out.extend(r for r in ctx.elements() if g(r) == 0)
        return
    x = UniPoly.x(ctx)
    delta = 1
    for _ in range(1, ctx.q):
        # successive powers of a primitive element spread over the whole
        # field, unlike small indices which sit in a low-degree subspace
        delta = ctx.mul(delta, ctx.primitive)
        if ctx.p == 2:
            t = UniPoly(ctx, (0, delta)) % g
            acc = t
            for _ in range(ctx.n - 1):
                t = (t * t) % g
                acc = acc + t
            h = gcd(g, acc)
        else:
            h = gcd(g, (x + UniPoly.const(ctx, delta)).powmod((ctx.q - 1) // 2, g) - 1)
        if 0 < h.degree < g.degree:
            _split(h, out)
            _split(g // h, out)
            return
    raise AssertionError("splitting failed")  # pragma: no cover


def roots_in_cubic_extension(f: UniPoly, ext: Embedding | None = None):
    """The three roots (u, u^q, u^(q^2)) of an irreducible cubic, in F_{q^3}.

    u is the smallest root in the enumeration order of the extension.
    """
    ctx = f.ctx
    if f.degree != 3 or not is_irreducible(f):
        raise NotIrreducibleCubic(f"{f!r} is not an irreducible cubic")
    ext = ext or cubic_extension(ctx)
    big = ext.big
    fe = f.embed(ext)
    roots = field_roots(big, fe)
    if len(roots) != 3:
        raise AssertionError("irreducible cubic did not split in F_{q^3}")
    u1 = roots[0]
    u2 = big.pow(u1, ctx.q)
    u3 = big.pow(u2, ctx.q)
    return u1, u2, u3


# --------------------------------------------------------------------------
# bivariate

class BiPoly:
    """Dense polynomial sum c[i][j] X^i Y^j over ``ctx``."""

    __slots__ = ("ctx", "grid")

    def __init__(self, ctx: FieldCtx, grid):
        self.ctx = ctx
        rows = [list(r) for r in grid]
        width = max((len(r) for r in rows), default=0)
        rows = [r + [0] * (width - len(r)) for r in rows]
        while rows and not any(rows[-1]):
            rows.pop()
        while rows and rows[0] and not any(r[-1] for r in rows):
            for r in rows:
                r.pop()
        if rows and not rows[0]:
            rows = []
        self.grid = tuple(tuple(int(c) for c in r) for r in rows)

    @classmethod
    def from_terms(cls, ctx, terms: dict):
        if not terms:
            return cls(ctx, [])
        dx = max(i for i, _ in terms) + 1
        dy = max(j for _, j in terms) + 1
        grid = [[0] * dy for _ in range(dx)]
        for (i, j), c in terms.items():
            grid[i][j] = ctx.add(grid[i][j], c)
        return cls(ctx, grid)

    @classmethod
    def from_x(cls, f: UniPoly):
        return cls(f.ctx, [[c] for c in f.coeffs])

    @classmethod
    def from_y(cls, f: UniPoly):
        return cls(f.ctx, [list(f.coeffs)])

    def terms(self) -> dict:
        return {(i, j): c for i, row in enumerate(self.grid) for j, c in enumerate(row) if c}

    @property
    def deg_x(self) -> int:
        return len(self.grid) - 1

    @property
    def deg_y(self) -> int:
        return (len(self.grid[0]) - 1) if self.grid else -1

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms()), default=-1)

    def __bool__(self):
        return bool(self.grid)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.ctx == other.ctx and self.grid == other.grid
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.grid))

    def __repr__(self):
        return f"BiPoly({self.terms()} over F_{self.ctx.q})"

    def coeff(self, i, j) -> int:
        if 0 <= i < len(self.grid) and 0 <= j < len(self.grid[0]):
            return self.grid[i][j]
        return 0

    def __add__(self, other):
        ctx = self.ctx
        t = self.terms()
        for k, c in other.terms().items():
            t[k] = ctx.add(t.get(k, 0), c)
        return BiPoly.from_terms(ctx, t)

    def __neg__(self):
        return BiPoly(self.ctx, [[self.ctx.neg(c) for c in r] for r in self.grid])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        ctx = self.ctx
        out = {}
        ta, tb = self.terms(), other.terms()
        for (i, j), c in ta.items():
            for (k, l), d in tb.items():
                key = (i + k, j + l)
                out[key] = ctx.add(out.get(key, 0), ctx.mul(c, d))
        return BiPoly.from_terms(ctx, out)

    def scale(self, c):
        return BiPoly(self.ctx, [[self.ctx.mul(c, x) for x in r] for r in self.grid])

    def __pow__(self, k):
        out = BiPoly(self.ctx, [[1]])
        for _ in range(k):
            out = out * self
        return out

    def swap(self) -> "BiPoly":
        return BiPoly.from_terms(self.ctx, {(j, i): c for (i, j), c in self.terms().items()})

    def is_symmetric(self) -> bool:
        return self == self.swap()

    def __call__(self, x, y) -> int:
        ctx = self.ctx
        acc = 0
        for row in reversed(self.grid):
            r = 0
            for c in reversed(row):
                r = ctx.add(ctx.mul(r, y), c)
            acc = ctx.add(ctx.mul(acc, x), r)
        return acc

    def map_coeffs(self, ctx, fn) -> "BiPoly":
        return BiPoly(ctx, [[fn(c) for c in r] for r in self.grid])

    def embed(self, emb: Embedding) -> "BiPoly":
        return self.map_coeffs(emb.big, emb.embed)

    def diagonal(self) -> UniPoly:
        """F(X, X)."""
        ctx = self.ctx
        out = {}
        for (i, j), c in self.terms().items():
            out[i + j] = ctx.add(out.get(i + j, 0), c)
        d = max(out, default=-1)
        return UniPoly(ctx, [out.get(k, 0) for k in range(d + 1)])

    def subs_y(self, g: UniPoly) -> UniPoly:
        """F(X, g(X))."""
        ctx = self.ctx
        acc = UniPoly(ctx)
        for j in range(self.deg_y, -1, -1):
            col = UniPoly(ctx, [self.coeff(i, j) for i in range(self.deg_x + 1)])
            acc = acc * g + col
        return acc

    def top_form(self) -> dict:
        """Terms of top total degree."""
        d = self.total_degree
        return {k: c for k, c in self.terms().items() if sum(k) == d}

    def format(self) -> str:
        head = f"{self.deg_x},{self.deg_y}"
        rows = [",".join(map(str, r)) for r in self.grid]
        return "\n".join([head] + rows)

    @classmethod
    def parse(cls, ctx, text: str) -> "BiPoly":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        dx, dy = (int(v) for v in lines[0].split(","))
        grid = [[int(v) for v in ln.split(",")] for ln in lines[1:]]
        if len(grid) != dx + 1 or any(len(r) != dy + 1 for r in grid):
            raise PolyError("grid shape does not match its header")
        return cls(ctx, grid)


def difference_quotient(P: UniPoly, Q: UniPoly) -> BiPoly:
    """(P(X)Q(Y) - P(Y)Q(X)) / (X - Y), divided exactly."""
    ctx = P.ctx
    px, qy = BiPoly.from_x(P), BiPoly.from_y(Q)
    py, qx = BiPoly.from_y(P), BiPoly.from_x(Q)
    num = px * qy - py * qx
    # synthetic division by X - Y, treating num as a polynomial in X over F[Y]
    rows = [UniPoly(ctx, r) for r in num.grid]
    y = UniPoly(ctx, (0, 1))
    d = len(rows) - 1
    quo = [UniPoly(ctx)] * max(d, 0)
    carry = UniPoly(ctx)
    for k in range(d, 0, -1):
        carry = rows[k] + y * carry
        quo[k - 1] = carry
    rem = (rows[0] if rows else UniPoly(ctx)) + y * carry
    if rem:
        raise AssertionError("X - Y does not divide the cross difference")
    return BiPoly(ctx, [list(r.coeffs) for r in quo])


def family_map_polys(ctx: FieldCtx, a, b, c, Q: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Numerator and denominator of X + (aX^2 + bX + c)/Q."""
    if not (a or b or c):
        raise AllZeroABC("a, b, c are all zero")
    if Q.degree != 3 or Q.lead != 1:
        raise QNotCubicMonic(f"{Q!r} is not a monic cubic")
    P = UniPoly.x(ctx) * Q + UniPoly(ctx, (c, b, a))
    return P, Q


def build_numerator_F(a, b, c, Q: UniPoly) -> BiPoly:
    """F(X, Y) with (f(X) - f(Y))/(X - Y) = F(X, Y)/(Q(X)Q(Y)),
    for f = X + (aX^2 + bX + c)/Q."""
    P, Q = family_map_polys(Q.ctx, a, b, c, Q)
    return difference_quotient(P, Q)


def depressed_cubic(ctx, d, e) -> UniPoly:
    return UniPoly(ctx, (e, d, 0, 1))


def char3_cubic(ctx, e) -> UniPoly:
    return UniPoly(ctx, (e, 0, 1, 1))


def symmetric_reduce(F: BiPoly) -> BiPoly:
    """The unique G with F(X, Y) = G(X + Y, XY).

    Leading terms X^i Y^j (i >= j, lex order) are removed one at a time by
    subtracting c * (X+Y)^(i-j) (XY)^j.
    """
    if not F.is_symmetric():
        raise NotSymmetric("polynomial is not symmetric in X and Y")
    ctx = F.ctx
    s = BiPoly(ctx, [[0, 1], [1]])
    p = BiPoly(ctx, [[0], [0, 1]])
    rest = F.terms()
    G = {}
    while rest:
        i, j = max(rest)
        c = rest[(i, j)]
        G[(i - j, j)] = c
        sub = (s ** (i - j)) * (p ** j)
        for k, v in sub.terms().items():
            nv = ctx.sub(rest.get(k, 0), ctx.mul(c, v))
            if nv:
                rest[k] = nv
            else:
                rest.pop(k, None)
    return BiPoly.from_terms(ctx, G)


def symmetric_expand(G: BiPoly) -> BiPoly:
    """G(X + Y, XY)."""
    ctx = G.ctx
    s = BiPoly(ctx, [[0, 1], [1]])
    p = BiPoly(ctx, [[0], [0, 1]])
    out = BiPoly(ctx, [])
    for (i, j), c in G.terms().items():
        out = out + ((s ** i) * (p ** j)).scale(c)
    return out


@dataclass(frozen=True)
class LinearRootWitness:
    """G(X, uX + v) = 0 identically; u, v live in the cubic extension."""

    u: int
    v: int


def _linear_substitution(G: BiPoly, u: int) -> list[UniPoly]:
    """Coefficients of X^k in G(X, uX + V), each a polynomial in V."""
    ctx = G.ctx
    deg = G.deg_x + G.deg_y
    out = [dict() for _ in range(deg + 1)]
    # (uX + V)^j = sum_l binom(j, l) u^l V^(j-l) X^l
    from math import comb

    for (i, j), c in G.terms().items():
        for l in range(j + 1):
            coef = ctx.mul(c, ctx.scalar(comb(j, l), ctx.pow(u, l)))
            if coef:
                k, vdeg = i + l, j - l
                out[k][vdeg] = ctx.add(out[k].get(vdeg, 0), coef)
    return [UniPoly(ctx, [d.get(t, 0) for t in range(max(d, default=-1) + 1)]) for d in out]


def find_linear_root(G: BiPoly, ext: Embedding | None = None) -> LinearRootWitness | None:
    """Search for (u, v) in F_{q^3} with G(X, uX + v) = 0.

    u runs over the roots of the top-degree coefficient of G(X, uX + v)
    (for the two map families this is the cubic denominator Q).  v is read
    off the first coefficient that is linear in v; if its v-coefficient
    vanishes, the remaining coefficients are solved jointly through their
    gcd.  Every returned witness is checked exactly.
    """
    ext = ext or cubic_extension(G.ctx)
    big = ext.big
    Gb = G.embed(ext)
    top = {}
    for (i, j), c in Gb.terms().items():
        if i + j == Gb.total_degree:
            top[j] = big.add(top.get(j, 0), c)
    lead_poly = UniPoly(big, [top.get(j, 0) for j in range(max(top, default=0) + 1)])
    if lead_poly.degree < 1:
        return None
    for u in field_roots(big, lead_poly):
        coeffs = [h for h in reversed(_linear_substitution(Gb, u)) if h]
        if not coeffs:
            return LinearRootWitness(u, 0)
        if any(h.degree == 0 for h in coeffs):
            continue
        first = coeffs[0]
        if first.degree == 1:
            candidates = [big.neg(big.div(first.coeffs[0], first.coeffs[1]))]
        else:
            log.debug("v-denominator vanishes for u=%s; solving jointly", u)
            common = coeffs[0]
            for h in coeffs[1:]:
                common = gcd(common, h)
            candidates = field_roots(big, common) if common.degree >= 1 else []
        for v in candidates:
            if all(h(v) == 0 for h in coeffs):
                return LinearRootWitness(u, v)
    return None


def substitute_linear(G: BiPoly, u: int, v: int) -> UniPoly:
    """G(X, uX + v) over G's field."""
    return G.subs_y(UniPoly(G.ctx, (v, u)))


class PointCount(NamedTuple):
    affine: int
    diagonal: int
    off_diagonal: int


def evaluate_grid(F: BiPoly) -> np.ndarray:
    """F(x, y) for all x (rows) and y (columns) in enumeration order."""
    ctx = F.ctx
    if ctx.q > COUNT_LIMIT:
        raise FieldTooLargeForCount(f"q = {ctx.q} exceeds {COUNT_LIMIT}")
    xs = np.arange(ctx.q, dtype=np.int64)
    out = np.zeros((ctx.q, ctx.q), dtype=np.int64)
    ypow = np.ones_like(xs)
    for j in range(F.deg_y + 1):
        col = UniPoly(ctx, [F.coeff(i, j) for i in range(F.deg_x + 1)])
        if col:
            rx = col.evaluate_all()
            out = ctx.vadd(out, ctx.vmul(rx[:, None], ypow[None, :]))
        ypow = ctx.vmul(ypow, xs)
    return out


def count_affine_points(F: BiPoly) -> PointCount:
    vals = evaluate_grid(F)
    zero = vals == 0
    total = int(zero.sum())
    diag = int(np.trace(zero))
    return PointCount(total, diag, total - diag)


def count_points_at_infinity(F: BiPoly) -> int:
    """Zeros (x : y : 0) of the homogenization, i.e. of the top form on P^1."""
    ctx = F.ctx
    top = F.top_form()
    d = F.total_degree
    # points (1 : y : 0) and (0 : 1 : 0)
    poly_y = UniPoly(ctx, [top.get((d - j, j), 0) for j in range(d + 1)])
    count = int(np.sum(poly_y.evaluate_all() == 0)) if ctx.has_tables else sum(
        poly_y(y) == 0 for y in ctx.elements())
    if top.get((0, d), 0) == 0:
        count += 1
    return count


def homogenized_degrees(F: BiPoly) -> tuple[int, int, int, int]:
    """(deg_X, deg_Y, deg_Z, total) of the homogenization of F."""
    d = F.total_degree
    low = min(i + j for i, j in F.terms())
    return F.deg_x, F.deg_y, d - low, d
