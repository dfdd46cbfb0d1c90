"""Rational functions acting on the projective line P^1(F_q)."""
from __future__ import annotations

import itertools

import numpy as np

from .field import INF, Embedding, FieldCtx, FieldMismatch, FieldTooLarge, is_infinity
from .poly import UniPoly, gcd, is_irreducible

PERMUTATION_LIMIT = 2 ** 20
EQUIVALENCE_LIMIT = 16


class RatMapError(ValueError):
    pass


class RNotDegreeThree(RatMapError):
    pass


class CoefficientNotRational(RatMapError):
    pass


class FieldTooLargeForEquivalence(RatMapError):
    pass


class DegreeMismatch(RatMapError):
    pass


class RatMap:
    """P/Q in lowest terms with Q monic."""

    __slots__ = ("ctx", "P", "Q")

    def __init__(self, P: UniPoly, Q: UniPoly):
        if not Q:
            raise ZeroDivisionError("zero denominator")
        if P.ctx != Q.ctx:
            raise FieldMismatch("numerator and denominator over different fields")
        g = gcd(P, Q)
        if g.degree > 0:
            P, Q = P // g, Q // g
        s = P.ctx.inv(Q.lead)
        self.ctx = P.ctx
        self.P = P.scale(s)
        self.Q = Q.scale(s)

    @property
    def degree(self) -> int:
        return max(self.P.degree, self.Q.degree)

    def __eq__(self, other):
        if isinstance(other, RatMap):
            return self.P == other.P and self.Q == other.Q
        return NotImplemented

    def __hash__(self):
        return hash((self.P, self.Q))

    def __repr__(self):
        return f"RatMap({self.format()} over F_{self.ctx.q})"

    def format(self) -> str:
        return f"{self.P.format()} | {self.Q.format()}"

    def __call__(self, x):
        return eval_p1(self, x)

    def value_at_infinity(self):
        dp, dq = self.P.degree, self.Q.degree
        if dp > dq:
            return INF
        if dp < dq:
            return 0
        return self.ctx.div(self.P.lead, self.Q.lead)

    def values(self) -> np.ndarray:
        """Images of all q + 1 points as indices (0..q-1 finite, q for INF)."""
        ctx = self.ctx
        pv = self.P.evaluate_all()
        qv = self.Q.evaluate_all()
        pole = qv == 0
        safe = np.where(pole, 1, qv)
        out = np.where(pole, ctx.q, ctx.vmul(pv, ctx.vinv(safe)))
        at_inf = self.value_at_infinity()
        return np.append(out, ctx.q if is_infinity(at_inf) else at_inf)


def eval_p1(f: RatMap, x):
    if is_infinity(x):
        return f.value_at_infinity()
    qx = f.Q(x)
    if qx == 0:
        return INF
    return f.ctx.div(f.P(x), qx)


def is_permutation(f: RatMap) -> bool:
    """True when f is a bijection of P^1(F_q).  Single pass, seen markers."""
    if f.ctx.q > PERMUTATION_LIMIT:
        raise FieldTooLarge(f"q = {f.ctx.q} too large for a permutation test")
    seen = np.zeros(f.ctx.q + 1, dtype=bool)
    seen[f.values()] = True
    return bool(seen.all())


def family_map(ctx: FieldCtx, a, b, c, d, e) -> RatMap:
    """X + (aX^2 + bX + c)/(X^3 + dX + e)."""
    Q = UniPoly(ctx, (e, d, 0, 1))
    return RatMap(UniPoly.x(ctx) * Q + UniPoly(ctx, (c, b, a)), Q)


def char3_family_map(ctx: FieldCtx, a, b, c, e) -> RatMap:
    """X + (aX^2 + bX + c)/(X^3 + X^2 + e)."""
    Q = UniPoly(ctx, (e, 0, 1, 1))
    return RatMap(UniPoly.x(ctx) * Q + UniPoly(ctx, (c, b, a)), Q)


class Moebius:
    """(aX + b)/(cX + d) with ad - bc != 0, scaled so the first non-zero
    entry is 1."""

    __slots__ = ("ctx", "a", "b", "c", "d")

    def __init__(self, ctx: FieldCtx, a, b, c, d):
        if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)) == 0:
            raise RatMapError("singular Moebius transformation")
        s = ctx.inv(next(v for v in (a, b, c, d) if v))
        self.ctx = ctx
        self.a, self.b, self.c, self.d = (ctx.mul(s, v) for v in (a, b, c, d))

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, 1, 0, 0, 1)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        return isinstance(other, Moebius) and self.ctx == other.ctx and self.entries() == other.entries()

    def __hash__(self):
        return hash((self.ctx, self.entries()))

    def __repr__(self):
        return f"Moebius{self.entries()}"

    def as_ratmap(self) -> RatMap:
        ctx = self.ctx
        return RatMap(UniPoly(ctx, (self.b, self.a)), UniPoly(ctx, (self.d, self.c)))

    def __call__(self, x):
        return eval_p1(self.as_ratmap(), x)


def all_moebius(ctx: FieldCtx):
    """Every element of PGL(2, F_q), each once."""
    q = ctx.q
    for b in range(q):  # a = 1
        for c in range(q):
            for d in range(q):
                if ctx.sub(d, ctx.mul(b, c)):
                    yield Moebius(ctx, 1, b, c, d)
    for c in range(q):  # a = 0, b = 1
        for d in range(q):
            if c:
                yield Moebius(ctx, 0, 1, c, d)


def _homogeneous_sub(f: UniPoly, deg: int, psi: Moebius) -> UniPoly:
    """(cX + d)^deg * f((aX + b)/(cX + d))."""
    ctx = f.ctx
    num = UniPoly(ctx, (psi.b, psi.a))
    den = UniPoly(ctx, (psi.d, psi.c))
    out = UniPoly(ctx)
    for i in range(deg + 1):
        ci = f[i]
        if ci:
            out = out + (num ** i * den ** (deg - i)).scale(ci)
    return out


def _pre_compose(f: RatMap, psi: Moebius) -> tuple[UniPoly, UniPoly]:
    D = f.degree
    return _homogeneous_sub(f.P, D, psi), _homogeneous_sub(f.Q, D, psi)


def compose(phi: Moebius, f: RatMap, psi: Moebius) -> RatMap:
    """phi o f o psi."""
    P, Q = _pre_compose(f, psi)
    return RatMap(P.scale(phi.a) + Q.scale(phi.b), P.scale(phi.c) + Q.scale(phi.d))


def _span_form(P: UniPoly, Q: UniPoly, D: int) -> tuple:
    """Reduced row echelon form of the 2 x (D+1) matrix with rows P, Q.

    Two maps of degree D lie in the same left PGL_2 orbit exactly when
    their numerator/denominator pairs span the same plane.
    """
    ctx = P.ctx
    rows = [[P[i] for i in range(D, -1, -1)], [Q[i] for i in range(D, -1, -1)]]
    r = 0
    for col in range(D + 1):
        piv = next((i for i in range(r, 2) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ctx.inv(rows[r][col])
        rows[r] = [ctx.mul(inv, v) for v in rows[r]]
        other = 1 - r
        if rows[other][col]:
            f = rows[other][col]
            rows[other] = [ctx.sub(v, ctx.mul(f, w)) for v, w in zip(rows[other], rows[r])]
        r += 1
        if r == 2:
            break
    return tuple(map(tuple, rows))


def equivalent_small_q(f: RatMap, g: RatMap) -> bool:
    """Whether f = phi o g o psi for some phi, psi in PGL(2, F_q)."""
    if f.ctx != g.ctx:
        raise FieldMismatch("maps over different fields")
    if f.ctx.q > EQUIVALENCE_LIMIT:
        raise FieldTooLargeForEquivalence(f"q = {f.ctx.q} exceeds {EQUIVALENCE_LIMIT}")
    if f.degree != g.degree:
        raise DegreeMismatch(f"degrees {f.degree} and {g.degree} differ")
    D = f.degree
    target = _span_form(f.P, f.Q, D)
    for psi in all_moebius(f.ctx):
        P, Q = _pre_compose(g, psi)
        if _span_form(P, Q, D) == target:
            return True
    return False


def from_trace_form(emb: Embedding, b: int, r: int) -> RatMap:
    """X + sum over the Frobenius orbit of b/(X - r), descended to F_q."""
    small, big = emb.small, emb.big
    q = small.q
    if not b:
        raise RatMapError("b must be non-zero")
    rs = [r, big.pow(r, q), big.pow(r, q * q)]
    if len(set(rs)) != 3:
        raise RNotDegreeThree("r does not have degree 3 over F_q")
    bs = [b, big.pow(b, q), big.pow(b, q * q)]
    lin = [UniPoly(big, (big.neg(ri), 1)) for ri in rs]
    Q = lin[0] * lin[1] * lin[2]
    P = UniPoly.x(big) * Q
    for i in range(3):
        others = [lin[j] for j in range(3) if j != i]
        P = P + (others[0] * others[1]).scale(bs[i])
    try:
        Ps = UniPoly(small, [emb.restrict(c) for c in P.coeffs])
        Qs = UniPoly(small, [emb.restrict(c) for c in Q.coeffs])
    except ValueError as exc:
        raise CoefficientNotRational(str(exc)) from exc
    return RatMap(Ps, Qs)


def parse_ratmap(ctx: FieldCtx, text: str) -> RatMap:
    """Parse ``"p0,p1,... | q0,q1,..."`` (element indices, low degree first)."""
    num, _, den = text.partition("|")
    P = UniPoly(ctx, [int(v) for v in num.split(",") if v.strip()])
    Q = UniPoly(ctx, [int(v) for v in den.split(",") if v.strip()] or [1])
    return RatMap(P, Q)


def degq2_candidates(ctx: FieldCtx):
    """Monic irreducible quadratics over ctx."""
    for c0, c1 in itertools.product(range(ctx.q), repeat=2):
        Q = UniPoly(ctx, (c0, c1, 1))
        if is_irreducible(Q):
            yield Q
