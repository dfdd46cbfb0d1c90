"""Necessary conditions for the two degree-four map families.

Covers Hermite power sums, the reciprocal power-sum identity, the
coefficient polynomials that vanish on every permutation of the family
X + (aX^2+bX+c)/(X^3+dX+e) (and its characteristic-3 sibling with
denominator X^3+X^2+e), and the linear-root relations.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .field import Embedding, FieldCtx, FieldError
from .poly import UniPoly, has_root, is_irreducible
from .ratmap import RatMap, char3_family_map, family_map

GENERAL = "general"
CHAR3 = "char3x2"
FAMILIES = (GENERAL, CHAR3)

RELATION_W28_SHA256 = "06601624a38f44d69d1203017a0306ed38eca5f455d6a8808cfc9d80dee73339"


class PoleInBaseField(ValueError):
    pass


class RInBaseField(ValueError):
    pass


class WrongCharacteristic(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ParamTuple:
    """Coefficients of X + (aX^2+bX+c)/Q.

    Q is X^3 + dX + e for the general family and X^3 + X^2 + e for the
    characteristic-3 family (where ``d`` is unused and kept at 0).
    """

    a: int
    b: int
    c: int
    d: int
    e: int
    family: str = GENERAL

    @classmethod
    def char3(cls, a, b, c, e):
        return cls(a, b, c, 0, e, CHAR3)

    def values(self) -> tuple:
        if self.family == CHAR3:
            return (self.a, self.b, self.c, self.e)
        return (self.a, self.b, self.c, self.d, self.e)

    def cubic(self, ctx: FieldCtx) -> UniPoly:
        if self.family == CHAR3:
            return UniPoly(ctx, (self.e, 0, 1, 1))
        return UniPoly(ctx, (self.e, self.d, 0, 1))

    def ratmap(self, ctx: FieldCtx) -> RatMap:
        if self.family == CHAR3:
            return char3_family_map(ctx, self.a, self.b, self.c, self.e)
        return family_map(ctx, self.a, self.b, self.c, self.d, self.e)

    def is_candidate(self, ctx: FieldCtx) -> bool:
        """(a, b, c) != 0 and the cubic denominator is irreducible."""
        return bool(self.a or self.b or self.c) and is_irreducible(self.cubic(ctx))

    def format(self, ctx: FieldCtx) -> str:
        at = f"{ctx.p}^{ctx.n}" if self.family == CHAR3 else str(ctx.q)
        return ",".join(map(str, self.values())) + f"@{at}"


def parse_tuple(text: str) -> tuple[FieldCtx, ParamTuple]:
    """``"a,b,c,d,e@q"`` (general) or ``"a,b,c,e@3^n"`` (characteristic 3,
    denominator X^3+X^2+e).  Entries are element indices."""
    from .field import field_of_order, make_field

    body, _, fld = text.strip().partition("@")
    vals = [int(v) for v in body.split(",")]
    if "^" in fld:
        p_s, n_s = fld.split("^")
        ctx = make_field(int(p_s), int(n_s))
    else:
        ctx = field_of_order(int(fld))
    if any(not 0 <= v < ctx.q for v in vals):
        raise FieldError(f"entries of {text!r} must lie in 0..{ctx.q - 1}")
    if len(vals) == 5:
        return ctx, ParamTuple(*vals)
    if len(vals) == 4:
        if ctx.p != 3:
            raise WrongCharacteristic("four-entry tuples need characteristic 3")
        return ctx, ParamTuple.char3(*vals)
    raise FieldError(f"expected 4 or 5 entries in {text!r}")


# --------------------------------------------------------------------------
# Hermite criterion and reciprocal power sums

def _affine_values(f: RatMap) -> np.ndarray:
    if has_root(f.Q):
        raise PoleInBaseField("denominator has a root in F_q")
    vals = f.values()[:-1]
    return vals


def power_sum(f: RatMap, s: int) -> int:
    """sum_{x in F_q} f(x)^s."""
    ctx = f.ctx
    return int(ctx.vsum(ctx.vpow(_affine_values(f), s)))


def hermite_test(f: RatMap) -> bool:
    """Hermite's criterion for f to permute F_q: the power sums vanish for
    1 <= s <= q-2 and equal -1 for s = q-1."""
    ctx = f.ctx
    if ctx.q > 2 ** 10:
        raise FieldError("Hermite test limited to q <= 1024")
    vals = _affine_values(f)
    cur = np.ones_like(vals)
    minus_one = ctx.neg(1)
    for s in range(1, ctx.q):
        cur = ctx.vmul(cur, vals)
        total = int(ctx.vsum(cur))
        if total != (minus_one if s == ctx.q - 1 else 0):
            return False
    return True


def carlitz_rps_check(emb: Embedding, r: int, k: int) -> bool:
    """sum_{x in F_q} 1/(x - r)^k == 1/(r^q - r)^k in the extension field."""
    small, big = emb.small, emb.big
    if emb.contains(r):
        raise RInBaseField("r lies in the base field")
    if not 1 <= k <= small.q:
        raise ValueError("k must satisfy 1 <= k <= q")
    lhs = 0
    for x in small.elements():
        lhs = big.add(lhs, big.pow(big.inv(big.sub(emb.embed(x), r)), k))
    rhs = big.pow(big.inv(big.sub(big.pow(r, small.q), r)), k)
    return lhs == rhs


# --------------------------------------------------------------------------
# integer-coefficient polynomials in the tuple entries

class TermPoly:
    """sum coeff * prod var^exp with arbitrary-precision integer coefficients."""

    def __init__(self, variables: str, terms):
        self.variables = variables
        self.terms = [(int(c), tuple(int(x) for x in exps)) for c, exps in terms]

    def __len__(self):
        return len(self.terms)

    def __call__(self, ctx: FieldCtx, **values) -> int:
        vals = [values[v] for v in self.variables]
        acc = 0
        for coef, exps in self.terms:
            c = coef % ctx.p
            if not c:
                continue
            t = c
            for v, k in zip(vals, exps):
                if k:
                    t = ctx.mul(t, ctx.pow(v, k))
                    if not t:
                        break
            acc = ctx.add(acc, t)
        return acc

    def vectorized(self, ctx: FieldCtx, **arrays) -> np.ndarray:
        arrs = [np.asarray(arrays[v], dtype=np.int64) for v in self.variables]
        shape = np.broadcast_shapes(*(a.shape for a in arrs))
        acc = np.zeros(shape, dtype=np.int64)
        cache = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = ctx.vpow(arrs[i], k)
            return cache[key]

        for coef, exps in self.terms:
            c = coef % ctx.p
            if not c:
                continue
            t = np.full(shape, c, dtype=np.int64)
            for i, k in enumerate(exps):
                if k:
                    t = ctx.vmul(t, power(i, k))
            acc = ctx.vadd(acc, t)
        return acc

    def group_by(self, inner: str) -> dict:
        """Split into {exponents of `inner` vars: TermPoly in the rest}."""
        idx = [self.variables.index(v) for v in inner]
        rest = "".join(v for v in self.variables if v not in inner)
        ridx = [self.variables.index(v) for v in rest]
        out = {}
        for coef, exps in self.terms:
            key = tuple(exps[i] for i in idx)
            out.setdefault(key, []).append((coef, tuple(exps[i] for i in ridx)))
        return {k: TermPoly(rest, v) for k, v in out.items()}

    def weights(self, w: dict) -> set:
        return {sum(w[v] * k for v, k in zip(self.variables, exps)) for _, exps in self.terms}


def parse_term_table(text: str) -> list:
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        coef, *exps = (int(v) for v in line.split())
        terms.append((coef, tuple(exps)))
    return terms


def _load_relation_w28() -> TermPoly:
    raw = resources.files("permrat.data").joinpath("relation_w28_terms.txt").read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != RELATION_W28_SHA256:
        raise RuntimeError(f"relation_w28_terms.txt checksum mismatch: {digest}")
    return TermPoly("abcde", parse_term_table(raw.decode()))


RELATION_W14 = TermPoly("abcde", [
    (9, (0, 0, 2, 3, 0)),
    (9, (0, 2, 0, 4, 0)),
    (6, (1, 0, 1, 4, 0)),
    (1, (2, 0, 0, 5, 0)),
    (81, (0, 1, 1, 2, 1)),
    (-27, (1, 1, 0, 3, 1)),
    (243, (0, 0, 2, 0, 2)),
    (-81, (1, 0, 1, 1, 2)),
    (27, (2, 0, 0, 2, 2)),
])

RELATION_W28 = _load_relation_w28()

CHAR3_RELATION = TermPoly("abc", [
    (1, (1, 6, 0)),
    (1, (0, 7, 0)),
    (1, (1, 4, 1)),
    (2, (0, 5, 1)),
    (2, (1, 5, 1)),
    (1, (0, 6, 1)),
    (2, (2, 2, 2)),
    (1, (3, 2, 2)),
    (2, (1, 3, 2)),
    (1, (2, 3, 2)),
    (1, (2, 0, 3)),
    (1, (3, 0, 3)),
    (1, (4, 0, 3)),
    (2, (0, 2, 3)),
])

# c^2 + b^2 e
CHAR3_QUADRATIC = TermPoly("bce", [(1, (0, 2, 0)), (1, (2, 0, 1))])

# linear-root relations, general family
A0P = TermPoly("abcde", [
    (1, (0, 0, 2, 0, 0)), (-1, (1, 0, 1, 1, 0)), (-1, (0, 0, 1, 2, 0)),
    (1, (1, 0, 0, 3, 0)), (1, (1, 1, 0, 0, 1)), (9, (1, 0, 0, 0, 2)),
])
A1P = TermPoly("abcde", [
    (2, (0, 1, 1, 0, 0)), (-2, (0, 1, 0, 2, 0)), (2, (2, 0, 0, 0, 1)), (6, (1, 0, 0, 1, 1)),
])
A2P = TermPoly("abcde", [
    (1, (0, 2, 0, 0, 0)), (-1, (1, 0, 1, 0, 0)), (1, (2, 0, 0, 1, 0)),
    (-3, (0, 0, 1, 1, 0)), (3, (1, 0, 0, 2, 0)), (9, (0, 1, 0, 0, 1)),
])
B_LIN0 = TermPoly("abcde", [(1, (0, 1, 0, 1, 0)), (-3, (1, 0, 0, 0, 1))])  # bd - 3ae
B_LIN1 = TermPoly("abcde", [(3, (0, 0, 1, 0, 0)), (1, (1, 0, 0, 1, 0))])  # 3c + ad

# characteristic-3 family, constant coefficient after eliminating v
A0_CHAR3 = TermPoly("abce", [
    (1, (0, 0, 3, 0)), (-1, (0, 3, 0, 1)), (-1, (1, 2, 0, 1)), (1, (2, 0, 1, 1)),
    (-1, (2, 1, 0, 1)), (-1, (0, 1, 1, 1)), (-1, (0, 2, 0, 1)), (-1, (1, 0, 1, 1)),
    (1, (1, 1, 0, 1)), (1, (3, 0, 0, 2)), (-1, (2, 0, 0, 2)),
])


def _abcde(t: ParamTuple) -> dict:
    return dict(a=t.a, b=t.b, c=t.c, d=t.d, e=t.e)


def eval_relation_w14(ctx: FieldCtx, t: ParamTuple) -> int:
    return RELATION_W14(ctx, **_abcde(t))


def eval_relation_w28(ctx: FieldCtx, t: ParamTuple) -> int:
    return RELATION_W28(ctx, **_abcde(t))


def eval_char3_relations(ctx: FieldCtx, t: ParamTuple) -> tuple[int, int]:
    """(c^2 + b^2 e, the degree-seven relation) for the characteristic-3 family."""
    if ctx.p != 3:
        raise WrongCharacteristic("the X^3+X^2+e conditions need characteristic 3")
    return (CHAR3_QUADRATIC(ctx, b=t.b, c=t.c, e=t.e), CHAR3_RELATION(ctx, a=t.a, b=t.b, c=t.c))


def linear_root_relations(ctx: FieldCtx, t: ParamTuple) -> tuple[int, ...]:
    """Relations forced by a linear root of G.

    General family: (A0', A1', A2', bd - 3ae, 3c + ad).
    Characteristic-3 family: (b, c, A0) where A0 = a^2 e^2 (a - 1) once b = c = 0.
    """
    if t.family == CHAR3:
        return (t.b, t.c, A0_CHAR3(ctx, a=t.a, b=t.b, c=t.c, e=t.e))
    vals = _abcde(t)
    return tuple(poly(ctx, **vals) for poly in (A0P, A1P, A2P, B_LIN0, B_LIN1))


def passes_necessary_conditions(ctx: FieldCtx, t: ParamTuple) -> bool:
    """Scalar form of the search prefilter."""
    if t.family == CHAR3:
        first, second = eval_char3_relations(ctx, t)
        return first == 0 and (ctx.n == 1 or second == 0)
    if ctx.q > 2 and eval_relation_w14(ctx, t):
        return False
    if ctx.q > 3 and eval_relation_w28(ctx, t):
        return False
    return True
