"""Exhaustive parameter search over the two degree-four map families.

For the general family X + (aX^2+bX+c)/(X^3+dX+e) the scan runs over
irreducible cubics (d, e), an a-set, and (b, c) blocks.  The necessary
conditions are polynomials in (b, c) whose coefficients are polynomials in
(a, d, e); for each (a, d, e) they are evaluated over a whole (b, c) block
at once as one matrix product over F_p (digits of the monomials b^i c^j
times the multiplication matrices of the coefficients).  Only survivors
reach the batched bijection test.

Work is split over cubics; results are merged and sorted, so the output
does not depend on the number of workers.
"""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .criteria import CHAR3, RELATION_W14, RELATION_W28, CHAR3_RELATION, GENERAL, CHAR3_QUADRATIC, ParamTuple
from .field import FieldCtx, make_field

log = logging.getLogger(__name__)

# cap on N * L * n entries of one filter product
_CELL_BUDGET = 1 << 22
# cap on rows * q entries of one bijection batch
_BATCH_BUDGET = 1 << 22


class InvalidFamily(ValueError):
    pass


# --------------------------------------------------------------------------
# scan space

def irreducible_cubics(ctx: FieldCtx) -> list[tuple[int, int]]:
    """(d, e) with X^3 + dX + e irreducible, in enumeration order."""
    xs = np.arange(ctx.q, dtype=np.int64)
    x3 = ctx.vpow(xs, 3)
    out = []
    for d in range(ctx.q):
        hit = np.zeros(ctx.q, dtype=bool)
        hit[ctx.vneg(ctx.vadd(x3, ctx.vmul(np.int64(d), xs)))] = True
        out.extend((d, int(e)) for e in np.flatnonzero(~hit))
    return out


def irreducible_char3_cubics(ctx: FieldCtx) -> list[int]:
    """e with X^3 + X^2 + e irreducible."""
    if ctx.p != 3:
        raise InvalidFamily("the X^3+X^2+e family needs characteristic 3")
    xs = np.arange(ctx.q, dtype=np.int64)
    vals = ctx.vadd(ctx.vpow(xs, 3), ctx.vpow(xs, 2))
    hit = np.zeros(ctx.q, dtype=bool)
    hit[ctx.vneg(vals)] = True
    return [int(e) for e in np.flatnonzero(~hit)]


@dataclass
class Block:
    """A fixed a with parallel arrays of (b, c)."""

    a: int
    b: np.ndarray
    c: np.ndarray

    def __len__(self):
        return len(self.b)


def _grid(ctx, b_values=None, c_values=None):
    bs = np.arange(ctx.q, dtype=np.int64) if b_values is None else np.asarray(b_values, dtype=np.int64)
    cs = np.arange(ctx.q, dtype=np.int64) if c_values is None else np.asarray(c_values, dtype=np.int64)
    B, C = np.meshgrid(bs, cs, indexing="ij")
    return B.ravel(), C.ravel()


def _block(a, b, c):
    if a == 0:
        keep = (b != 0) | (c != 0)
        b, c = b[keep], c[keep]
    return Block(int(a), b, c)


def a_values(ctx: FieldCtx, normalize: bool) -> list[int]:
    if not normalize:
        return list(range(ctx.q))
    if ctx.p == 2:
        return [0, 1]
    return [0, 1, ctx.nonsquare()]


def scan_blocks(ctx: FieldCtx, family: str, normalize: bool) -> tuple[list[Block], str]:
    """The (a, b, c) part of the scan space and a description of it."""
    if family == CHAR3:
        B, C = _grid(ctx)
        return [_block(a, B, C) for a in range(ctx.q)], "none"
    if family != GENERAL:
        raise InvalidFamily(f"unknown family {family!r}")
    if not normalize:
        B, C = _grid(ctx)
        return [_block(a, B, C) for a in range(ctx.q)], "none"
    if ctx.p == 2:
        B, C = _grid(ctx)
        return [_block(a, B, C) for a in (0, 1)], "a in {0,1}"
    u = ctx.nonsquare()
    if ctx.p != 3:
        B, C = _grid(ctx)
        return [_block(a, B, C) for a in (0, 1, u)], f"a in {{0,1,u}}, u={u}"
    cs = np.arange(ctx.q, dtype=np.int64)
    zeros = np.zeros(ctx.q, dtype=np.int64)
    blocks = [
        _block(0, zeros, cs),
        Block(0, np.array([1], dtype=np.int64), np.array([0], dtype=np.int64)),
        _block(1, zeros, cs),
        _block(u, zeros, cs),
    ]
    return blocks, f"(a,b) in {{(0,0),(1,0),(u,0)}} or (a,b,c)=(0,1,0), u={u}"


def in_scan_space(ctx: FieldCtx, t: ParamTuple, normalize: bool) -> bool:
    if t.family == CHAR3 or not normalize:
        return True
    if ctx.p == 3:
        u = ctx.nonsquare()
        return (t.a, t.b) in ((0, 0), (1, 0), (u, 0)) or (t.a, t.b, t.c) == (0, 1, 0)
    return t.a in a_values(ctx, True)


# --------------------------------------------------------------------------
# tuple transformations X -> sX + w

def transform_tuple(ctx: FieldCtx, t: ParamTuple, s: int, w: int = 0) -> ParamTuple:
    """The family tuple equivalent to f(sX + w) after renormalizing.

    Translations (w != 0) keep the depressed cubic shape only in
    characteristic 3.
    """
    if t.family != GENERAL:
        raise InvalidFamily("transformations are defined for the general family")
    if w and ctx.p != 3:
        raise ValueError("translations need characteristic 3")
    m, add = ctx.mul, ctx.add
    si = ctx.inv(s)
    si2 = m(si, si)
    si3 = m(si2, si)
    si4 = m(si3, si)
    a, b, c, d, e = t.a, t.b, t.c, t.d, t.e
    a2 = m(a, si2)
    b2 = m(add(ctx.scalar(2, m(a, w)), b), si3)
    c2 = m(add(add(m(a, m(w, w)), m(b, w)), c), si4)
    d2 = m(d, si2)
    e2 = m(add(add(ctx.pow(w, 3), m(d, w)), e), si3)
    return ParamTuple(a2, b2, c2, d2, e2)


def orbit(ctx: FieldCtx, t: ParamTuple) -> set:
    ws = range(ctx.q) if ctx.p == 3 else (0,)
    return {transform_tuple(ctx, t, s, w) for s in range(1, ctx.q) for w in ws}


# --------------------------------------------------------------------------
# necessary-condition filter over (b, c) blocks

class GridFilter:
    """Vanishing test of integer polynomials in a..e over (b, c) blocks."""

    def __init__(self, ctx: FieldCtx, polys):
        self.ctx = ctx
        self.groups = [poly.group_by("bc") for poly in polys]
        self.monos = sorted(set().union(*(g.keys() for g in self.groups)))

    def monomial_digits(self, block: Block) -> np.ndarray:
        ctx = self.ctx
        cols = []
        bp = {}
        cp = {}
        for i, j in self.monos:
            if i not in bp:
                bp[i] = ctx.vpow(block.b, i)
            if j not in cp:
                cp[j] = ctx.vpow(block.c, j)
            cols.append(ctx.digits(ctx.vmul(bp[i], cp[j])))
        return np.concatenate(cols, axis=1).astype(np.float64)

    def mask(self, block: Block, mono: np.ndarray, ds: np.ndarray, es: np.ndarray) -> np.ndarray:
        """Boolean (len(block), len(ds)): all polynomials vanish."""
        ctx = self.ctx
        n, p = ctx.n, ctx.p
        L = len(ds)
        ok = np.ones((len(block), L), dtype=bool)
        a = np.int64(block.a)
        for groups in self.groups:
            W = np.zeros((len(self.monos) * n, L * n), dtype=np.float64)
            for k, key in enumerate(self.monos):
                tp = groups.get(key)
                if tp is None:
                    continue
                kv = np.broadcast_to(tp.vectorized(ctx, a=a, d=ds, e=es), (L,))
                mats = ctx.mul_matrices(kv)  # (L, out, j)
                W[k * n:(k + 1) * n, :] = mats.transpose(2, 0, 1).reshape(n, L * n)
            R = np.fmod(mono @ W, p).reshape(len(block), L, n)
            ok &= ~R.any(axis=2)
        return ok


def general_filter_polys(ctx: FieldCtx):
    polys = []
    if ctx.q > 2:
        polys.append(RELATION_W14)
    if ctx.q > 3:
        polys.append(RELATION_W28)
    return polys


# --------------------------------------------------------------------------
# batched bijection test

class FamilyEvaluator:
    """Values of X + (aX^2+bX+c)/Q(X) on F_q for many (a, b, c) at once."""

    def __init__(self, ctx: FieldCtx, cubic_coeffs):
        self.ctx = ctx
        xs = np.arange(ctx.q, dtype=np.int64)
        self.xs = xs
        self.x2 = ctx.vmul(xs, xs)
        qv = np.zeros_like(xs)
        for coef in reversed(cubic_coeffs):
            qv = ctx.vadd(ctx.vmul(qv, xs), np.int64(coef))
        self.qinv = ctx.vinv(qv)

    def is_perm(self, a, b, c) -> np.ndarray:
        ctx = self.ctx
        a = np.broadcast_to(np.asarray(a, dtype=np.int64), np.shape(b))
        out = np.zeros(len(b), dtype=bool)
        step = max(1, _BATCH_BUDGET // ctx.q)
        for lo in range(0, len(b), step):
            sl = slice(lo, lo + step)
            num = ctx.vadd(ctx.vadd(ctx.vmul(a[sl, None], self.x2), ctx.vmul(b[sl, None], self.xs)),
                           c[sl, None])
            vals = ctx.vadd(self.xs, ctx.vmul(num, self.qinv))
            vals.sort(axis=1)
            out[sl] = (vals == self.xs).all(axis=1)
        return out


# --------------------------------------------------------------------------
# workers

@dataclass
class ChunkResult:
    scanned: int
    survivors: int
    prs: list


def _scan_general(ctx, blocks, cubics, use_prefilter) -> ChunkResult:
    scanned = survivors = 0
    prs = []
    polys = general_filter_polys(ctx) if use_prefilter else []
    filt = GridFilter(ctx, polys) if polys else None
    evaluators = {}

    def evaluator(d, e):
        if (d, e) not in evaluators:
            evaluators[(d, e)] = FamilyEvaluator(ctx, (e, d, 0, 1))
        return evaluators[(d, e)]

    ds_all = np.array([d for d, _ in cubics], dtype=np.int64)
    es_all = np.array([e for _, e in cubics], dtype=np.int64)
    for block in blocks:
        if not len(block):
            continue
        scanned += len(block) * len(cubics)
        if filt is None:
            for d, e in cubics:
                ok = evaluator(d, e).is_perm(block.a, block.b, block.c)
                survivors += len(block)
                prs.extend((block.a, int(b), int(c), d, e)
                           for b, c in zip(block.b[ok], block.c[ok]))
            continue
        mono = filt.monomial_digits(block)
        step = max(1, _CELL_BUDGET // (len(block) * ctx.n))
        for lo in range(0, len(cubics), step):
            ds, es = ds_all[lo:lo + step], es_all[lo:lo + step]
            mask = filt.mask(block, mono, ds, es)
            rows, cols = np.nonzero(mask)
            survivors += len(rows)
            for col in np.unique(cols):
                sel = rows[cols == col]
                d, e = int(ds[col]), int(es[col])
                bsel, csel = block.b[sel], block.c[sel]
                ok = evaluator(d, e).is_perm(block.a, bsel, csel)
                prs.extend((block.a, int(b), int(c), d, e) for b, c in zip(bsel[ok], csel[ok]))
    return ChunkResult(scanned, survivors, prs)


def _scan_char3(ctx, blocks, es_list, use_prefilter) -> ChunkResult:
    scanned = survivors = 0
    prs = []
    a_all = np.concatenate([np.full(len(bl), bl.a, dtype=np.int64) for bl in blocks])
    b_all = np.concatenate([bl.b for bl in blocks])
    c_all = np.concatenate([bl.c for bl in blocks])
    for e in es_list:
        ev = FamilyEvaluator(ctx, (e, 0, 1, 1))
        scanned += len(a_all)
        a, b, c = a_all, b_all, c_all
        if use_prefilter:
            bg, cg = _grid(ctx)
            first = CHAR3_QUADRATIC.vectorized(ctx, b=bg, c=cg, e=np.int64(e))
            keep_bc = first == 0
            bg, cg = bg[keep_bc], cg[keep_bc]
            a = np.repeat(np.arange(ctx.q, dtype=np.int64), len(bg))
            b = np.tile(bg, ctx.q)
            c = np.tile(cg, ctx.q)
            nz = (a != 0) | (b != 0) | (c != 0)
            a, b, c = a[nz], b[nz], c[nz]
            if ctx.n > 1:
                second = CHAR3_RELATION.vectorized(ctx, a=a, b=b, c=c)
                keep = second == 0
                a, b, c = a[keep], b[keep], c[keep]
        survivors += len(a)
        ok = ev.is_perm(a, b, c)
        prs.extend((int(x), int(y), int(z), e) for x, y, z in zip(a[ok], b[ok], c[ok]))
    return ChunkResult(scanned, survivors, prs)


def scan_chunk(p, n, family, normalize, use_prefilter, cubics) -> ChunkResult:
    """Scan one slice of cubics.  Top-level so it can run in a worker process."""
    ctx = make_field(p, n)
    blocks, _ = scan_blocks(ctx, family, normalize)
    if family == CHAR3:
        return _scan_char3(ctx, blocks, cubics, use_prefilter)
    return _scan_general(ctx, blocks, cubics, use_prefilter)


def run_scan(ctx: FieldCtx, family: str, normalize: bool, use_prefilter: bool,
             width: int = 1) -> tuple[ChunkResult, str]:
    """Scan the whole space; returns the merged result and the normalization."""
    _, desc = scan_blocks(ctx, family, normalize)
    cubics = irreducible_char3_cubics(ctx) if family == CHAR3 else irreducible_cubics(ctx)
    # interleave so each worker gets a similar mix of cubics
    slices = [cubics[i::max(1, width)] for i in range(max(1, width))]
    slices = [s for s in slices if s]
    args = [(ctx.p, ctx.n, family, normalize, use_prefilter, s) for s in slices]
    if width <= 1 or len(slices) <= 1:
        results = [scan_chunk(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=width) as pool:
            results = list(pool.map(scan_chunk, *zip(*args)))
    merged = ChunkResult(
        sum(r.scanned for r in results),
        sum(r.survivors for r in results),
        sorted(itertools.chain.from_iterable(r.prs for r in results)),
    )
    log.info("F_%d %s: scanned %d, survivors %d, PRs %d", ctx.q, family,
             merged.scanned, merged.survivors, len(merged.prs))
    return merged, desc


def as_tuples(family: str, raw) -> list[ParamTuple]:
    if family == CHAR3:
        return [ParamTuple.char3(*r) for r in raw]
    return [ParamTuple(*r) for r in raw]
