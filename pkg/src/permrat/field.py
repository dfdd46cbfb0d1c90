"""Finite fields F_q, q = p^n, with elements encoded as integers.

An element with coefficient list ``(c0, ..., c_{n-1})`` over the prime field
(coefficient ``i`` of the basis power ``t^i``) is stored as the integer
``c0 + c1*p + ... + c_{n-1}*p^(n-1)``.  This index order is exactly the
enumeration order of the field: 0 first, low coefficient varying fastest.

Fields up to ``TABLE_LIMIT`` elements carry exp/log/Zech tables, which give
O(1) scalar arithmetic and numpy-vectorized arithmetic on element arrays.
Larger fields (only needed for cubic extensions of the bigger audit fields)
fall back to plain polynomial arithmetic on coefficient lists.
"""
from __future__ import annotations

import functools
import math

import numpy as np

DEFAULT_MAX_ORDER = 2 ** 20
TABLE_LIMIT = 2 ** 20
MAX_DEGREE = 12


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class DegreeOutOfRange(FieldError):
    pass


class FieldTooLarge(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class NotInSubfield(FieldError):
    pass


# --------------------------------------------------------------------------
# integer helpers

def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    i = 3
    while i * i <= k:
        if k % i == 0:
            return False
        i += 2
    return True


def prime_factors(k: int) -> list[int]:
    out = []
    i = 2
    while i * i <= k:
        if k % i == 0:
            out.append(i)
            while k % i == 0:
                k //= i
        i += 1
    if k > 1:
        out.append(k)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` as ``(p, n)`` with ``q = p**n``; raise if not a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    factors = prime_factors(q)
    if len(factors) != 1:
        raise NotPrime(f"{q} is not a prime power")
    p = factors[0]
    n = round(math.log(q, p))
    while p ** n < q:
        n += 1
    while p ** n > q:
        n -= 1
    if p ** n != q:
        raise NotPrime(f"{q} is not a prime power")
    return p, n


# --------------------------------------------------------------------------
# polynomials over F_p as lists of ints (low degree first); used only to
# choose moduli

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = _trim([x % p for x in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - coef * fc) % p
        _trim(a)
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _pmod(prod, f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(list(a), f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible_fp(f, p) -> bool:
    """Irreducibility of a monic polynomial over F_p (distinct-degree test)."""
    m = len(f) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    xp = x
    for _ in range(1, m // 2 + 1):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, diff, p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates are ordered by the tuple ``(c0, c1, ..., c_{n-1})`` of their
    lower coefficients.  Returns the full coefficient tuple (low to high).
    """
    if n == 1:
        return (0, 1)
    import itertools

    for low in itertools.product(range(p), repeat=n):
        if low[0] == 0:
            continue
        f = list(low) + [1]
        if _is_irreducible_fp(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# --------------------------------------------------------------------------

class _InfinityType:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_InfinityType, ())


INF = _InfinityType()


def is_infinity(x) -> bool:
    return x is INF


class FieldCtx:
    """The field F_p[t]/(modulus).  Immutable once built.

    Scalar methods take and return element indices (ints in ``range(q)``);
    the ``v*`` methods do the same on numpy integer arrays.
    """

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.q = p ** n
        self.modulus = tuple(modulus)
        self.order = self.q - 1
        self._pw = [p ** i for i in range(n)]
        self.has_tables = self.q <= TABLE_LIMIT
        self.primitive = self._find_primitive()
        if self.has_tables:
            self._build_tables()

    # -- identity, repr, pickling ---------------------------------------
    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.n, self.modulus) == (
            other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __reduce__(self):
        return (_make_field, (self.p, self.n))

    # -- codec ----------------------------------------------------------
    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            x, r = divmod(x, self.p)
            out.append(r)
        return tuple(out)

    def element(self, coeffs) -> int:
        """Element from an int (taken mod p, i.e. in the prime field) or a
        coefficient sequence."""
        if isinstance(coeffs, (int, np.integer)):
            return int(coeffs) % self.p
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise FieldMismatch(f"too many coefficients for F_{self.q}")
        return sum((c % self.p) * w for c, w in zip(coeffs, self._pw))

    def elements(self):
        return range(self.q)

    @property
    def gen(self) -> int:
        """The class of t (equals 0 in a prime field realized mod X)."""
        return self.p if self.n > 1 else 0

    def check(self, x: int) -> int:
        if not (0 <= x < self.q):
            raise FieldMismatch(f"{x} is not an element of F_{self.q}")
        return x

    def format(self, x: int) -> str:
        return ",".join(map(str, self.coeffs(x))) + f"@{self.p}^{self.n}"

    # -- table construction ---------------------------------------------
    def _find_primitive(self) -> int:
        m = self.order
        if m == 1:
            return 1
        factors = prime_factors(m)
        for g in range(2, self.q):
            if all(self._slow_pow(g, m // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")  # unreachable

    def _build_tables(self):
        q, m, p, n = self.q, self.order, self.p, self.n
        exp = [0] * m
        if n == 1:
            cur = 1
            g = self.primitive
            for k in range(m):
                exp[k] = cur
                cur = cur * g % p
        else:
            step = self._vmul_by_const_poly(np.arange(q, dtype=np.int64), self.primitive).tolist()
            cur = 1
            for k in range(m):
                exp[k] = cur
                cur = step[cur]
        log = [0] * q
        for k, v in enumerate(exp):
            log[v] = k
        self._exp = exp + exp
        self._log = log
        self.exp_arr = np.array(self._exp, dtype=np.int64)
        self.log_arr = np.array(log, dtype=np.int64)
        if n > 1:
            e = self.exp_arr[:m]
            d0 = e % p
            onep = e - d0 + (d0 + 1) % p
            zech = np.where(onep == 0, -1, self.log_arr[onep])
            self._zech = zech.tolist()
        self._half = m // 2 if p != 2 else 0

    def _vmul_by_const_poly(self, xs, g):
        """t-power expansion of g*x for an array xs, without tables."""
        p, n = self.p, self.n
        mod = self.modulus
        digits = [(xs // self._pw[i]) % p for i in range(n)]
        acc = [np.zeros_like(xs) for _ in range(n)]
        gc = self.coeffs(g)
        cur = digits
        for j in range(n):
            if gc[j]:
                for i in range(n):
                    acc[i] = acc[i] + gc[j] * cur[i]
            top = cur[n - 1]
            nxt = [(-top * mod[0]) % p]
            for i in range(1, n):
                nxt.append((cur[i - 1] - top * mod[i]) % p)
            cur = nxt
        return sum((acc[i] % p) * self._pw[i] for i in range(n))

    # -- slow (table-free) arithmetic -----------------------------------
    def _slow_mul(self, x, y):
        if self.n == 1:
            return x * y % self.p
        a, b = self.coeffs(x), self.coeffs(y)
        prod = [0] * (2 * self.n - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    prod[i + j] += u * v
        return self.element(_pmod(prod, list(self.modulus), self.p) or [0])

    def _slow_pow(self, x, k):
        result = 1
        base = x
        while k:
            if k & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            k >>= 1
        return result

    def _slow_add(self, x, y):
        p = self.p
        out = 0
        for w in self._pw:
            out += ((x // w + y // w) % p) * w
        return out

    def _slow_neg(self, x):
        p = self.p
        out = 0
        for w in self._pw:
            out += ((-(x // w)) % p) * w
        return out

    # -- scalar arithmetic ----------------------------------------------
    def add(self, x: int, y: int) -> int:
        if self.n == 1:
            return (x + y) % self.p
        if not x:
            return y
        if not y:
            return x
        if not self.has_tables:
            return self._slow_add(x, y)
        lx = self._log[x]
        z = self._zech[(self._log[y] - lx) % self.order]
        if z < 0:
            return 0
        return self._exp[lx + z]

    def neg(self, x: int) -> int:
        if self.n == 1:
            return -x % self.p
        if not x or self.p == 2:
            return x
        if not self.has_tables:
            return self._slow_neg(x)
        return self._exp[self._log[x] + self._half]

    def sub(self, x: int, y: int) -> int:
        if self.n == 1:
            return (x - y) % self.p
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.n == 1:
            return x * y % self.p
        if not x or not y:
            return 0
        if not self.has_tables:
            return self._slow_mul(x, y)
        return self._exp[self._log[x] + self._log[y]]

    def inv(self, x: int) -> int:
        if not x:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.q}")
        if self.n == 1:
            return pow(x, -1, self.p)
        if not self.has_tables:
            return self._slow_pow(x, self.q - 2)
        return self._exp[(self.order - self._log[x]) % self.order]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(x), -k)
        if not x:
            return 0 if k else 1
        if self.n == 1:
            return pow(x, k, self.p)
        if not self.has_tables:
            return self._slow_pow(x, k % self.order or (self.order if k else 0))
        return self._exp[self._log[x] * k % self.order]

    def scalar(self, k: int, x: int) -> int:
        """Integer multiple k*x (k reduced mod p)."""
        return self.mul(k % self.p, x)

    def sum(self, xs) -> int:
        acc = 0
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def is_square(self, x: int) -> bool:
        if not x or self.p == 2:
            return True
        if self.has_tables:
            return self._log[x] % 2 == 0
        return self.pow(x, self.order // 2) == 1

    def sqrt(self, x: int):
        """A square root of x, or None if x is a non-square."""
        if not x:
            return 0
        if self.p == 2:
            return self.pow(x, self.q // 2)
        if not self.is_square(x):
            return None
        if self.has_tables:
            return self._exp[self._log[x] // 2]
        for y in range(self.q):
            if self.mul(y, y) == x:
                return y
        return None  # pragma: no cover

    def nonsquare(self) -> int:
        """The first non-square in enumeration order (odd q only)."""
        if self.p == 2:
            raise FieldError("every element of a binary field is a square")
        return next(x for x in range(1, self.q) if not self.is_square(x))

    # -- Frobenius and trace --------------------------------------------
    def _base_degree(self, q0: int) -> int:
        p0, k = prime_power(q0)
        if p0 != self.p or self.n % k:
            raise FieldMismatch(f"F_{q0} is not a subfield of F_{self.q}")
        return k

    def frobenius(self, x: int, k: int = 1, base: int | None = None) -> int:
        """x ** (base ** k); base defaults to p."""
        base = self.p if base is None else base
        self._base_degree(base)
        return self.pow(x, base ** k)

    def trace(self, x: int, base: int | None = None) -> int:
        """Trace from F_q down to the subfield of order ``base`` (default p)."""
        base = self.p if base is None else base
        m = self.n // self._base_degree(base)
        acc, cur = 0, x
        for _ in range(m):
            acc = self.add(acc, cur)
            cur = self.pow(cur, base)
        return acc

    def in_subfield(self, x: int, q0: int) -> bool:
        self._base_degree(q0)
        return self.pow(x, q0) == x

    # -- vectorized arithmetic ------------------------------------------
    def _need_tables(self):
        if not self.has_tables:
            raise FieldTooLarge(f"vectorized arithmetic needs q <= {TABLE_LIMIT}")

    def digits(self, xs):
        xs = np.asarray(xs, dtype=np.int64)
        return np.stack([(xs // w) % self.p for w in self._pw], axis=-1)

    def from_digits(self, ds):
        ds = np.asarray(ds, dtype=np.int64)
        return (ds % self.p) @ np.array(self._pw, dtype=np.int64)

    def vadd(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        p = self.p
        if self.n == 1:
            return (x + y) % p
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        for w in self._pw:
            out += ((x // w + y // w) % p) * w
        return out

    def vneg(self, x):
        x = np.asarray(x, dtype=np.int64)
        p = self.p
        if self.n == 1:
            return (-x) % p
        if p == 2:
            return x.copy()
        out = np.zeros_like(x)
        for w in self._pw:
            out += ((-(x // w)) % p) * w
        return out

    def vsub(self, x, y):
        return self.vadd(x, self.vneg(y))

    def vmul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.n == 1:
            return (x * y) % self.p
        self._need_tables()
        r = self.exp_arr[self.log_arr[x] + self.log_arr[y]]
        return np.where((x == 0) | (y == 0), 0, r)

    def vinv(self, x):
        x = np.asarray(x, dtype=np.int64)
        self._need_tables()
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of 0")
        return self.exp_arr[(self.order - self.log_arr[x]) % self.order]

    def vpow(self, x, k: int):
        x = np.asarray(x, dtype=np.int64)
        if k == 0:
            return np.ones_like(x)
        self._need_tables()
        r = self.exp_arr[(self.log_arr[x] * k) % self.order]
        return np.where(x == 0, 0, r)

    def vscalar(self, k: int, x):
        return self.vmul(np.int64(k % self.p), x)

    def vsum(self, x, axis=-1):
        """Field sum along an axis."""
        x = np.asarray(x, dtype=np.int64)
        if self.n == 1:
            return x.sum(axis=axis) % self.p
        return self.from_digits(self.digits(x).sum(axis=axis if axis >= 0 else axis - 1))

    def mul_matrices(self, ks):
        """For each element k, the n x n matrix over F_p of y -> k*y.

        Returns an int64 array of shape ``(len(ks), n, n)``; column j holds
        the digits of ``k * t^j``.
        """
        ks = np.asarray(ks, dtype=np.int64)
        if self.n == 1:
            return ks.reshape(-1, 1, 1)
        cols = []
        tj = 1
        for _ in range(self.n):
            cols.append(self.digits(self.vmul(ks, np.int64(tj))))
            tj = self.mul(tj, self.gen)
        return np.stack(cols, axis=-1)


@functools.lru_cache(maxsize=None)
def _make_field(p: int, n: int) -> FieldCtx:
    return FieldCtx(p, n, smallest_irreducible(p, n))


def make_field(p: int, n: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> FieldCtx:
    """The field of order p**n with the smallest irreducible modulus.

    Repeated calls return the same (cached) context.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not 1 <= n <= MAX_DEGREE:
        raise DegreeOutOfRange(f"extension degree {n} outside 1..{MAX_DEGREE}")
    if p ** n > max_order:
        raise FieldTooLarge(f"{p}^{n} exceeds the bound {max_order}")
    return _make_field(p, n)


def field_of_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldCtx:
    p, n = prime_power(q)
    return make_field(p, n, max_order)


def parse_element(text: str) -> tuple[FieldCtx, int]:
    """Parse ``"c0,c1,...@p^n"`` (or ``"c0@p"``)."""
    try:
        body, _, fld = text.strip().partition("@")
        if "^" in fld:
            p_s, n_s = fld.split("^")
            p, n = int(p_s), int(n_s)
        else:
            p, n = prime_power(int(fld))
        ctx = make_field(p, n)
        cs = [int(c) for c in body.split(",")]
    except (ValueError, TypeError) as exc:
        if isinstance(exc, FieldError):
            raise
        raise FieldError(f"cannot parse element {text!r}") from exc
    if len(cs) > ctx.n or any(not 0 <= c < p for c in cs):
        raise FieldError(f"bad coefficients in {text!r}")
    return ctx, ctx.element(cs)


# --------------------------------------------------------------------------
# subfield embeddings

class Embedding:
    """F_{q}  ->  F_{q^m}, both realized over F_p with their own moduli.

    The image of the small field's generator t is the smallest root (in
    enumeration order) of the small modulus inside the big field.
    """

    def __init__(self, small: FieldCtx, big: FieldCtx):
        if small.p != big.p or big.n % small.n:
            raise FieldMismatch(f"F_{small.q} does not embed in F_{big.q}")
        self.small = small
        self.big = big
        self.degree = big.n // small.n
        if small.n == 1:
            self.root = 0
        else:
            from .poly import field_roots

            roots = field_roots(big, list(small.modulus))
            self.root = min(roots)
        # basis images root^i as digit columns
        powers = []
        cur = 1
        for _ in range(small.n):
            powers.append(cur)
            cur = big.mul(cur, self.root)
        self._basis = powers
        self._solver = _SubfieldSolver(big, powers) if small.n > 1 else None
        self._cache = {}

    def embed(self, x: int) -> int:
        if self.small.n == 1:
            return x
        hit = self._cache.get(x)
        if hit is None:
            acc = 0
            for c, b in zip(self.small.coeffs(x), self._basis):
                if c:
                    acc = self.big.add(acc, self.big.scalar(c, b))
            self._cache[x] = hit = acc
        return hit

    def restrict(self, y: int) -> int:
        """Preimage of y; raises NotInSubfield if y is not in the image."""
        if self.small.n == 1:
            if y >= self.small.p:
                raise NotInSubfield(f"{self.big.format(y)} is not in F_{self.small.q}")
            return y
        cs = self._solver.solve(self.big.coeffs(y))
        if cs is None:
            raise NotInSubfield(f"{self.big.format(y)} is not in F_{self.small.q}")
        return self.small.element(cs)

    def contains(self, y: int) -> bool:
        return self.big.pow(y, self.small.q) == y


class _SubfieldSolver:
    """Solve sum_i c_i * digits(b_i) = y over F_p (Gaussian elimination)."""

    def __init__(self, big: FieldCtx, basis):
        self.p = p = big.p
        cols = [big.coeffs(b) for b in basis]
        self.rows = big.n
        self.k = len(cols)
        # augmented matrix rows: big.n equations, k unknowns
        self.matrix = [[cols[j][i] for j in range(self.k)] for i in range(big.n)]
        self.p = p

    def solve(self, y):
        p, k = self.p, self.k
        a = [row[:] + [y[i]] for i, row in enumerate(self.matrix)]
        r = 0
        pivots = []
        for c in range(k):
            piv = next((i for i in range(r, len(a)) if a[i][c] % p), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = pow(a[r][c], -1, p)
            a[r] = [v * inv % p for v in a[r]]
            for i in range(len(a)):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [(v - f * w) % p for v, w in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
        if any(row[-1] % p for row in a[r:]):
            return None
        sol = [0] * k
        for i, c in enumerate(pivots):
            sol[c] = a[i][-1]
        return sol


@functools.lru_cache(maxsize=None)
def _embedding(p: int, n: int, m: int) -> Embedding:
    small = make_field(p, n)
    big = _make_field(p, n * m)
    return Embedding(small, big)


def extension(ctx: FieldCtx, m: int = 3) -> Embedding:
    """The degree-m extension of ctx (cached per field pair)."""
    if ctx.n * m > MAX_DEGREE * 3:
        raise DegreeOutOfRange("extension degree too large")
    return _embedding(ctx.p, ctx.n, m)


def cubic_extension(ctx: FieldCtx) -> Embedding:
    return extension(ctx, 3)
