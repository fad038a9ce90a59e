"""Exact scalar fields and univariate polynomials.

Two kinds of field are supported: the rationals (``QQ``) and prime fields
``GF(p)``.  Field elements are plain Python values: ``gmpy2.mpq``
for the rationals and ``int`` residues in ``[0, p)`` for prime fields.  The
:class:`Field` object carries the arithmetic, conversion and array helpers;
elements never remember which field they belong to.

Polynomials are immutable :class:`Poly` values with coefficients stored lowest
degree first.  :func:`poly_factor` factors over either field.
"""
import math
import random
from itertools import combinations
from numbers import Integral, Rational

import numpy as np
from gmpy2 import mpq

from ._kernels import INT64_PRIME_LIMIT

DEFAULT_DEGREE_CEILING = 64


_ZERO, _ONE = mpq(0), mpq(1)


class DegreeCeilingExceeded(ValueError):
    pass


def is_prime(n):
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _parse_rational(x):
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, bool):
        raise TypeError("booleans are not field elements")
    if isinstance(x, (Integral, np.integer)):
        return mpq(int(x))
    if isinstance(x, Rational):
        return mpq(x)
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


class Field:
    """The rationals (``p == 0``) or the prime field with ``p`` elements."""

    __slots__ = ("p",)

    def __init__(self, p=0):
        p = int(p)
        if p != 0 and not is_prime(p):
            raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __reduce__(self):
        return (Field, (self.p,))

    @property
    def char(self):
        return self.p

    @property
    def is_finite(self):
        return self.p != 0

    @property
    def uses_int64(self):
        return 0 < self.p < INT64_PRIME_LIMIT

    @property
    def dtype(self):
        return np.int64 if self.uses_int64 else object

    @property
    def zero(self):
        return _ZERO if self.p == 0 else 0

    @property
    def one(self):
        return _ONE if self.p == 0 else 1

    # -- elements ----------------------------------------------------------
    def __call__(self, x):
        """Convert ``x`` (int, rational or a string such as ``"3/2"``) into the field."""
        q = _parse_rational(x)
        if self.p == 0:
            return q
        den = q.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator of {x!r} vanishes mod {self.p}")
        return int(q.numerator) * pow(int(den), -1, self.p) % self.p

    def check(self, a):
        """Raise ``TypeError`` unless ``a`` is a canonical element of this field."""
        if isinstance(a, bool):
            raise TypeError("booleans are not field elements")
        if self.p == 0:
            if not isinstance(a, (Rational, np.integer)):
                raise TypeError(f"{a!r} is not an element of QQ")
            return
        if not isinstance(a, (Integral, np.integer)):
            raise TypeError(f"{a!r} is not an element of GF({self.p})")
        if not 0 <= int(a) < self.p:
            raise TypeError(f"{a!r} is not a reduced residue mod {self.p}")

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / mpq(a)
        return pow(int(a), -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_str(self, a):
        return str(mpq(a)) if self.p == 0 else str(int(a))

    def normalize(self, a):
        return mpq(a) if self.p == 0 else int(a) % self.p

    def random_element(self, rng, bound=10):
        """Seeded random element; over QQ an integer in ``[-bound, bound]``."""
        if self.p == 0:
            return mpq(int(rng.integers(-bound, bound + 1)))
        return int(rng.integers(0, self.p))

    # -- arrays ------------------------------------------------------------
    def array(self, data):
        """Build a 1-d or 2-d array of field elements from nested data."""
        raw = np.array(data, dtype=object)
        out = np.empty(raw.shape, dtype=self.dtype)
        flat_in = raw.reshape(-1)
        flat_out = out.reshape(-1)
        for k, x in enumerate(flat_in):
            flat_out[k] = self(x)
        return out

    def zeros(self, shape):
        if self.uses_int64:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(self.zero)
        return out

    def eye(self, n):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def basis_vector(self, n, i):
        v = self.zeros(n)
        v[i] = self.one
        return v

    def random_array(self, rng, shape, bound=3):
        if self.p == 0:
            return np.vectorize(lambda v: mpq(int(v)), otypes=[object])(
                rng.integers(-bound, bound + 1, size=shape))
        vals = rng.integers(0, self.p, size=shape)
        return vals.astype(self.dtype) if self.uses_int64 else vals.astype(object)


QQ = Field(0)


def GF(p):
    return Field(p)


def field_arith(field, a, b, op):
    """Exact ``a op b`` in ``field`` for ``op`` one of ``+ - * /``."""
    field.check(a)
    field.check(b)
    if op == "+":
        return field.add(a, b)
    if op == "-":
        return field.sub(a, b)
    if op in ("*", "×"):
        return field.mul(a, b)
    if op in ("/", "÷"):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return field.div(a, b)
    raise ValueError(f"unknown operation {op!r}")


# ====================================================================== Poly

class Poly:
    """Immutable univariate polynomial over a :class:`Field`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = [field.normalize(c) if isinstance(c, (Integral, np.integer)) else field(c)
              for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    def __repr__(self):
        if not self.coeffs:
            return f"Poly({self.field!r}, 0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            s = self.field.to_str(c)
            terms.append(s if k == 0 else f"{s}*x^{k}")
        return f"Poly({self.field!r}, {' + '.join(terms)})"

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (Integral, Rational)):
            return self == Poly.const(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (self.field.one,)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise TypeError("polynomials over different fields")
            return other
        return Poly.const(self.field, self.field(other))

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (F.zero,) * (n - len(self.coeffs))
        b = other.coeffs + (F.zero,) * (n - len(other.coeffs))
        return Poly(F, [F.add(x, y) for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(F)
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        if F.p:
            out = [c % F.p for c in out]
        return Poly(F, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(F), self
        inv_lc = F.inv(other.lc)
        quo = [F.zero] * (dq + 1)
        db = other.degree
        for k in range(dq, -1, -1):
            c = F.mul(rem[k + db], inv_lc)
            quo[k] = c
            if c == 0:
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = F.sub(rem[k + j], F.mul(c, b))
        return Poly(F, quo), Poly(F, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e):
        result = Poly.const(self.field, self.field.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = self.field.add(self.field.mul(acc, x), c)
        return acc

    def monic(self):
        if not self.coeffs:
            return self
        inv = self.field.inv(self.lc)
        return Poly(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def deriv(self):
        F = self.field
        return Poly(F, [F.mul(F.normalize(k), c) for k, c in enumerate(self.coeffs)][1:])

    def powmod(self, e, m):
        result = Poly.const(self.field, self.field.one) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def sort_key(self):
        return (self.degree, tuple(self.field.to_str(c) for c in self.coeffs))


def poly_gcd(f, g):
    """Monic gcd of ``f`` and ``g``; ``gcd(0, 0)`` is the zero polynomial."""
    if f.field != g.field:
        raise TypeError("polynomials over different fields")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(f, g):
    """Return ``(d, s, t)`` with ``d = s f + t g`` monic."""
    F = f.field
    r0, r1 = f, g
    s0, s1 = Poly.const(F, F.one), Poly(F)
    t0, t1 = Poly(F), Poly.const(F, F.one)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = F.inv(r0.lc)
    return r0 * inv, s0 * inv, t0 * inv


# ====================================================== factoring over GF(p)

def _pth_root(f):
    p = f.field.p
    return Poly(f.field, f.coeffs[::p])


def _squarefree_fp(f):
    """Squarefree decomposition of a monic polynomial over GF(p)."""
    out = []
    if f.degree <= 0:
        return out
    fd = f.deriv()
    if fd.is_zero():
        for h, e in _squarefree_fp(_pth_root(f)):
            out.append((h, e * f.field.p))
        return out
    c = poly_gcd(f, fd)
    w = f // c
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        z = w // y
        if not z.is_one():
            out.append((z.monic(), i))
        i += 1
        w, c = y, c // y
    if not c.is_one() and c.degree > 0:
        for h, e in _squarefree_fp(_pth_root(c.monic())):
            out.append((h, e * f.field.p))
    return out


def _distinct_degree(f):
    F = f.field
    x = Poly.x(F)
    out = []
    h = x
    i = 0
    while f.degree >= 2 * (i + 1):
        i += 1
        h = h.powmod(F.p, f)
        g = poly_gcd(f, h - x)
        if not g.is_one():
            out.append((g, i))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def _equal_degree(f, d, rng):
    """Split the squarefree monic ``f`` whose irreducible factors all have degree ``d``."""
    F = f.field
    n = f.degree
    if n == d:
        return [f]
    p = F.p
    while True:
        a = Poly(F, [rng.randrange(p) for _ in range(n)])
        if a.degree < 1:
            continue
        if p == 2:
            # absolute trace to GF(2): a + a^2 + ... + a^(2^(d-1))
            t = a % f
            acc = t
            for _ in range(d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.powmod((p**d - 1) // 2, f) - 1
        g = poly_gcd(f, b)
        if 0 < g.degree < n:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def _factor_fp(f, seed):
    rng = random.Random(seed)
    out = {}
    for g, e in _squarefree_fp(f.monic()):
        for h, d in _distinct_degree(g):
            for q in _equal_degree(h, d, rng):
                out[q] = out.get(q, 0) + e
    return out


# ======================================================= factoring over QQ
# Integer polynomials are plain lists of ints, lowest degree first.

def _zstrip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zmod(a, m):
    return _zstrip([c % m for c in a])


def _zsym(a, m):
    h = m // 2
    return _zstrip([(c % m) - m if (c % m) > h else c % m for c in a])


def _zmul(a, b, m=None):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _zmod(out, m) if m else _zstrip(out)


def _zsub(a, b, m=None):
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]
    return _zmod(out, m) if m else _zstrip(out)


def _zadd(a, b, m=None):
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)]
    return _zmod(out, m) if m else _zstrip(out)


def _zdivmod_monic(a, b, m):
    """Divide by a monic ``b`` over Z/m."""
    rem = [c % m for c in a]
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], _zstrip(rem)
    quo = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] % m
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] = (rem[k + j] - c * y) % m
    return _zstrip(quo), _zstrip(rem[:db])


def _zexact_div(a, b):
    """Exact division over Z; returns None when ``b`` does not divide ``a``."""
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(rem) - 1 < db:
        return None if _zstrip(rem) else []
    quo = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c, r = divmod(rem[k + db], lb)
        if r:
            return None
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] -= c * y
    if any(rem[:db]):
        return None
    return _zstrip(quo)


def _content(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _primitive(a):
    g = _content(a)
    if g == 0:
        return a
    out = [c // g for c in a]
    if out[-1] < 0:
        out = [-c for c in out]
    return out


def _to_fp(a, p):
    return Poly(Field(p), [c % p for c in a])


def _hensel_pair(f, g, h, s, t, m):
    """One quadratic Hensel step modulo m -> m*m (h monic)."""
    m2 = m * m
    e = _zsub(f, _zmul(g, h), m2)
    q, r = _zdivmod_monic(_zmul(s, e, m2), h, m2)
    g1 = _zadd(g, _zadd(_zmul(t, e, m2), _zmul(q, g, m2), m2), m2)
    h1 = _zadd(h, r, m2)
    b = _zsub(_zadd(_zmul(s, g1, m2), _zmul(t, h1, m2), m2), [1], m2)
    c, d = _zdivmod_monic(_zmul(s, b, m2), h1, m2)
    s1 = _zsub(s, d, m2)
    t1 = _zsub(_zsub(t, _zmul(t, b, m2), m2), _zmul(c, g1, m2), m2)
    return g1, h1, s1, t1


def _hensel_lift(f, factors, p, target):
    """Lift ``f = lc * prod(factors) mod p`` (monic factors) to a modulus >= target."""
    if len(factors) == 1:
        m = p
        while m < target:
            m *= m
        lc = f[-1]
        inv = pow(lc, -1, m)
        return [_zmod([c * inv for c in f], m)], m
    k = len(factors) // 2
    left, right = factors[:k], factors[k:]
    F = Field(p)
    lc = f[-1] % p
    g = Poly.const(F, lc)
    for q in left:
        g = g * q
    h = Poly.const(F, 1)
    for q in right:
        h = h * q
    d, s, t = poly_xgcd(g, h)
    assert d.is_one()
    gz, hz = list(g.coeffs), list(h.coeffs)
    sz, tz = list(s.coeffs), list(t.coeffs)
    m = p
    while m < target:
        gz, hz, sz, tz = _hensel_pair(f, gz, hz, sz, tz, m)
        m = m * m
    lf, ml = _hensel_lift(_zsym(gz, m), left, p, target)
    rf, mr = _hensel_lift(_zsym(hz, m), right, p, target)
    mm = min(m, ml, mr)
    return [_zmod(q, mm) for q in lf + rf], mm


def _primes_from(start):
    n = start
    while True:
        if is_prime(n):
            yield n
        n += 1


def _factor_sqfree_int(f, seed):
    """Irreducible factors over Z of a squarefree primitive ``f`` with lc > 0."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    lc = f[-1]
    best = None
    tried = 0
    for p in _primes_from(3):
        if lc % p == 0:
            continue
        fp = _to_fp(f, p)
        if not poly_gcd(fp, fp.deriv()).is_one():
            continue
        facs = _factor_fp(fp, seed)
        facs = sorted(facs, key=Poly.sort_key)
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        tried += 1
        if tried >= 5 or len(facs) == 1:
            break
    p, facs = best
    if len(facs) == 1:
        return [f]
    norm2 = math.isqrt(sum(c * c for c in f)) + 1
    bound = 2 * abs(lc) * (2 ** n) * norm2
    lifted, m = _hensel_lift(f, facs, p, bound + 1)

    out = []
    g = f
    pool = list(range(len(lifted)))
    s = 1
    while 2 * s <= len(pool):
        found = False
        for subset in combinations(pool, s):
            lcg = g[-1]
            h = [lcg % m]
            for k in subset:
                h = _zmul(h, lifted[k], m)
            h = _zsym(h, m)
            rest = [lcg % m]
            for k in pool:
                if k not in subset:
                    rest = _zmul(rest, lifted[k], m)
            rest = _zsym(rest, m)
            if _zmul(h, rest) == [lcg * c for c in g]:
                out.append(_primitive(h))
                g = _primitive(rest)
                pool = [k for k in pool if k not in subset]
                found = True
                break
        if not found:
            s += 1
    out.append(_primitive(g))
    return out


def _squarefree_q(f):
    """Yun's squarefree decomposition of a monic rational polynomial."""
    out = []
    fd = f.deriv()
    a = poly_gcd(f, fd)
    b = f // a
    c = fd // a
    d = c - b.deriv()
    i = 1
    while not b.is_one() and b.degree > 0:
        a = poly_gcd(b, d)
        if not a.is_one():
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.deriv()
        i += 1
    return out


def _factor_q(f, seed):
    out = {}
    for g, e in _squarefree_q(f.monic()):
        den = 1
        for c in g.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = _primitive([int(c * den) for c in g.coeffs])
        for h in _factor_sqfree_int(ints, seed):
            q = Poly(QQ, [mpq(c) for c in h]).monic()
            out[q] = out.get(q, 0) + e
    return out


def poly_factor(f, seed=0, degree_ceiling=DEFAULT_DEGREE_CEILING):
    """Factor ``f`` into monic irreducibles.

    Returns a list of ``(factor, exponent)`` pairs sorted by degree and then
    coefficients; ``f == f.lc * prod(factor**exponent)``.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree > degree_ceiling:
        raise DegreeCeilingExceeded(
            f"degree {f.degree} exceeds the factorization ceiling {degree_ceiling}")
    if f.degree == 0:
        return []
    if f.field.p:
        facs = _factor_fp(f, seed)
    else:
        facs = _factor_q(f, seed)
    return sorted(facs.items(), key=lambda kv: kv[0].sort_key())


def is_irreducible(f, seed=0):
    facs = poly_factor(f, seed)
    return len(facs) == 1 and facs[0][1] == 1
