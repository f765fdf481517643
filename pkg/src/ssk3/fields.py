"""Deterministic finite fields GF(p^m) of odd characteristic.

The modulus of GF(p^m) is the lexicographically smallest monic irreducible of
degree m, where polynomials are compared by their base-p integer code
(leading coefficient most significant).  Two independent constructions of the
same field therefore agree bit for bit, with no external polynomial tables.

Elements are coefficient vectors over GF(p), constant term first.  Contexts
are immutable and interned, so identity comparison is safe; arithmetic across
different contexts is an error rather than a silent coercion.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import GuardExceeded, resolve_cap

_LOG_TABLE_LIMIT = 1 << 20  # above this, discrete logs fall back to BSGS


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- dense polynomial arithmetic over GF(p), coefficient lists low-to-high --

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df:
        c = a[-1] % p
        if c:
            shift = len(a) - 1 - df
            for i in range(df + 1):
                a[shift + i] = (a[shift + i] - c * f[i]) % p
        a.pop()
    return _ptrim(a)


def _ppowmod(a, e: int, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _is_irreducible(f, p) -> bool:
    """Deterministic irreducibility test for a monic polynomial over GF(p)."""
    m = len(f) - 1
    if m == 1:
        return True
    if f[0] == 0:  # root at zero
        return False
    x = [0, 1]
    if _ppowmod(x, p ** m, f, p) != [0, 1]:
        return False
    for r in _prime_factors(m):
        t = _ppowmod(x, p ** (m // r), f, p)
        diff = list(t) + [0] * max(0, 2 - len(t))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(_ptrim(diff), f, p)
        if len(g) - 1 != 0:
            return False
    return True


def _find_modulus(p: int, m: int):
    """Scan monic degree-m polynomials in base-p code order; first irreducible wins."""
    for code in range(p ** m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found (impossible)")


@dataclass(frozen=True)
class FieldCtx:
    """Immutable description of GF(p^m): prime p, degree m, monic modulus."""

    p: int
    m: int
    modulus: tuple  # length m+1, constant term first, leading coefficient 1

    @property
    def q(self) -> int:
        return self.p ** self.m

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.m)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.m - 1))

    def gen(self) -> "FieldElement":
        """Residue class of x (zero in the prime field, where x is the modulus)."""
        if self.m == 1:
            return self.zero()
        return FieldElement(self, (0, 1) + (0,) * (self.m - 2))

    def from_int(self, k: int) -> "FieldElement":
        return FieldElement(self, (k % self.p,) + (0,) * (self.m - 1))

    def from_code(self, code: int) -> "FieldElement":
        coeffs = []
        for _ in range(self.m):
            coeffs.append(code % self.p)
            code //= self.p
        return FieldElement(self, tuple(coeffs))

    def element(self, coeffs) -> "FieldElement":
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.m:
            raise ValueError("too many coefficients for GF(%d^%d)" % (self.p, self.m))
        coeffs += [0] * (self.m - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def elements(self):
        """All field elements in increasing code order."""
        for code in range(self.q):
            yield self.from_code(code)

    def __repr__(self):
        return "GF(%d^%d)" % (self.p, self.m) if self.m > 1 else "GF(%d)" % self.p


@lru_cache(maxsize=None)
def make_field(p: int, m: int = 1) -> FieldCtx:
    """Deterministic GF(p^m); repeated calls return the identical context."""
    if not isinstance(p, int) or not isinstance(m, int):
        raise ValueError("p and m must be integers")
    if not is_prime(p):
        raise ValueError("p = %r is not prime" % (p,))
    if p == 2:
        raise ValueError("characteristic 2 is unsupported (odd characteristic only)")
    if m < 1:
        raise ValueError("extension degree must be at least 1")
    return FieldCtx(p, m, _find_modulus(p, m))


# reduction rows for x^m .. x^(2m-2) modulo the context modulus
_REDUCTION = {}


def _reduction_rows(ctx: FieldCtx):
    rows = _REDUCTION.get(ctx)
    if rows is None:
        p, m = ctx.p, ctx.m
        rows = []
        cur = list(ctx.modulus[:m])  # x^m = -(lower part), modulus monic
        cur = [(-c) % p for c in cur]
        rows.append(tuple(cur))
        for _ in range(m - 2):
            nxt = [0] + cur[:-1]
            top = cur[-1]
            if top:
                for i in range(m):
                    nxt[i] = (nxt[i] + top * rows[0][i]) % p
            cur = nxt
            rows.append(tuple(cur))
        _REDUCTION[ctx] = rows
    return rows


class FieldElement:
    """Value-type element of a FieldCtx; coefficient tuple, constant first."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple):
        self.ctx = ctx
        self.coeffs = coeffs

    # -- helpers ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError(
                    "cross-context arithmetic: %r vs %r (embed explicitly)" % (self.ctx, other.ctx)
                )
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return None

    @property
    def code(self) -> int:
        c = 0
        for digit in reversed(self.coeffs):
            c = c * self.ctx.p + digit
        return c

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        p, m = ctx.p, ctx.m
        if m == 1:
            return FieldElement(ctx, ((self.coeffs[0] * o.coeffs[0]) % p,))
        a, b = self.coeffs, o.coeffs
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        red = _reduction_rows(ctx)
        out = conv[:m]
        for k in range(m, 2 * m - 1):
            ck = conv[k]
            if ck:
                row = red[k - m]
                for i in range(m):
                    out[i] += ck * row[i]
        return FieldElement(ctx, tuple(c % p for c in out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in %r" % (self.ctx,))
        ctx = self.ctx
        if ctx.m == 1:
            return FieldElement(ctx, (pow(self.coeffs[0], ctx.p - 2, ctx.p),))
        tables = _log_exp(ctx)
        if tables is not None:
            log, exp = tables
            return ctx.from_code(exp[(ctx.q - 1 - log[self.code]) % (ctx.q - 1)])
        return _pow_nolog(self, ctx.q - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        ctx = self.ctx
        if e == 0:
            return ctx.one()
        if self.is_zero():
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return ctx.zero()
        tables = _log_exp(ctx)
        if tables is not None:
            log, exp = tables
            return ctx.from_code(exp[(log[self.code] * e) % (ctx.q - 1)])
        if e < 0:
            return self.inverse() ** (-e)
        result = ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- identity -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.m, self.coeffs))

    def __repr__(self):
        return "FieldElement(%r, %r)" % (self.ctx, list(self.coeffs))


def frobenius(x: FieldElement) -> FieldElement:
    """The p-power map; the m-fold iterate is the identity on GF(p^m)."""
    if x.ctx.m == 1:
        return x
    return x ** x.ctx.p


# -- multiplicative structure: generators, logs, square roots ---------------

_GENERATOR = {}
_LOGEXP = {}
_EMBED_ROOT = {}


def _multiplicative_generator(ctx: FieldCtx) -> FieldElement:
    g = _GENERATOR.get(ctx)
    if g is None:
        n = ctx.q - 1
        checks = [n // r for r in _prime_factors(n)]
        one = ctx.one()
        for code in range(2, ctx.q):
            cand = ctx.from_code(code)
            if all(_pow_nolog(cand, e) != one for e in checks):
                g = cand
                break
        else:  # q == 3 has generator 2 handled above; unreachable otherwise
            raise RuntimeError("no multiplicative generator found")
        _GENERATOR[ctx] = g
    return g


def _pow_nolog(x: FieldElement, e: int) -> FieldElement:
    result = x.ctx.one()
    base = x
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def _log_exp(ctx: FieldCtx):
    """(log dict, exp list) for small fields, or None when the field is too big."""
    if ctx.q > _LOG_TABLE_LIMIT:
        return None
    tables = _LOGEXP.get(ctx)
    if tables is None:
        g = _multiplicative_generator(ctx)
        exp = [0] * (ctx.q - 1)
        log = {}
        acc = ctx.one()
        for k in range(ctx.q - 1):
            c = acc.code
            exp[k] = c
            log[c] = k
            acc = acc * g
        tables = (log, exp)
        _LOGEXP[ctx] = tables
    return tables


def dlog(x: FieldElement) -> int:
    """Discrete log to the deterministic generator; BSGS above the table limit."""
    if x.is_zero():
        raise ValueError("discrete log of zero")
    ctx = x.ctx
    tables = _log_exp(ctx)
    if tables is not None:
        return tables[0][x.code]
    g = _multiplicative_generator(ctx)
    n = ctx.q - 1
    s = int(n ** 0.5) + 1
    baby = {}
    acc = ctx.one()
    for j in range(s):
        baby.setdefault(acc.code, j)
        acc = acc * g
    giant = _pow_nolog(g.inverse(), s)
    cur = x
    for i in range(s + 1):
        j = baby.get(cur.code)
        if j is not None:
            return (i * s + j) % n
        cur = cur * giant
    raise RuntimeError("BSGS failed (element outside the group?)")


def sqrt(x: FieldElement):
    """A square root of x, or None when x is a non-residue."""
    if x.is_zero():
        return x
    ctx = x.ctx
    t = dlog(x)
    if t % 2:
        return None
    g = _multiplicative_generator(ctx)
    return _pow_nolog(g, t // 2)


def embed(x: FieldElement, big: FieldCtx) -> FieldElement:
    """Canonical embedding GF(p^m) -> GF(p^(mk)); the image of the small
    generator is the first root of the small modulus in code order."""
    small = x.ctx
    if small == big:
        return x if x.ctx is big else FieldElement(big, x.coeffs)
    if small.p != big.p:
        raise ValueError("cannot embed across characteristics")
    if big.m % small.m != 0:
        raise ValueError("GF(%d^%d) is not an extension of GF(%d^%d)"
                         % (big.p, big.m, small.p, small.m))
    key = (small, big)
    root = _EMBED_ROOT.get(key)
    if root is None:
        coeffs = small.modulus
        for cand in big.elements():
            acc = big.zero()
            for c in reversed(coeffs):
                acc = acc * cand + c
            if acc.is_zero():
                root = cand
                break
        else:
            raise RuntimeError("no root of the small modulus in the big field")
        _EMBED_ROOT[key] = root
    acc = big.zero()
    for c in reversed(x.coeffs):
        acc = acc * root + c
    return acc


def solve_p_plus_1_root(a: FieldElement, cap=None):
    """Solve c^(p+1) = a in the smallest-degree extension of a's field.

    Returns (c, ext).  Scans extensions GF(p^(mk)) in ascending k; in each,
    solvability is decided on the image of the (p+1)-power endomorphism and a
    witness is produced from the deterministic generator, so the answer is
    reproducible.  Raises GuardExceeded once candidate extensions pass the cap.
    """
    if a.is_zero():
        raise ValueError("no (p+1)-th root of zero")
    ctx = a.ctx
    p, m = ctx.p, ctx.m
    d = p + 1
    limit = resolve_cap(cap)
    k = 1
    while p ** (m * k) <= limit:
        ext = make_field(p, m * k)
        q1 = ext.q - 1
        g = gcd(d, q1)
        ahat = embed(a, ext)
        if _pow_nolog(ahat, q1 // g) == ext.one():
            t = dlog(ahat)
            # solve d*s = t (mod q1); g divides t by the solvability test
            s = (t // g) * pow(d // g, -1, q1 // g) % (q1 // g)
            c = _pow_nolog(_multiplicative_generator(ext), s)
            if _pow_nolog(c, d) != ahat:
                raise RuntimeError("(p+1)-root normalization produced a bad witness")
            return c, ext
        k += 1
    raise GuardExceeded(
        "no (p+1)-th root of %r within the extension cap %d" % (a, limit)
    )
