"""Truncated one-dimensional commutative formal group laws over GF(p).

A law is a bivariate polynomial F(x, y), total degree capped at prec, with
F(x,0) = x, F(0,y) = y, F symmetric, and F associative to precision.  The
additive and multiplicative laws are explicit; the p-typical law of height h
is built from its logarithm sum(x^(q^i) / p^i), q = p^h, by solving the
fixed-point equation F = l(x) + l(y) - sum(F^(q^i) / p^i) with exact rational
coefficients and reducing mod p at the end.  The multiplication-by-p series of
that law is p*x + x^q on the nose, so its reduction is x^(p^h) and the height
is visible as soon as prec >= p^h + 1.

Series are sparse dicts keyed by exponent tuples; coefficients are ints mod p
(or exact Fractions inside the height-h construction only).
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import GuardExceeded, InvariantViolation, resolve_cap
from .fields import FieldCtx, is_prime

INFINITE_HEIGHT = "infinite-to-precision"


# -- sparse truncated polynomials (dict of exponent tuple -> coefficient) -----


def _clean(d):
    return {k: v for k, v in d.items() if v}


def _add(a, b, p=None):
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + v
        if p:
            w %= p
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _scale(a, s, p=None):
    if not s:
        return {}
    out = {}
    for k, v in a.items():
        w = v * s
        if p:
            w %= p
        if w:
            out[k] = w
    return out


def _mul(a, b, prec, p=None):
    out = {}
    for ka, va in a.items():
        da = sum(ka)
        for kb, vb in b.items():
            if da + sum(kb) > prec:
                continue
            key = tuple(x + y for x, y in zip(ka, kb))
            out[key] = out.get(key, 0) + va * vb
    if p:
        return {k: v % p for k, v in out.items() if v % p}
    return _clean(out)


def _pow(a, e, prec, p=None):
    nvars = len(next(iter(a))) if a else 1
    result = {(0,) * nvars: 1}
    base = a
    while e:
        if e & 1:
            result = _mul(result, base, prec, p)
        base = _mul(base, base, prec, p)
        e >>= 1
    return result


@dataclass
class FormalGroupLaw:
    """Bivariate group law truncated at total degree prec, coefficients mod p."""

    p: int
    prec: int
    coeffs: dict  # {(i, j): int in [1, p)}

    def __post_init__(self):
        if self.coeffs.get((1, 0)) != 1 or self.coeffs.get((0, 1)) != 1:
            raise ValueError("a formal group law starts with x + y")
        for (i, j), c in self.coeffs.items():
            if i + j > self.prec:
                raise ValueError("term of degree %d above prec %d" % (i + j, self.prec))
            if not 0 < c < self.p:
                raise ValueError("coefficient %r not reduced mod %d" % (c, self.p))
        _check_unital_symmetric(self)


def _check_unital_symmetric(F: FormalGroupLaw):
    for (i, j), c in F.coeffs.items():
        if j == 0 and (i, c) != (1, 1):
            raise InvariantViolation("F(x, 0) != x: stray term x^%d * %d" % (i, c))
        if i == 0 and (j, c) != (1, 1):
            raise InvariantViolation("F(0, y) != y: stray term y^%d * %d" % (j, c))
        if F.coeffs.get((j, i)) != c:
            raise InvariantViolation("F is not commutative at (%d, %d)" % (i, j))


def verify_axioms(F: FormalGroupLaw):
    """Full axiom check to precision (identity, commutativity, associativity);
    raises InvariantViolation on the first failure."""
    _check_unital_symmetric(F)
    lhs = _assoc_side(F, left=True)
    rhs = _assoc_side(F, left=False)
    if lhs != rhs:
        diff = _add(lhs, _scale(rhs, -1), F.p)
        key = min(diff, key=lambda k: (sum(k), k))
        raise InvariantViolation("associativity fails at x^%d y^%d z^%d" % key)


def _assoc_side(F: FormalGroupLaw, left: bool):
    """Trivariate expansion of F(F(x,y), z) (left) or F(x, F(y,z)) (right)."""
    p, prec = F.p, F.prec
    inner = F.coeffs  # reused as the inner law; variables tracked by placement
    powers = {0: {(0, 0): 1}}
    out = {}
    max_i = max((i if left else j) for (i, j) in F.coeffs)
    cur = {(0, 0): 1}
    for e in range(1, max_i + 1):
        cur = _mul(cur, inner, prec, p)
        powers[e] = cur
    for (i, j), c in F.coeffs.items():
        a, b = (i, j) if left else (j, i)
        # 'a' powers of the inner bivariate, 'b' copies of the free variable
        for (u, v), w in powers[a].items():
            if u + v + b > prec:
                continue
            key = (u, v, b) if left else (b, u, v)
            val = (out.get(key, 0) + c * w) % p
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def fgl_additive(p: int, prec: int) -> FormalGroupLaw:
    """F = x + y; the axioms hold exactly."""
    _check_pp(p, prec)
    return FormalGroupLaw(p, prec, {(1, 0): 1, (0, 1): 1})


def fgl_multiplicative(p: int, prec: int) -> FormalGroupLaw:
    """F = x + y + xy; the p-series is x^p by the freshman's dream."""
    _check_pp(p, prec)
    coeffs = {(1, 0): 1, (0, 1): 1}
    if prec >= 2:
        coeffs[(1, 1)] = 1
    return FormalGroupLaw(p, prec, coeffs)


def _check_pp(p, prec):
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    if prec < 1:
        raise ValueError("prec must be at least 1")


def fgl_lubin_tate(p: int, h: int, prec: int) -> FormalGroupLaw:
    """The height-h law whose multiplication-by-p series is p*x + x^(p^h).

    Built from the logarithm l(x) = sum over i of x^(q^i)/p^i (q = p^h) via the
    fixed-point equation F = l(x) + l(y) - sum over i >= 1 of F^(q^i)/p^i, with
    exact rational coefficients; every coefficient of the fixed point is
    p-integral and is reduced mod p at the end.
    """
    _check_pp(p, prec)
    if h < 1:
        raise ValueError("height must be at least 1")
    q = p ** h
    if prec < q + 1:
        raise ValueError("prec %d too small to certify height %d (need >= %d)" % (prec, h, q + 1))
    tail = []  # (q^i, 1/p^i) for i >= 1 with q^i <= prec
    qi, pi = q, p
    while qi <= prec:
        tail.append((qi, Fraction(1, pi)))
        qi *= q
        pi *= p
    S = {(1, 0): Fraction(1), (0, 1): Fraction(1)}
    for deg, coef in tail:
        S[(deg, 0)] = coef
        S[(0, deg)] = coef
    F = dict(S)
    good = q - 1
    while good < prec:
        work = min(prec, good + q - 1)
        nxt = {k: v for k, v in S.items() if sum(k) <= work}
        for deg, coef in tail:
            if deg > work:
                break
            nxt = _add(nxt, _scale(_pow(F, deg, work, None), -coef))
        F = _clean(nxt)
        good = work
    coeffs = {}
    for key, val in F.items():
        if val.denominator % p == 0:
            raise InvariantViolation("non-p-integral coefficient %r at %r" % (val, key))
        c = val.numerator * pow(val.denominator, -1, p) % p
        if c:
            coeffs[key] = c
    law = FormalGroupLaw(p, prec, coeffs)
    if n_series(law, p) != {q: 1}:
        raise InvariantViolation("p-series of the height-%d construction is not x^%d" % (h, q))
    return law


# -- series of the law ---------------------------------------------------------


def n_series(F: FormalGroupLaw, n: int) -> dict:
    """The series [n](x): [0] = 0 and [n+1](x) = F([n](x), x), truncated."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    u = {}
    for _ in range(n):
        u = _compose_with_x(F, u)
    return u


def _compose_with_x(F: FormalGroupLaw, u: dict) -> dict:
    """F(u(x), x) for a univariate u with u(0) = 0."""
    p, prec = F.p, F.prec
    out = {}
    upow = {0: {0: 1}}
    max_i = max(i for (i, j) in F.coeffs)
    cur = {0: 1}
    for e in range(1, max_i + 1):
        nxt = {}
        for da, va in cur.items():
            for db, vb in u.items():
                if da + db > prec:
                    continue
                nxt[da + db] = (nxt.get(da + db, 0) + va * vb) % p
        cur = _clean(nxt)
        upow[e] = cur
    for (i, j), c in F.coeffs.items():
        for d, v in upow[i].items():
            if d + j > prec:
                continue
            key = d + j
            w = (out.get(key, 0) + c * v) % p
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return out


def height_from_p_series(pseries: dict, p: int):
    """Height read off a multiplication-by-p series mod p."""
    if not pseries:
        return INFINITE_HEIGHT
    d = min(pseries)
    h = 0
    while d % p == 0:
        d //= p
        h += 1
    if d != 1:
        raise InvariantViolation(
            "lowest nonzero degree %d of the p-series is not a power of %d" % (min(pseries), p)
        )
    return h


def height(F: FormalGroupLaw):
    """Integer height h (p-series lowest term of degree p^h), or
    "infinite-to-precision" when the p-series vanishes to precision."""
    return height_from_p_series(n_series(F, F.p), F.p)


# -- torsion on truncated points -------------------------------------------------


@dataclass(frozen=True)
class TorsionReport:
    n: int
    num_points: int
    n_coprime_to_p: bool
    bijective: bool  # [n] is a bijection of the points (meaningful when p does not divide n)
    kernel_size: int  # number of points killed by [n]
    p_kernel_size: int  # number of points killed by [p]
    height: object  # int or "infinite-to-precision"
    valuation_checked: int  # points where the valuation law applied
    valuation_ok: object  # bool, or None when the height is not finite


def _ring_mul(a, b, m):
    fld = a[0].ctx
    out = [fld.zero()] * m
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            if i + j >= m:
                break
            if not bj.is_zero():
                out[i + j] = out[i + j] + ai * bj
    return tuple(out)


def _ring_eval(series: dict, pt, fld: FieldCtx, m: int):
    """Evaluate a mod-p series at a point of t*F_q[t]/(t^m)."""
    acc = (fld.zero(),) * m
    cur = (fld.one(),) + (fld.zero(),) * (m - 1)
    last = 0
    for d in sorted(k for k in series if k < m):
        for _ in range(d - last):
            cur = _ring_mul(cur, pt, m)
        last = d
        c = series[d] % fld.p
        if c:
            acc = tuple(x + y * c for x, y in zip(acc, cur))
    return acc


def torsion_analysis(F: FormalGroupLaw, fld: FieldCtx, m: int, n: int, cap=None) -> TorsionReport:
    """Exhaustively evaluate [n] and [p] on every point of t*F_q[t]/(t^m).

    Reports bijectivity of [n] (expected exactly when p does not divide n),
    the kernels of [n] and [p], and the valuation law ord([p](x)) =
    p^height * ord(x) wherever that stays below the truncation order.
    """
    if m < 2:
        raise ValueError("ring truncation order must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    if F.prec < m - 1:
        raise ValueError("law precision %d too small for truncation order %d" % (F.prec, m))
    if fld.p != F.p:
        raise ValueError("field characteristic does not match the law")
    num = fld.q ** (m - 1)
    limit = resolve_cap(cap)
    if num > limit:
        raise GuardExceeded("ring has %d points, over the cap %d" % (num, limit))

    elems = list(fld.elements())
    points = [ (fld.zero(),) + tail for tail in itertools.product(elems, repeat=m - 1) ]

    sn = n_series(F, n)
    sp = n_series(F, F.p)
    h = height_from_p_series(sp, F.p)

    zero_pt = (fld.zero(),) * m
    images = [_ring_eval(sn, pt, fld, m) for pt in points]
    bijective = len(set(images)) == num
    kernel_size = sum(1 for img in images if img == zero_pt)

    p_images = [_ring_eval(sp, pt, fld, m) for pt in points]
    p_kernel = sum(1 for img in p_images if img == zero_pt)

    checked = 0
    val_ok = None
    if isinstance(h, int):
        val_ok = True
        ph = F.p ** h
        for pt, img in zip(points, p_images):
            ordt = next((i for i, c in enumerate(pt) if not c.is_zero()), None)
            if ordt is None or ph * ordt >= m:
                continue
            checked += 1
            img_ord = next((i for i, c in enumerate(img) if not c.is_zero()), None)
            if img_ord != ph * ordt:
                val_ok = False
    return TorsionReport(
        n=n,
        num_points=num,
        n_coprime_to_p=n % F.p != 0,
        bijective=bijective,
        kernel_size=kernel_size,
        p_kernel_size=p_kernel,
        height=h,
        valuation_checked=checked,
        valuation_ok=val_ok,
    )
