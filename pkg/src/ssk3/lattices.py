"""Even integer lattices presented by Gram matrices.

Covers the hyperbolic plane U, its twist U(p), the rank-2 lattice U' with
Gram [[-2,1],[1,0]], discriminants and Artin invariants, a bounded search
for hyperbolic vector pairs, and the GF(p)-space p*dual/p*lattice carrying
the form <x,y>/p (computed through an exact Smith normal form with explicit
unimodular transforms).
"""

import itertools
from dataclasses import dataclass

from .errors import GuardExceeded, InvariantViolation, resolve_cap
from .fields import is_prime, make_field
from .quadratic_spaces import BilinearSpace


@dataclass(frozen=True)
class GramLattice:
    """Even nondegenerate integer lattice given by its symmetric Gram matrix."""

    gram: tuple  # tuple of tuples of ints

    def __post_init__(self):
        g = self.gram
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square and nonempty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(n)):
            raise ValueError("lattice must be even (diagonal entries divisible by 2)")
        if det(g) == 0:
            raise ValueError("Gram matrix must be nondegenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def inner(self, u, v) -> int:
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(len(g)) for j in range(len(g)))


def _as_gram(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


def det(mat) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    a = [list(row) for row in mat]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def make_U() -> GramLattice:
    return GramLattice(_as_gram([[0, 1], [1, 0]]))


def make_U_prime() -> GramLattice:
    return GramLattice(_as_gram([[-2, 1], [1, 0]]))


def twist(L: GramLattice, s: int) -> GramLattice:
    """Scale the bilinear form by a nonzero integer s."""
    if s == 0:
        raise ValueError("twist scale must be nonzero")
    return GramLattice(tuple(tuple(s * x for x in row) for row in L.gram))


def direct_sum(L1: GramLattice, L2: GramLattice) -> GramLattice:
    n1, n2 = L1.rank, L2.rank
    rows = []
    for i in range(n1):
        rows.append(tuple(L1.gram[i]) + (0,) * n2)
    for i in range(n2):
        rows.append((0,) * n1 + tuple(L2.gram[i]))
    return GramLattice(tuple(rows))


def discriminant(L: GramLattice) -> int:
    return det(L.gram)


def artin_invariant_from_disc(d: int, p: int) -> int:
    """Recover sigma0 from a discriminant of the shape -p^(2*sigma0)."""
    if not is_prime(p):
        raise ValueError("p = %r is not prime" % (p,))
    if d >= 0:
        raise ValueError("discriminant %d is not negative" % d)
    n = -d
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise ValueError("discriminant %d is not minus a power of %d" % (d, p))
    if e % 2:
        raise ValueError("discriminant exponent %d is odd" % e)
    sigma0 = e // 2
    if not 1 <= sigma0 <= 10:
        raise ValueError("Artin invariant %d outside [1, 10]" % sigma0)
    return sigma0


def find_hyperbolic_pair(L: GramLattice, bound: int = 3, cap=None):
    """Search integer vectors E, Z with E.E=0, Z.Z=-2, E.Z=1, coefficients in
    [-bound, bound].  Returns (E, Z) or None; None means "not found within the
    bound", never a proof that no embedding exists."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    n = L.rank
    limit = resolve_cap(cap)
    if (2 * bound + 1) ** n > limit:
        raise GuardExceeded("coefficient box (2*%d+1)^%d exceeds cap %d" % (bound, n, limit))
    isotropic = []
    minus_two = []
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(v):
            continue
        q = L.inner(v, v)
        if q == 0:
            isotropic.append(v)
        elif q == -2:
            minus_two.append(v)
    if len(isotropic) * len(minus_two) > limit:
        raise GuardExceeded("candidate pair count exceeds cap %d" % limit)
    for e in isotropic:
        for z in minus_two:
            if L.inner(e, z) == 1:
                return e, z
    return None


def smith_normal_form(mat):
    """Smith normal form with transforms: returns (D, U, V) with U*A*V = D,
    U and V unimodular, and the diagonal of D a nonnegative divisibility chain."""
    a = [list(row) for row in mat]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(dst, src, c):  # row dst -= c * row src
        for j in range(n):
            a[dst][j] -= c * a[src][j]
            u[dst][j] -= c * u[src][j]

    def col_op(dst, src, c):  # col dst -= c * col src
        for i in range(n):
            a[i][dst] -= c * a[i][src]
            v[i][dst] -= c * v[i][src]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
            v[r][i], v[r][j] = v[r][j], v[r][i]

    for t in range(n):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            pivot = None
            for i in range(t, n):
                for j in range(t, n):
                    if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot != (t, t):
                if pivot[0] != t:
                    row_swap(t, pivot[0])
                if pivot[1] != t:
                    col_swap(t, pivot[1])
            dirty = False
            for i in range(t + 1, n):
                q = a[i][t] // a[t][t]
                if q:
                    row_op(i, t, q)
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                if q:
                    col_op(j, t, q)
                if a[t][j]:
                    dirty = True
            if dirty:
                continue
            # enforce divisibility of the trailing block by the pivot
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, -1)  # add offending row, then reduce again
        if t < n and a[t][t] < 0:
            for j in range(n):
                a[t][j] = -a[t][j]
                u[t][j] = -u[t][j]
    to_t = lambda m: tuple(tuple(r) for r in m)
    return to_t(a), to_t(u), to_t(v)


def disc_kernel_space(L: GramLattice, p: int) -> BilinearSpace:
    """The GF(p)-space p*dual/p*lattice with the perfect form <x,y>/p mod p.

    Requires the dual quotient to be p-elementary: every elementary divisor of
    the Gram matrix must be 1 or p.  The dimension equals the number of
    elementary divisors equal to p (2*sigma0 for a supersingular K3 lattice).
    """
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    d, _, v = smith_normal_form(L.gram)
    n = L.rank
    divisors = [d[i][i] for i in range(n)]
    bad = [x for x in divisors if x not in (1, p)]
    if bad:
        raise ValueError(
            "lattice is not %d-elementary: elementary divisors %r" % (p, sorted(set(divisors)))
        )
    picked = [j for j in range(n) if divisors[j] == p]
    base = make_field(p, 1)
    if not picked:
        return BilinearSpace(base, 0, ())
    # basis vectors of the quotient: columns of V at the p-divisor positions
    vecs = [tuple(v[i][j] for i in range(n)) for j in picked]
    gram0 = []
    for x in vecs:
        row = []
        for y in vecs:
            val = L.inner(x, y)
            if val % p:
                raise InvariantViolation(
                    "form not divisible by %d on the discriminant kernel of %r" % (p, L)
                )
            row.append((val // p) % p)
        gram0.append(tuple(row))
    return BilinearSpace(base, len(picked), tuple(gram0))
