"""Nondegenerate symmetric bilinear spaces over GF(p) and their extensions.

Subspaces are kept in reduced row echelon form, so equal subspaces have
identical basis matrices and lists of subspaces have a canonical order:
lexicographic by pivot pattern, then by basis entry codes.

Totally isotropic subspaces are enumerated per Grassmann pivot cell.  Within
a cell the rows of an RREF basis have a fixed support, the orthogonality
conditions against earlier rows are linear, and the isotropy condition is a
single quadratic equation whose last coordinate is solved by the quadratic
formula (odd characteristic).  This visits a number of candidates close to
the number of solutions instead of scanning every r-subspace, which keeps
moduli computations over fields like GF(5^4) at desk scale.
"""

import itertools
from dataclasses import dataclass, field as dc_field

from .errors import WorkBudget, resolve_cap
from .fields import FieldCtx, FieldElement, embed, make_field, sqrt


@dataclass(frozen=True)
class BilinearSpace:
    """GF(p)-space with a nondegenerate symmetric Gram matrix (integer entries mod p)."""

    base: FieldCtx
    dim: int
    gram: tuple  # dim x dim tuple of tuples of ints in [0, p)

    def __post_init__(self):
        if self.base.m != 1:
            raise ValueError("bilinear spaces are defined over prime fields")
        g = self.gram
        if len(g) != self.dim or any(len(row) != self.dim for row in g):
            raise ValueError("Gram matrix shape does not match dim")
        p = self.base.p
        if any(g[i][j] % p != g[j][i] % p for i in range(self.dim) for j in range(self.dim)):
            raise ValueError("Gram matrix must be symmetric")
        if self.dim and _det_mod_p(g, p) == 0:
            raise ValueError("bilinear form must be nondegenerate mod %d" % p)

    def inner(self, u, v) -> FieldElement:
        """<u, v> for rows of field elements over any extension of the base."""
        fld = u[0].ctx if u else v[0].ctx
        acc = fld.zero()
        g = self.gram
        for i, ui in enumerate(u):
            if ui.is_zero():
                continue
            row = g[i]
            t = fld.zero()
            for j, vj in enumerate(v):
                c = row[j]
                if c and not vj.is_zero():
                    t = t + vj * c
            acc = acc + ui * t
        return acc

    def quad(self, v) -> FieldElement:
        return self.inner(v, v)


def _det_mod_p(g, p) -> int:
    a = [[x % p for x in row] for row in g]
    n = len(a)
    detv = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            detv = -detv
        detv = detv * a[k][k] % p
        inv = pow(a[k][k], p - 2, p)
        for i in range(k + 1, n):
            c = a[i][k] * inv % p
            if c:
                for j in range(k, n):
                    a[i][j] = (a[i][j] - c * a[k][j]) % p
    return detv % p


# -- row reduction over a field ----------------------------------------------


def rref(rows, fld: FieldCtx):
    """Reduced row echelon form; returns (rows as tuples, pivot columns)."""
    work = [list(r) for r in rows]
    pivots = []
    r = 0
    width = len(work[0]) if work else 0
    for c in range(width):
        piv = None
        for i in range(r, len(work)):
            if not work[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = work[r][c].inverse()
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and not work[i][c].is_zero():
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r]), tuple(pivots)


def _nullspace(rows, width, fld: FieldCtx):
    """Basis of {x : rows * x = 0}, canonical up to the later RREF pass."""
    red, pivots = rref(rows, fld)
    pivset = set(pivots)
    free = [c for c in range(width) if c not in pivset]
    out = []
    zero, one = fld.zero(), fld.one()
    for f in free:
        vec = [zero] * width
        vec[f] = one
        for rowi, pc in enumerate(pivots):
            vec[pc] = -red[rowi][f]
        out.append(tuple(vec))
    return out


@dataclass(frozen=True)
class Subspace:
    """Subspace of space x extension field, basis in canonical RREF."""

    space: BilinearSpace
    field: FieldCtx
    basis: tuple  # RREF rows, tuple of tuples of FieldElement

    @classmethod
    def span(cls, space: BilinearSpace, fld: FieldCtx, rows) -> "Subspace":
        if fld.p != space.base.p:
            raise ValueError("field characteristic does not match the space")
        for row in rows:
            if len(row) != space.dim:
                raise ValueError("row length %d does not match dim %d" % (len(row), space.dim))
            for e in row:
                if e.ctx != fld:
                    raise ValueError("basis entries must live in %r" % (fld,))
        red, _ = rref(rows, fld)
        return cls(space, fld, red)

    @classmethod
    def zero(cls, space: BilinearSpace, fld: FieldCtx) -> "Subspace":
        return cls(space, fld, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple:
        out = []
        for row in self.basis:
            for c, e in enumerate(row):
                if not e.is_zero():
                    out.append(c)
                    break
        return tuple(out)

    def codes(self) -> tuple:
        return tuple(tuple(e.code for e in row) for row in self.basis)

    def sort_key(self):
        return (self.pivots, self.codes())

    def contains(self, vector) -> bool:
        vec = list(vector)
        for row in self.basis:
            pc = next(c for c, e in enumerate(row) if not e.is_zero())
            if not vec[pc].is_zero():
                f = vec[pc]
                vec = [a - f * b for a, b in zip(vec, row)]
        return all(e.is_zero() for e in vec)

    def __le__(self, other) -> bool:
        return all(other.contains(row) for row in self.basis)


def is_totally_isotropic(K: Subspace) -> bool:
    rows = K.basis
    sp = K.space
    for i in range(len(rows)):
        for j in range(i, len(rows)):
            if not sp.inner(rows[i], rows[j]).is_zero():
                return False
    return True


# -- constructors -------------------------------------------------------------


def smallest_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod an odd prime."""
    residues = {pow(x, 2, p) for x in range(1, p)}
    for d in range(2, p):
        if d not in residues:
            return d
    raise ValueError("no non-residue mod %d (is p prime?)" % p)


def standard_N0(p: int, sigma0: int) -> BilinearSpace:
    """The 2*sigma0-dimensional space H^(sigma0-1) + diag(1, -delta) over GF(p),
    delta the smallest non-residue: nondegenerate with Witt index sigma0 - 1."""
    if not 1 <= sigma0 <= 10:
        raise ValueError("Artin invariant must lie in [1, 10]")
    base = make_field(p, 1)
    delta = smallest_nonresidue(p)
    dim = 2 * sigma0
    rows = [[0] * dim for _ in range(dim)]
    for k in range(sigma0 - 1):
        rows[2 * k][2 * k + 1] = 1
        rows[2 * k + 1][2 * k] = 1
    rows[dim - 2][dim - 2] = 1
    rows[dim - 1][dim - 1] = (-delta) % p
    return BilinearSpace(base, dim, tuple(tuple(r) for r in rows))


# -- totally isotropic enumeration --------------------------------------------


def _cell_rows(space, fld, pivots, budget, collect, first_only=False):
    """DFS over RREF bases with the given pivot columns, isotropy solved per row."""
    d = space.dim
    pivset = set(pivots)
    r = len(pivots)
    zero, one = fld.zero(), fld.one()
    gram_f = [[fld.from_int(space.gram[i][j]) for j in range(d)] for i in range(d)]
    all_elems = list(fld.elements())

    def build_row(t, xs, cols):
        row = [zero] * d
        row[pivots[t]] = one
        for val, c in zip(xs, cols):
            row[c] = val
        return tuple(row)

    def quad_roots(alpha, beta, gamma):
        # alpha z^2 + beta z + gamma = 0, odd characteristic
        if alpha.is_zero():
            if beta.is_zero():
                return all_elems if gamma.is_zero() else []
            return [-gamma / beta]
        disc = beta * beta - 4 * alpha * gamma
        s = sqrt(disc)
        if s is None:
            return []
        inv = (2 * alpha).inverse()
        roots = {((-beta + s) * inv).code: (-beta + s) * inv,
                 ((-beta - s) * inv).code: (-beta - s) * inv}
        return [roots[c] for c in sorted(roots)]

    def place(t, rows):
        if t == r:
            collect(tuple(rows))
            return not first_only
        cols = [c for c in range(pivots[t] + 1, d) if c not in pivset]
        k = len(cols)
        base_row = build_row(t, [zero] * k, cols)
        # x-space quadratic data: Q(base + sum x_i e_cols[i])
        m_mat = [[gram_f[cols[i]][cols[j]] for j in range(k)] for i in range(k)]
        beta_vec = [space.inner(base_row, _unit(fld, d, cols[i])) for i in range(k)]
        gamma0 = space.quad(base_row)
        # linear constraints from earlier rows
        lin = []
        for s_row in rows:
            coeffs = [space.inner(s_row, _unit(fld, d, c)) for c in cols]
            rhs = -space.inner(s_row, base_row)
            lin.append(coeffs + [rhs])
        sol = _affine_solve(lin, k, fld)
        if sol is None:
            return True
        x0, null = sol
        if not null:
            budget.spend()
            if _xquad(x0, m_mat, beta_vec, gamma0, fld).is_zero():
                row = build_row(t, x0, cols)
                if not place(t + 1, rows + [row]):
                    return False
            return True
        last = null[-1]
        alpha = _xbil(last, last, m_mat, fld)
        for prefix in itertools.product(all_elems, repeat=len(null) - 1):
            budget.spend()
            u = list(x0)
            for coef, vec in zip(prefix, null[:-1]):
                for i in range(k):
                    u[i] = u[i] + coef * vec[i]
            beta = 2 * _xbil(u, last, m_mat, fld) + 2 * _xdot(beta_vec, last, fld)
            gamma = _xquad(u, m_mat, beta_vec, gamma0, fld)
            for z in quad_roots(alpha, beta, gamma):
                xs = [ui + z * li for ui, li in zip(u, last)]
                row = build_row(t, xs, cols)
                if not place(t + 1, rows + [row]):
                    return False
        return True

    place(0, [])


def _unit(fld, d, i):
    row = [fld.zero()] * d
    row[i] = fld.one()
    return tuple(row)


def _xdot(a, b, fld):
    acc = fld.zero()
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def _xbil(a, b, m_mat, fld):
    acc = fld.zero()
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        t = fld.zero()
        for j, bj in enumerate(b):
            if not bj.is_zero():
                t = t + m_mat[i][j] * bj
        acc = acc + ai * t
    return acc


def _xquad(x, m_mat, beta_vec, gamma0, fld):
    return _xbil(x, x, m_mat, fld) + 2 * _xdot(beta_vec, x, fld) + gamma0


def _affine_solve(aug_rows, k, fld):
    """Solve the affine system given as [coeffs | rhs] rows over k unknowns.

    Returns (particular, null_basis) or None when inconsistent.  Both parts are
    canonical: free variables are set to zero, and the null basis comes from
    the RREF free columns in ascending order.
    """
    if not aug_rows:
        zero = fld.zero()
        particular = [zero] * k
        null = [list(_unit(fld, k, i)) for i in range(k)]
        return particular, [list(v) for v in null]
    red, pivots = rref(aug_rows, fld)
    if k in pivots:
        return None  # a row reduced to 0 = 1
    zero = fld.zero()
    particular = [zero] * k
    for rowi, pc in enumerate(pivots):
        particular[pc] = red[rowi][k]
    pivset = set(pivots)
    null = []
    for f in range(k):
        if f in pivset:
            continue
        vec = [zero] * k
        vec[f] = fld.one()
        for rowi, pc in enumerate(pivots):
            vec[pc] = -red[rowi][f]
        null.append(vec)
    return particular, null


def enumerate_totally_isotropic(space: BilinearSpace, fld: FieldCtx, r: int, cap=None):
    """All r-dimensional totally isotropic subspaces of space x fld, each in
    canonical RREF, ordered lexicographically by pivot pattern then entries."""
    _check_extension(space, fld)
    if not 0 <= r <= space.dim:
        raise ValueError("r must lie in [0, %d]" % space.dim)
    if r == 0:
        return [Subspace.zero(space, fld)]
    budget = WorkBudget(resolve_cap(cap))
    results = []
    for pivots in itertools.combinations(range(space.dim), r):
        cell = []
        _cell_rows(space, fld, pivots, budget, cell.append)
        cell_subs = [Subspace(space, fld, rows) for rows in cell]
        cell_subs.sort(key=Subspace.sort_key)
        results.extend(cell_subs)
    return results


def exists_totally_isotropic(space: BilinearSpace, fld: FieldCtx, r: int, cap=None) -> bool:
    _check_extension(space, fld)
    if r == 0:
        return True
    if r > space.dim:
        return False
    budget = WorkBudget(resolve_cap(cap))
    found = []
    for pivots in itertools.combinations(range(space.dim), r):
        _cell_rows(space, fld, pivots, budget, found.append, first_only=True)
        if found:
            return True
    return False


def _check_extension(space, fld):
    if fld.p != space.base.p:
        raise ValueError("field %r does not extend %r" % (fld, space.base))


def witt_index(space: BilinearSpace, fld: FieldCtx, cap=None) -> int:
    """Maximal dimension of a totally isotropic subspace (brute-force search)."""
    _check_extension(space, fld)
    r = 0
    while r < space.dim // 2 and exists_totally_isotropic(space, fld, r + 1, cap):
        r += 1
    return r


def is_neutral(space: BilinearSpace, fld: FieldCtx, cap=None) -> bool:
    return space.dim % 2 == 0 and witt_index(space, fld, cap) == space.dim // 2


# -- subspace calculus ---------------------------------------------------------


def _require_compatible(K1: Subspace, K2: Subspace):
    if K1.space != K2.space or K1.field != K2.field:
        raise ValueError("subspaces live in different ambient spaces or fields")


def sum_subspaces(K1: Subspace, K2: Subspace) -> Subspace:
    _require_compatible(K1, K2)
    return Subspace.span(K1.space, K1.field, list(K1.basis) + list(K2.basis))


def intersect_subspaces(K1: Subspace, K2: Subspace) -> Subspace:
    """Zassenhaus: row reduce [B1|B1; B2|0]; right blocks of rows whose left
    block vanished span the intersection."""
    _require_compatible(K1, K2)
    d = K1.space.dim
    fld = K1.field
    zero_row = (fld.zero(),) * d
    stacked = [row + row for row in K1.basis] + [row + zero_row for row in K2.basis]
    if not stacked:
        return Subspace.zero(K1.space, fld)
    red, _ = rref(stacked, fld)
    inter_rows = [row[d:] for row in red if all(e.is_zero() for e in row[:d])]
    return Subspace.span(K1.space, fld, inter_rows)


def orthogonal_complement(K: Subspace) -> Subspace:
    """All vectors of the ambient space pairing to zero with K."""
    d = K.space.dim
    fld = K.field
    if K.dim == 0:
        rows = [_unit(fld, d, i) for i in range(d)]
        return Subspace.span(K.space, fld, rows)
    sys_rows = []
    for u in K.basis:
        sys_rows.append(tuple(K.space.inner(u, _unit(fld, d, c)) for c in range(d)))
    return Subspace.span(K.space, fld, _nullspace(sys_rows, d, fld))


def extend_field(K: Subspace, bigger: FieldCtx) -> Subspace:
    """Lift the basis through the canonical embedding of K.field into bigger."""
    if bigger == K.field:
        return K
    rows = [tuple(embed(e, bigger) for e in row) for row in K.basis]
    return Subspace.span(K.space, bigger, rows)
