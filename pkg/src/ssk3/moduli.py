"""The P^1-bundle structure on moduli of rigidified K3 crystals, in the
characteristic-subspace model.

Starting from the 2*sigma0-dimensional space N0, the plus space appends a
hyperbolic pair (D, E).  The section sends K to K + <D>; the projection
gamma_plus intersects with the hyperplane pairing to zero against E and
projects back to N0.  The explicit fiber over a base point K0 consists of
<K0, E> together with one point

    < k_1, ..., k_(sigma0-1), v + lam*E, v - lam*phi(v) + D + lam*E >

per scalar lam, where the k_i span K0 meet phi(K0) and v is normalized so that
<v, phi(v)> = 1.  Over a non-closed field the normalizer may only exist after
a field extension; fiber_formula extends minimally and reports it.

Isogeny height bookkeeping (closed forms in the Artin invariants) lives here
as well.
"""

from dataclasses import dataclass

from .errors import InvariantViolation
from .fields import FieldCtx, FieldElement, embed, frobenius, make_field, solve_p_plus_1_root
from .quadratic_spaces import (
    BilinearSpace,
    Subspace,
    extend_field,
    intersect_subspaces,
    standard_N0,
)
from .crystals import (
    CharacteristicSubspace,
    as_characteristic,
    enumerate_characteristic,
    phi,
)


@dataclass(frozen=True)
class PlusSpace:
    """N0 orthogonally extended by a hyperbolic plane spanned by D and E."""

    base_space: BilinearSpace
    full_space: BilinearSpace
    D_index: int
    E_index: int

    @property
    def sigma0(self) -> int:
        return self.base_space.dim // 2


def build_plus_space(V: BilinearSpace) -> PlusSpace:
    """Append the hyperbolic (D, E)-plane: dimension 2*sigma0 + 2."""
    if V.dim % 2 or V.dim == 0:
        raise ValueError("base space must have positive even dimension")
    d = V.dim
    rows = [list(r) + [0, 0] for r in V.gram]
    rows.append([0] * d + [0, 1])
    rows.append([0] * d + [1, 0])
    full = BilinearSpace(V.base, d + 2, tuple(tuple(r) for r in rows))
    return PlusSpace(V, full, d, d + 1)


def _lift_rows(P: PlusSpace, rows, fld):
    zero = fld.zero()
    return [tuple(row) + (zero, zero) for row in rows]


def _unit_row(fld, d, i):
    row = [fld.zero()] * d
    row[i] = fld.one()
    return tuple(row)


def sigma_section(K: CharacteristicSubspace, P: PlusSpace) -> CharacteristicSubspace:
    """The section K -> K + <D>; characteristic for sigma0 + 1 in the plus space."""
    if K.subspace.space != P.base_space:
        raise ValueError("K does not live in the base space of this plus space")
    fld = K.field
    rows = _lift_rows(P, K.subspace.basis, fld)
    rows.append(_unit_row(fld, P.full_space.dim, P.D_index))
    sub = Subspace.span(P.full_space, fld, rows)
    return as_characteristic(sub, P.sigma0 + 1, "section output not characteristic")


def _e_perp(P: PlusSpace, fld) -> Subspace:
    # <x, E> equals the D-coordinate, so E-perp is a coordinate hyperplane
    d = P.full_space.dim
    rows = [_unit_row(fld, d, i) for i in range(d) if i != P.D_index]
    return Subspace.span(P.full_space, fld, rows)


def gamma_plus(Kp: CharacteristicSubspace, P: PlusSpace) -> CharacteristicSubspace:
    """Intersect with E-perp and project to the base coordinates."""
    if Kp.subspace.space != P.full_space:
        raise ValueError("K+ does not live in the plus space")
    fld = Kp.field
    inter = intersect_subspaces(Kp.subspace, _e_perp(P, fld))
    base_rows = [row[: P.base_space.dim] for row in inter.basis]
    sub = Subspace.span(P.base_space, fld, base_rows)
    return as_characteristic(sub, P.sigma0, "projection output not characteristic")


def fiber_enumerate(K0: CharacteristicSubspace, P: PlusSpace, fld: FieldCtx, cap=None):
    """Brute-force fiber: all characteristic subspaces of the plus space over
    fld that project to K0 under gamma_plus."""
    if K0.field != fld:
        raise ValueError("K0 must be given over the requested field")
    out = []
    for Kp in enumerate_characteristic(P.full_space, fld, P.sigma0 + 1, cap):
        if gamma_plus(Kp, P).subspace == K0.subspace:
            out.append(Kp)
    return out


@dataclass(frozen=True)
class FiberPoint:
    kind: str  # "section_at_infinity" | "affine"
    lam: object  # FieldElement for affine points, None at infinity
    subspace: CharacteristicSubspace


@dataclass(frozen=True)
class FiberDescription:
    points: tuple
    field: FieldCtx
    extended: bool  # True when normalization forced a field extension


def fiber_formula(K0: CharacteristicSubspace, P: PlusSpace, fld: FieldCtx, cap=None) -> FiberDescription:
    """Closed-form fiber over K0: the section-at-infinity point <K0, E> plus one
    affine point per scalar of the working field.

    The complement vector v is the first RREF basis vector of K0 outside
    K0 meet phi(K0); it is rescaled so that <v, phi(v)> = 1, extending the field
    minimally when the rescaling constant only exists in an extension (the
    returned description reports the working field).  Every output is checked
    to be characteristic and to project back to K0.
    """
    if K0.field != fld:
        raise ValueError("K0 must be given over the requested field")
    if K0.subspace.space != P.base_space:
        raise ValueError("K0 does not live in the base space of this plus space")
    sigma0 = P.sigma0
    space = P.base_space

    kappa = intersect_subspaces(K0.subspace, phi(K0.subspace))
    if kappa.dim != sigma0 - 1:
        raise InvariantViolation(
            "dim(K0 /\\ phi K0) = %d, expected %d (basis %r)"
            % (kappa.dim, sigma0 - 1, K0.subspace.codes())
        )
    v = None
    for row in K0.subspace.basis:
        if not kappa.contains(row):
            v = row
            break
    if v is None:
        raise InvariantViolation("no complement vector outside K0 /\\ phi K0")
    pairing = space.inner(v, tuple(frobenius(e) for e in v))
    if pairing.is_zero():
        raise InvariantViolation(
            "<v, phi v> = 0 for the canonical v of %r over %r" % (K0.subspace.codes(), fld)
        )
    c, ext = solve_p_plus_1_root(pairing.inverse(), cap)
    extended = ext != fld

    K0_w = K0 if not extended else CharacteristicSubspace(extend_field(K0.subspace, ext), sigma0)
    kappa_rows = [tuple(embed(e, ext) for e in row) for row in kappa.basis] if extended else list(kappa.basis)
    v_w = tuple(embed(e, ext) for e in v) if extended else v
    v_w = tuple(c * e for e in v_w)
    phi_v = tuple(frobenius(e) for e in v_w)
    check = space.inner(v_w, phi_v)
    if check != ext.one():
        raise InvariantViolation("normalization failed: <v, phi v> = %r" % (check,))

    dfull = P.full_space.dim
    D_row = _unit_row(ext, dfull, P.D_index)
    E_row = _unit_row(ext, dfull, P.E_index)
    kappa_lifted = _lift_rows(P, kappa_rows, ext)
    v_lifted = _lift_rows(P, [v_w], ext)[0]
    phi_v_lifted = _lift_rows(P, [phi_v], ext)[0]
    K0_lifted = _lift_rows(P, K0_w.subspace.basis, ext)

    def vadd(*rows):
        out = list(rows[0])
        for r in rows[1:]:
            out = [a + b for a, b in zip(out, r)]
        return tuple(out)

    def vscale(s, row):
        return tuple(s * e for e in row)

    points = []
    inf_sub = Subspace.span(P.full_space, ext, K0_lifted + [E_row])
    points.append(FiberPoint(
        "section_at_infinity", None,
        as_characteristic(inf_sub, sigma0 + 1, "infinity point not characteristic"),
    ))
    for lam in ext.elements():
        row1 = vadd(v_lifted, vscale(lam, E_row))
        row2 = vadd(v_lifted, vscale(-lam, phi_v_lifted), D_row, vscale(lam, E_row))
        sub = Subspace.span(P.full_space, ext, kappa_lifted + [row1, row2])
        cp = as_characteristic(sub, sigma0 + 1, "affine fiber point not characteristic")
        points.append(FiberPoint("affine", lam, cp))
    for pt in points:
        back = gamma_plus(pt.subspace, P)
        if back.subspace != K0_w.subspace:
            raise InvariantViolation(
                "fiber point does not project to its base point (lam=%r)" % (pt.lam,)
            )
    return FiberDescription(tuple(points), ext, extended)


# -- point counting -------------------------------------------------------------


def count_points(p: int, sigma0: int, n: int, cap=None) -> int:
    """Number of characteristic subspaces of the standard N0 over GF(p^n)."""
    if n < 1:
        raise ValueError("extension degree must be at least 1")
    fld = make_field(p, n)
    V = standard_N0(p, sigma0)
    return len(enumerate_characteristic(V, fld, sigma0, cap))


def tower_prediction(p: int, sigma0: int, n: int) -> int:
    """Point count of an iterated P^1-bundle over GF(p^2): zero for odd n and
    2*(p^n + 1)^(sigma0 - 1) for even n.  A derived consistency law, validated
    against brute force; not an assumption."""
    if not 1 <= sigma0 <= 10:
        raise ValueError("Artin invariant must lie in [1, 10]")
    if n < 1:
        raise ValueError("extension degree must be at least 1")
    if n % 2:
        return 0
    return 2 * (p ** n + 1) ** (sigma0 - 1)


# -- isogeny height bookkeeping ---------------------------------------------------


def _check_sigma0(s, name="sigma0"):
    if not 1 <= s <= 10:
        raise ValueError("%s = %r outside [1, 10]" % (name, s))


def isogeny_height(sigma0: int, sigma0_prime: int) -> int:
    """Height of the purely inseparable isogenies between supersingular K3
    surfaces with the given Artin invariants: 2*sigma0 + 2*sigma0' - 4."""
    _check_sigma0(sigma0)
    _check_sigma0(sigma0_prime, "sigma0_prime")
    return 2 * sigma0 + 2 * sigma0_prime - 4


def kummer_height(sigma0: int) -> int:
    """Height of the purely inseparable isogeny to the Kummer surface:
    2*sigma0 - 2 (zero at sigma0 = 1, which is the Kummer surface itself)."""
    _check_sigma0(sigma0)
    return 2 * sigma0 - 2


def corollary_step(sigma0: int):
    """One Artin-invariant-decrementing step: (sigma0 - 1, height 2)."""
    _check_sigma0(sigma0)
    if sigma0 < 2:
        raise ValueError("decrement step needs sigma0 >= 2")
    return sigma0 - 1, 2
