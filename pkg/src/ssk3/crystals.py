"""Characteristic subspaces: the field-valued model of supersingular K3 crystals.

phi is the coordinatewise p-power map on subspaces of N0 x k, well defined
because the ambient basis is GF(p)-rational.  A subspace K of a 2*sigma0
dimensional space is characteristic when it is totally isotropic of dimension
sigma0 and K + phi(K) has dimension sigma0 + 1; it is strictly characteristic
when the iterates of phi span everything.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import InvariantViolation
from .fields import FieldCtx, frobenius
from .quadratic_spaces import (
    BilinearSpace,
    Subspace,
    enumerate_totally_isotropic,
    is_totally_isotropic,
    sum_subspaces,
)


def phi(K: Subspace) -> Subspace:
    """Span of the row-wise coordinatewise p-th powers of K's basis."""
    rows = [tuple(frobenius(e) for e in row) for row in K.basis]
    return Subspace.span(K.space, K.field, rows)


def is_characteristic(K: Subspace, sigma0: int) -> bool:
    """True iff dim K = sigma0, K is totally isotropic, and dim(K + phi K) = sigma0 + 1."""
    if K.space.dim != 2 * sigma0:
        raise ValueError(
            "ambient dimension %d does not equal 2*sigma0 = %d" % (K.space.dim, 2 * sigma0)
        )
    if K.dim != sigma0:
        return False
    if not is_totally_isotropic(K):
        return False
    return sum_subspaces(K, phi(K)).dim == sigma0 + 1


def is_strictly_characteristic(K: Subspace, sigma0: int) -> bool:
    """True iff the chain K, K + phi K, ... stabilizes at the full space.

    The chain must stabilize within 2*sigma0 steps for dimension reasons, so
    the iteration is cut off there.
    """
    if not is_characteristic(K, sigma0):
        raise ValueError("precondition violated: K is not characteristic")
    chain = K
    for _ in range(2 * sigma0):
        grown = sum_subspaces(chain, phi(chain))
        if grown.dim == chain.dim:
            break
        chain = grown
    return chain.dim == 2 * sigma0


@dataclass(frozen=True)
class CharacteristicSubspace:
    """A validated characteristic subspace; the point of the moduli space."""

    subspace: Subspace
    sigma0: int

    def __post_init__(self):
        if not is_characteristic(self.subspace, self.sigma0):
            raise ValueError("subspace is not characteristic for sigma0 = %d" % self.sigma0)

    @cached_property
    def strict(self) -> bool:
        return is_strictly_characteristic(self.subspace, self.sigma0)

    @property
    def field(self) -> FieldCtx:
        return self.subspace.field


def as_characteristic(sub: Subspace, sigma0: int, context: str) -> CharacteristicSubspace:
    """Wrap a subspace that is structurally required to be characteristic."""
    try:
        return CharacteristicSubspace(sub, sigma0)
    except ValueError as exc:
        raise InvariantViolation("%s: %s (basis %r)" % (context, exc, sub.codes()))


def enumerate_characteristic(space: BilinearSpace, fld: FieldCtx, sigma0: int, cap=None):
    """All characteristic subspaces of space x fld, in the canonical order of
    the totally isotropic enumeration."""
    if space.dim != 2 * sigma0:
        raise ValueError("space dimension %d does not equal 2*sigma0" % space.dim)
    out = []
    for K in enumerate_totally_isotropic(space, fld, sigma0, cap):
        if sum_subspaces(K, phi(K)).dim == sigma0 + 1:
            out.append(CharacteristicSubspace(K, sigma0))
    return out
