"""Shared error types and the enumeration work cap.

Exit-code mapping used by the CLI: bad arguments raise ValueError (exit 2),
blown work budgets raise GuardExceeded (exit 3), and violated structural
expectations raise InvariantViolation (exit 4).
"""

import os

DEFAULT_ENUMERATION_CAP = 10_000_000
CAP_ENV_VAR = "SSK3_ENUM_CAP"


class GuardExceeded(RuntimeError):
    """A desk-scale work budget was exceeded before the computation finished."""


class InvariantViolation(RuntimeError):
    """A structural expectation failed; the offending data is in the message."""


def resolve_cap(explicit=None) -> int:
    """Pick the enumeration cap: explicit argument, then env var, then default."""
    if explicit is not None:
        cap = int(explicit)
    elif CAP_ENV_VAR in os.environ:
        cap = int(os.environ[CAP_ENV_VAR])
    else:
        cap = DEFAULT_ENUMERATION_CAP
    if cap <= 0:
        raise ValueError("enumeration cap must be positive")
    return cap


class WorkBudget:
    """Counts candidates examined during an enumeration, raising past the cap."""

    __slots__ = ("limit", "spent")

    def __init__(self, limit: int):
        self.limit = limit
        self.spent = 0

    def spend(self, amount: int = 1):
        self.spent += amount
        if self.spent > self.limit:
            raise GuardExceeded(
                "enumeration cap exceeded: %d candidates (cap %d); "
                "raise it via the cap argument or %s" % (self.spent, self.limit, CAP_ENV_VAR)
            )
