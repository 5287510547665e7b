"""Exception types shared across the package."""

from __future__ import annotations


class TreeGroupError(Exception):
    """Base class for errors raised by this package."""


class EnumerationCapExceeded(TreeGroupError):
    """An enumeration grew past the configured element cap.

    Operations that need a full element listing fail loudly instead of
    silently truncating, since a partial closure would corrupt every
    structural verdict computed from it.
    """

    def __init__(self, cap: int, reached: int | None = None, hint: str | None = None):
        self.cap = cap
        self.reached = reached
        msg = f"enumeration cap of {cap} elements exceeded"
        if reached is not None:
            msg += f" (reached {reached})"
        if hint:
            msg += f"; {hint}"
        super().__init__(msg)


class VerificationError(TreeGroupError):
    """A verification run found a counterexample to an asserted equivalence.

    On a correct build this is never raised; it exists so that a check
    failure can never masquerade as a clean exit.
    """
