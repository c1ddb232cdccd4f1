"""Shared exception types."""

from __future__ import annotations


class MultirankError(Exception):
    """Base class for all library errors."""


class BudgetError(MultirankError):
    """An enumeration would exceed its hard budget gate.

    Carries the offending exponent so callers (and the CLI) can report
    exactly which gate fired and by how much.
    """

    def __init__(self, what: str, bits: float, limit_bits: float, hint: str = ""):
        self.what = what
        self.bits = bits
        self.limit_bits = limit_bits
        self.hint = hint
        msg = f"{what}: needs 2^{bits:.2f} work units, gate is 2^{limit_bits:g}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class InputError(MultirankError):
    """Malformed input file or configuration."""
