"""Exception types shared across the package.

Plain ``ValueError`` is used for domain errors (bad arguments) and
``OverflowError`` for explicit 64-bit scale guards; only the two
categories below need their own classes.
"""


class ResourceLimitError(RuntimeError):
    """An input exceeds a deliberate memory/scale guard (not a math error)."""


class IntegrityError(ArithmeticError):
    """An exact division left a remainder where integrality is a theorem.

    This is a finding, not an input error: it means either the
    implementation or the theorem it encodes is wrong, and it must never
    be confused with a malformed-argument failure.
    """
