class ChtgError(Exception):
    """Base class for all errors raised by the triangle group toolkit."""


class ModulusMismatchError(ChtgError, ValueError):
    """Two cyclotomic elements live in different fields and were not unified."""


class DivisibilityError(ChtgError, ValueError):
    """A modulus does not divide the target modulus."""


class NotAUnitError(ChtgError, ValueError):
    """An exponent is not a unit modulo the cyclotomic modulus."""


class SignatureError(ChtgError, ValueError):
    """The Gram matrix does not have signature (2,1)."""
