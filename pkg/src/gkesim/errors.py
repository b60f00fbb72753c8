"""Exception types shared across the package."""


class GkesimError(Exception):
    """Base class for all errors raised by this package."""


# -- group parameter and field arithmetic errors --------------------------

class NotPrimeError(GkesimError):
    """A value required to be prime failed the primality test."""


class OrderMismatchError(GkesimError):
    """q does not divide p - 1."""


class BadGeneratorError(GkesimError):
    """g is out of range or does not generate the order-q subgroup."""


class BadModulusError(GkesimError):
    """Modulus smaller than 2."""


class DuplicateAbscissaError(GkesimError):
    """Two interpolation points share an x-coordinate."""


class EmptyPointSetError(GkesimError):
    """Interpolation requested on an empty point set."""


class TooManyPointsError(GkesimError):
    """Point set exceeds the configured interpolation limit."""


# -- PKI errors ------------------------------------------------------------

class ZeroIdentifierError(GkesimError):
    """Member identifier 0 is reserved for the session key abscissa."""


class DuplicateIdentifierError(GkesimError):
    """Two members registered with the same identifier."""


# -- protocol errors -------------------------------------------------------

class CertificateInvalidError(GkesimError):
    """A certificate failed verification against the CA key."""


class DuplicateRecipientError(GkesimError):
    """The same recipient listed twice in one broadcast."""


class EmptyGroupError(GkesimError):
    """A broadcast needs at least one recipient."""


# -- adversary errors -------------------------------------------------------

class MissingLeakedKeyError(GkesimError):
    """Replay forgery requires the compromised session key."""


class NotAMemberError(GkesimError):
    """Share recovery attempted by a caller outside the recipient group."""


class DlogNotFoundError(GkesimError):
    """No exponent below the scan limit maps to the target element."""


class ParamsTooLargeError(GkesimError):
    """Brute-force discrete log is restricted to toy-sized groups."""


class KeyRecoveryMismatchError(GkesimError):
    """Recovered key does not match the broadcast commitment."""


# -- harness errors ---------------------------------------------------------

class ScenarioInvalidError(GkesimError):
    """Scenario configuration inconsistent with the community."""
