class E2IBSError(Exception):
    pass


class MalformedInputError(E2IBSError, ValueError):
    pass


class DecodeError(MalformedInputError):
    """Bytes that are not the canonical encoding of a group element or scalar."""


class ConfigurationError(E2IBSError, ValueError):
    pass


class ParameterError(ConfigurationError):
    """(t, k) too weak for the requested security level."""


class NonceReuseError(E2IBSError):
    """A precomputed nonce was handed to sign() twice."""


class RejectedExtractionError(E2IBSError):
    """PKG extraction response failed the user-side key check."""


class KeyExpiredError(E2IBSError):
    pass
