"""Two-layer identity-based signatures for authenticating 5G base stations.

Modules: ``group`` (ristretto255, toy and counting backends), ``hashing``,
``scheme`` (setup / extract / sign / verify), ``robust`` (split key
generation with sequence numbers), ``protocol`` (the 111-byte SIB1 record),
``sim`` (attack simulator) and ``bench`` (microbenchmarks).
"""

from .errors import (
    ConfigurationError,
    DecodeError,
    E2IBSError,
    KeyExpiredError,
    MalformedInputError,
    NonceReuseError,
    ParameterError,
    RejectedExtractionError,
)
from .group import RISTRETTO255, CountingGroup, Ristretto255, ToyGroup
from .scheme import (
    DEFAULT_K,
    DEFAULT_T,
    MasterPublicKey,
    Signature,
    UserKey,
    extract,
    precompute_nonce,
    security_bits,
    setup,
    sign,
    verify,
)

__version__ = "0.1.0"
