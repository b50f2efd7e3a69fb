"""PRF, index hash and challenge hash, all built on SHAKE256.

Each role absorbs its own ASCII domain tag first (``PRF_TAG``, ``H1_TAG``,
``H2_TAG``), then every input as an 8-byte big-endian length followed by the
bytes, so distinct roles or distinct input tuples never share a preimage.
The tags are part of the stable format.
"""

import hashlib

from .errors import ConfigurationError, MalformedInputError

PRF_TAG = b"E2IBS-PRF"
H1_TAG = b"E2IBS-H1"
H2_TAG = b"E2IBS-H2"

_WIDE = 64


def _xof(tag, *parts):
    h = hashlib.shake_256()
    h.update(len(tag).to_bytes(1, "big") + tag)
    for part in parts:
        h.update(len(part).to_bytes(8, "big"))
        h.update(part)
    return h


def index_label(i):
    """PRF label for the i-th master key element."""
    return b"idx:" + i.to_bytes(8, "big")


def identity_label(identity):
    """PRF label for a user identity; cannot collide with an index label."""
    return b"id:" + bytes(identity)


def prf(key, label, group):
    """Keyed pseudo-random function into the scalar field of ``group``.

    ``key`` is a scalar (the master secret).
    """
    if not label:
        raise MalformedInputError("PRF label must be non-empty")
    digest = _xof(PRF_TAG, group.encode_scalar(key), bytes(label)).digest(_WIDE)
    return group.scalar_from_wide_bytes(digest)


def is_power_of_two(n):
    return n > 0 and n & (n - 1) == 0


def h1_indices(identity, commitment, seq=None, *, t, k):
    """Map (identity, encoded commitment[, seq]) to k indices in [0, t).

    The digest is read as k consecutive log2(t)-bit big-endian chunks.
    Repeated indices are kept.
    """
    if not is_power_of_two(t):
        raise ConfigurationError(f"t must be a power of two, got {t}")
    if k < 1:
        raise ConfigurationError(f"k must be positive, got {k}")
    if seq is None:
        id_part = b"\x00" + bytes(identity)
    else:
        if not 0 <= seq < 2**64:
            raise ConfigurationError("sequence number must fit in 64 bits")
        id_part = b"\x01" + bytes(identity) + seq.to_bytes(8, "big")
    width = t.bit_length() - 1
    nbits = k * width
    nbytes = (nbits + 7) // 8
    digest = _xof(H1_TAG, id_part, bytes(commitment)).digest(max(nbytes, 1))
    acc = int.from_bytes(digest, "big") >> (8 * nbytes - nbits)
    mask = t - 1
    return tuple((acc >> (width * (k - 1 - i))) & mask for i in range(k))


def h2_challenge(message, R, group):
    """Challenge scalar for (message, encoded nonce commitment R)."""
    digest = _xof(H2_TAG, bytes(message), bytes(R)).digest(_WIDE)
    return group.scalar_from_wide_bytes(digest)
