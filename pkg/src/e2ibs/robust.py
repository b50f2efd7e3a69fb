"""Split key generation with PKG-side blinding and sequence numbers.

The user picks ``u1`` and sends ``Q = u1 * P``. The PKG answers with
``z = sum(z_j) + u2`` over indices bound to ``C = Q + u2 * P`` and a
sequence number. The final key ``x = u1 + z`` is never known to the PKG, and
bumping the sequence number moves the indices, which silently invalidates
keys issued under older numbers.
"""

from dataclasses import dataclass, field

from .errors import DecodeError, RejectedExtractionError
from .group import ELEMENT_SIZE, RISTRETTO255, SCALAR_SIZE
from .hashing import h1_indices, identity_label, prf
from .scheme import UserKey

EXTRACTION_SIZE = SCALAR_SIZE + 2 * ELEMENT_SIZE + 8


@dataclass(frozen=True)
class UserSecretShare:
    u1: int = field(repr=False)
    Q: object
    group: object = field(default=RISTRETTO255, repr=False, compare=False)


@dataclass(frozen=True)
class PkgExtraction:
    z: int = field(repr=False)
    B: object
    C: object
    seq: int

    def to_bytes(self, group=RISTRETTO255):
        """z (32, little-endian) || B (32) || C (32) || seq (8, big-endian)."""
        return (group.encode_scalar(self.z) + group.encode(self.B)
                + group.encode(self.C) + self.seq.to_bytes(8, "big"))

    @classmethod
    def from_bytes(cls, data, group=RISTRETTO255):
        if len(data) != EXTRACTION_SIZE:
            raise DecodeError(f"extraction record must be {EXTRACTION_SIZE} bytes")
        z = group.decode_scalar(data[:32])
        B = group.decode(data[32:64])
        C = group.decode(data[64:96])
        return cls(z, B, C, int.from_bytes(data[96:104], "big"))


def user_keygen(group=RISTRETTO255, rng=None):
    u1 = group.random_scalar(rng)
    return UserSecretShare(u1, group.base_mul(u1), group)


def extract_blind(master, identity, Q, seq=0):
    """PKG side: derive z for ``identity`` bound to the user's share ``Q``.

    ``Q`` may be an element or its 32-byte encoding (DecodeError if invalid).
    """
    group = master.group
    if isinstance(Q, (bytes, bytearray)):
        Q = group.decode(bytes(Q))
    identity = bytes(identity)
    u2 = prf(master.msk, identity_label(identity), group)
    B = group.base_mul(u2)
    C = group.add(Q, B)
    p = master.params
    z = u2
    for j in h1_indices(identity, group.encode(C), seq, t=p.t, k=p.k):
        z = group.scalar_add(z, master.z(j))
    return PkgExtraction(z, B, C, seq)


def verify_extraction(ext, share, identity, mpk):
    """User side: check z*P = sum(Z[j]) + B and C = Q + B."""
    group = mpk.params.group
    p = mpk.params
    if group.add(share.Q, ext.B) != ext.C:
        return False
    idx = h1_indices(bytes(identity), group.encode(ext.C), ext.seq, t=p.t, k=p.k)
    expected = group.add(group.sum(mpk[j] for j in idx), ext.B)
    return group.base_mul(ext.z) == expected


def complete_key(share, ext, identity, mpk):
    """Combine the user's share with a checked PKG response into a signing key."""
    if not verify_extraction(ext, share, identity, mpk):
        raise RejectedExtractionError("PKG response does not match the key equation")
    group = mpk.params.group
    x = group.scalar_add(share.u1, ext.z)
    return UserKey(bytes(identity), x, ext.C, ext.seq, group)
