"""SIB1 broadcast authentication for 5G base stations.

Wire layout of the 111-byte authentication record appended to SIB1
(multi-byte integers big-endian, scalars little-endian)::

    [0, 64)    signature s || h
    [64, 73)   base-station identity: NRCell_ID (36 bits) || expiry (32 bits) || 0000
    [73, 105)  base-station commitment C (public key)
    [105, 109) t_sign, low 32 bits of Unix time in milliseconds
    [109, 111) dt, validity window in milliseconds

The signed message is ``MIB || SIB1 || t_sign || dt`` so the freshness fields
cannot be rewritten in flight.
"""

import enum
import threading
from dataclasses import dataclass

from . import scheme
from .errors import ConfigurationError, DecodeError, KeyExpiredError, MalformedInputError
from .group import ELEMENT_SIZE, RISTRETTO255
from .scheme import MasterPublicKey, Signature

IDENTITY_SIZE = 9
PAYLOAD_SIZE = 111
DEFAULT_KEY_VALIDITY_S = 600
DEFAULT_ANCHOR_VALIDITY_S = 365 * 24 * 3600
DEFAULT_SKEW_MS = 50

NRCELL_BITS = 36
ANCHOR_MAGIC = b"E2IBSTRST"

_U32 = 2**32


@dataclass(frozen=True)
class BsIdentity:
    nrcell_id: int
    expiry: int  # Unix seconds

    def __post_init__(self):
        if not 0 <= self.nrcell_id < 2**NRCELL_BITS:
            raise ConfigurationError(f"NRCell_ID must fit in {NRCELL_BITS} bits")
        if not 0 <= self.expiry < _U32:
            raise ConfigurationError("expiry must fit in 32 bits")

    def pack(self):
        return pack_identity(self)


def pack_identity(ident):
    value = (ident.nrcell_id << 36) | (ident.expiry << 4)
    return value.to_bytes(IDENTITY_SIZE, "big")


def unpack_identity(data):
    if len(data) != IDENTITY_SIZE:
        raise MalformedInputError(f"identity must be {IDENTITY_SIZE} bytes")
    value = int.from_bytes(data, "big")
    if value & 0xF:
        raise MalformedInputError("identity padding bits must be zero")
    return BsIdentity(value >> 36, (value >> 4) & (_U32 - 1))


def make_identity(nrcell_id, now, validity_seconds=DEFAULT_KEY_VALIDITY_S):
    """Identity for a key issued at ``now`` (Unix seconds)."""
    if validity_seconds <= 0:
        raise ConfigurationError("key expiry must lie after the issue time")
    return BsIdentity(nrcell_id, now + validity_seconds)


def issue_bs_key(master, nrcell_id, now, validity_seconds=DEFAULT_KEY_VALIDITY_S):
    """PKG side: build U_BS = NRCell_ID || expiry and extract its key."""
    ident = make_identity(nrcell_id, now, validity_seconds)
    return scheme.extract(master, ident.pack()), ident


def signed_message(mib, sib1, t_sign, dt):
    return bytes(mib) + bytes(sib1) + t_sign.to_bytes(4, "big") + dt.to_bytes(2, "big")


@dataclass(frozen=True)
class Sib1AuthPayload:
    sig: Signature
    identity: BsIdentity
    pk_bs: bytes
    t_sign: int
    dt: int

    def to_bytes(self):
        out = (self.sig.to_bytes() + self.identity.pack() + bytes(self.pk_bs)
               + self.t_sign.to_bytes(4, "big") + self.dt.to_bytes(2, "big"))
        assert len(out) == PAYLOAD_SIZE
        return out

    @classmethod
    def from_bytes(cls, data, group=RISTRETTO255):
        """Parse and validate encodings; MalformedInputError on any defect."""
        data = bytes(data)
        if len(data) != PAYLOAD_SIZE:
            raise MalformedInputError(f"payload must be {PAYLOAD_SIZE} bytes, got {len(data)}")
        sig = Signature.from_bytes(data[:64], group)
        ident = unpack_identity(data[64:73])
        pk_bs = data[73:105]
        group.decode(pk_bs)
        return cls(sig, ident, pk_bs, int.from_bytes(data[105:109], "big"),
                   int.from_bytes(data[109:111], "big"))


def build_payload(mib, sib1, key, identity, nonce, t_sign, dt):
    """Sign MIB || SIB1 at ``t_sign`` (Unix ms) valid for ``dt`` ms."""
    if key.identity != identity.pack():
        raise ConfigurationError("key was not issued for this identity")
    if t_sign > identity.expiry * 1000:
        raise KeyExpiredError("base-station key expired before signing time")
    if not 0 <= dt < 2**16:
        raise ConfigurationError("dt must fit in 16 bits")
    t32 = t_sign % _U32
    sig = scheme.sign(signed_message(mib, sib1, t32, dt), key, nonce)
    return Sib1AuthPayload(sig, identity, key.commitment_bytes, t32, dt)


def full_timestamp(t32, now):
    """The Unix-ms value with low 32 bits ``t32`` closest to ``now``."""
    delta = (t32 - now) % _U32
    if delta >= _U32 // 2:
        delta -= _U32
    return now + delta


class Reason(str, enum.Enum):
    MALFORMED = "malformed"
    ANCHOR_EXPIRED = "anchor-expired"
    KEY_EXPIRED = "key-expired"
    STALE = "stale"
    BAD_SIGNATURE = "bad-signature"
    UNTRUSTED_OPERATOR = "untrusted-operator"


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: Reason = None

    def __str__(self):
        return "accepted" if self.accepted else f"rejected({self.reason.value})"


ACCEPTED = Verdict(True)


def _reject(reason):
    return Verdict(False, reason)


@dataclass(frozen=True)
class TrustAnchor:
    operator_id: bytes
    mpk: MasterPublicKey
    mpk_expiry: int  # Unix seconds

    def to_bytes(self):
        op = bytes(self.operator_id)
        if len(op) > 255:
            raise ConfigurationError("operator id too long")
        return (ANCHOR_MAGIC + bytes([len(op)]) + op + self.mpk.to_bytes()
                + self.mpk_expiry.to_bytes(4, "big"))

    @classmethod
    def from_bytes(cls, data, group=RISTRETTO255):
        data = bytes(data)
        n = len(ANCHOR_MAGIC)
        if data[:n] != ANCHOR_MAGIC or len(data) < n + 1:
            raise DecodeError("missing trust anchor header")
        oplen = data[n]
        op = data[n + 1:n + 1 + oplen]
        if len(op) != oplen:
            raise DecodeError("truncated operator id")
        rest = data[n + 1 + oplen:]
        if len(rest) < 20:
            raise DecodeError("truncated trust anchor")
        t = int.from_bytes(rest[8:12], "big")
        mpk_len = 16 + t * ELEMENT_SIZE
        if len(rest) != mpk_len + 4:
            raise DecodeError("trust anchor length mismatch")
        mpk = MasterPublicKey.from_bytes(rest[:mpk_len], group)
        return cls(op, mpk, int.from_bytes(rest[mpk_len:], "big"))


class TrustStore:
    """Per-operator master public keys as installed on the UE.

    Also holds the current key sequence number per cell, published by the
    PKG, for cells whose keys are issued with sequence numbers.
    """

    def __init__(self, anchors=()):
        self._lock = threading.Lock()
        self._anchors = {}
        self._seqs = {}
        for a in anchors:
            self.add_anchor(a)

    def add_anchor(self, anchor):
        with self._lock:
            if anchor.operator_id in self._anchors:
                raise ConfigurationError(f"operator {anchor.operator_id!r} already trusted")
            self._anchors[anchor.operator_id] = anchor

    def rotate(self, anchor):
        with self._lock:
            self._anchors[anchor.operator_id] = anchor

    def lookup(self, operator_id):
        return self._anchors.get(operator_id)

    def set_seq(self, operator_id, nrcell_id, seq):
        with self._lock:
            self._seqs[(operator_id, nrcell_id)] = seq

    def seq_for(self, operator_id, nrcell_id):
        return self._seqs.get((operator_id, nrcell_id))

    def __contains__(self, operator_id):
        return operator_id in self._anchors

    def __len__(self):
        return len(self._anchors)


def verify_payload(payload, mib, sib1, anchors, operator_id, now, skew=DEFAULT_SKEW_MS):
    """UE-side check of a SIB1 authentication record at time ``now`` (Unix ms).

    Checks run in a fixed order and the first failure decides the reason:
    parse, trust anchor, key expiry, freshness, signature. Never raises on
    attacker-controlled bytes.
    """
    anchor = anchors.lookup(operator_id)
    group = anchor.mpk.params.group if anchor is not None else RISTRETTO255
    if not isinstance(payload, Sib1AuthPayload):
        try:
            payload = Sib1AuthPayload.from_bytes(payload, group)
        except (MalformedInputError, TypeError, ValueError):
            return _reject(Reason.MALFORMED)

    if anchor is None:
        return _reject(Reason.UNTRUSTED_OPERATOR)
    if now > anchor.mpk_expiry * 1000:
        return _reject(Reason.ANCHOR_EXPIRED)

    ident = payload.identity
    if now > ident.expiry * 1000:
        return _reject(Reason.KEY_EXPIRED)

    t_sign = full_timestamp(payload.t_sign, now)
    if not t_sign - skew <= now < t_sign + payload.dt + skew:
        return _reject(Reason.STALE)

    msg = signed_message(mib, sib1, payload.t_sign, payload.dt)
    seq = anchors.seq_for(operator_id, ident.nrcell_id)
    if not scheme.verify(msg, payload.sig, ident.pack(), payload.pk_bs, anchor.mpk, seq):
        return _reject(Reason.BAD_SIGNATURE)
    return ACCEPTED
