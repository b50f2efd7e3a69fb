"""Two-layer identity-based Schnorr-type signatures.

A PKG holds a master scalar ``msk`` and publishes ``t`` points
``Z_i = z_i * P`` with ``z_i = PRF(msk, i)``. A user key for identity ``U``
is ``x = z_{j_1} + ... + z_{j_k} + u`` where ``u = PRF(msk, U)``, the
commitment is ``C = u * P`` and the indices ``j`` are ``H1(U, C)``. Anyone
holding the master public key can then rebuild ``x * P`` from
``(U, C)`` with k point additions and verify plain Schnorr-style signatures
under it.

Indices run over ``[0, t)`` and master element ``i`` is derived from PRF
label ``index_label(i)``.
"""

from dataclasses import dataclass, field
from math import lgamma, log

from .errors import (
    ConfigurationError,
    DecodeError,
    MalformedInputError,
    NonceReuseError,
    ParameterError,
)
from .group import ELEMENT_SIZE, RISTRETTO255, SCALAR_SIZE
from .hashing import (
    h1_indices,
    h2_challenge,
    identity_label,
    index_label,
    is_power_of_two,
    prf,
)

DEFAULT_T = 1024
DEFAULT_K = 18
# log2 C(1024, 18) is about 127.3, so a 128-bit floor would reject the
# standard parameters. The computed figure is kept on Params instead.
DEFAULT_KAPPA = 127

SIGNATURE_SIZE = 2 * SCALAR_SIZE
MPK_MAGIC = b"E2IBSMPK"


def security_bits(t, k):
    """log2 of C(t, k), the k-combinatorial security level of (t, k)."""
    if not 1 <= k <= t:
        raise ConfigurationError(f"need 1 <= k <= t, got t={t}, k={k}")
    return (lgamma(t + 1) - lgamma(k + 1) - lgamma(t - k + 1)) / log(2)


@dataclass(frozen=True)
class Params:
    t: int
    k: int
    group: object = field(default=RISTRETTO255, repr=False, compare=False)
    security_bits: float = field(init=False)

    def __post_init__(self):
        if not is_power_of_two(self.t):
            raise ConfigurationError(f"t must be a power of two, got {self.t}")
        object.__setattr__(self, "security_bits", security_bits(self.t, self.k))


@dataclass(frozen=True)
class MasterPublicKey:
    params: Params
    elements: tuple

    def __post_init__(self):
        if len(self.elements) != self.params.t:
            raise ConfigurationError("master public key must hold t elements")

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def to_bytes(self):
        enc = self.params.group.encode
        head = MPK_MAGIC + self.params.t.to_bytes(4, "big") + self.params.k.to_bytes(4, "big")
        return head + b"".join(enc(Z) for Z in self.elements)

    @classmethod
    def from_bytes(cls, data, group=RISTRETTO255):
        data = bytes(data)
        if len(data) < 16 or data[:8] != MPK_MAGIC:
            raise DecodeError("missing master public key header")
        t = int.from_bytes(data[8:12], "big")
        k = int.from_bytes(data[12:16], "big")
        if len(data) != 16 + t * ELEMENT_SIZE:
            raise DecodeError("master public key length does not match t")
        try:
            params = Params(t, k, group)
        except ConfigurationError as exc:
            raise DecodeError(str(exc)) from exc
        elements = tuple(
            group.decode(data[off:off + ELEMENT_SIZE])
            for off in range(16, len(data), ELEMENT_SIZE)
        )
        return cls(params, elements)


@dataclass(eq=False)
class MasterKeyMaterial:
    msk: int = field(repr=False)
    mpk: MasterPublicKey
    z_cache: tuple = field(default=None, repr=False)

    @property
    def params(self):
        return self.mpk.params

    @property
    def group(self):
        return self.mpk.params.group

    def z(self, i):
        if self.z_cache is not None:
            return self.z_cache[i]
        return prf(self.msk, index_label(i), self.group)

    def enable_cache(self):
        """Keep all t secret z_i in memory (t * 32 bytes) for faster extraction."""
        if self.z_cache is None:
            self.z_cache = tuple(self.z(i) for i in range(self.params.t))
        return self


@dataclass(frozen=True)
class UserKey:
    identity: bytes
    x: int = field(repr=False)
    commitment: object
    seq: int = None
    group: object = field(default=RISTRETTO255, repr=False, compare=False)

    @property
    def commitment_bytes(self):
        return self.group.encode(self.commitment)


@dataclass(frozen=True)
class Signature:
    s: int
    h: int

    def to_bytes(self):
        return self.s.to_bytes(SCALAR_SIZE, "little") + self.h.to_bytes(SCALAR_SIZE, "little")

    @classmethod
    def from_bytes(cls, data, group=RISTRETTO255):
        if len(data) != SIGNATURE_SIZE:
            raise DecodeError(f"signature must be {SIGNATURE_SIZE} bytes")
        return cls(group.decode_scalar(data[:SCALAR_SIZE]), group.decode_scalar(data[SCALAR_SIZE:]))


@dataclass(eq=False)
class NoncePacket:
    """Offline half of a signature. Hand each packet to exactly one sign()."""

    r: int = field(repr=False)
    R: object
    R_bytes: bytes
    consumed: bool = False


def setup(t=DEFAULT_T, k=DEFAULT_K, *, group=RISTRETTO255, rng=None,
          kappa=DEFAULT_KAPPA, cache=False):
    """Generate PKG master key material.

    Raises ParameterError if log2 C(t, k) < kappa; pass ``kappa=0`` for toy
    parameters.
    """
    params = Params(t, k, group)
    if params.security_bits < kappa:
        raise ParameterError(
            f"(t={t}, k={k}) gives {params.security_bits:.2f} bits < {kappa}"
        )
    msk = group.random_scalar(rng)
    z = [prf(msk, index_label(i), group) for i in range(t)]
    mpk = MasterPublicKey(params, tuple(group.base_mul(zi) for zi in z))
    return MasterKeyMaterial(msk, mpk, tuple(z) if cache else None)


def indices_for(identity, commitment_bytes, params, seq=None):
    return h1_indices(identity, commitment_bytes, seq, t=params.t, k=params.k)


def extract(master, identity, seq=None):
    """Derive the signing key for ``identity`` (one scalar multiplication)."""
    if not identity:
        raise MalformedInputError("identity must be non-empty")
    identity = bytes(identity)
    group = master.group
    u = prf(master.msk, identity_label(identity), group)
    C = group.base_mul(u)
    x = u
    for j in indices_for(identity, group.encode(C), master.params, seq):
        x = group.scalar_add(x, master.z(j))
    return UserKey(identity, x, C, seq, group)


def public_key_point(identity, commitment, mpk, seq=None):
    """Rebuild x*P = sum(Z[j]) + C from public data (k point additions)."""
    group = mpk.params.group
    idx = indices_for(identity, group.encode(commitment), mpk.params, seq)
    return group.add(group.sum(mpk[j] for j in idx), commitment)


def key_equation_holds(key, mpk):
    group = mpk.params.group
    return group.base_mul(key.x) == public_key_point(key.identity, key.commitment, mpk, key.seq)


def precompute_nonce(group=RISTRETTO255, rng=None):
    r = group.random_scalar(rng)
    R = group.base_mul(r)
    return NoncePacket(r, R, group.encode(R))


def sign(message, key, nonce=None, *, rng=None):
    """Sign ``message``. With a precomputed nonce this does no point arithmetic."""
    group = key.group
    if nonce is None:
        nonce = precompute_nonce(group, rng)
    if nonce.consumed:
        raise NonceReuseError("nonce packet already used")
    nonce.consumed = True
    h = h2_challenge(message, nonce.R_bytes, group)
    s = group.scalar_sub(nonce.r, group.scalar_mul(h, key.x))
    return Signature(s, h)


def nonce_commitment(sig, identity, commitment, mpk, seq=None):
    """R' = s*P + h*(sum(Z[j]) + C); equals r*P for an honest signature."""
    group = mpk.params.group
    X = public_key_point(identity, commitment, mpk, seq)
    return group.add(group.base_mul(sig.s), group.mul(sig.h, X))


def verify(message, sig, identity, commitment, mpk, seq=None):
    """Return True iff ``sig`` is valid. Never raises on malformed input.

    ``sig`` may be a Signature or its 64-byte encoding, ``commitment`` an
    element or its 32-byte encoding.
    """
    group = mpk.params.group
    try:
        if not isinstance(sig, Signature):
            sig = Signature.from_bytes(bytes(sig), group)
        elif not (0 <= sig.s < group.order and 0 <= sig.h < group.order):
            return False
        if isinstance(commitment, (bytes, bytearray, memoryview)):
            commitment = group.decode(bytes(commitment))
        if not identity:
            return False
        R = nonce_commitment(sig, bytes(identity), commitment, mpk, seq)
    except (DecodeError, MalformedInputError, TypeError, ValueError):
        return False
    return sig.h == h2_challenge(message, group.encode(R), group)
