"""Prime-order groups used by the scheme.

Three interchangeable backends share one duck-typed interface:

* ``Ristretto255`` -- the production group (prime order ~2^252, 32-byte
  canonical encodings, ~128-bit security).
* ``ToyGroup`` -- the additive group Z_p with a small prime p, where every
  identity can be checked by hand or by brute force.
* ``CountingGroup`` -- wraps either of the above and counts operations.

Scalars are plain ints in ``[0, order)``. Scalars serialize as 32-byte
little-endian strings (``SCALAR_BYTE_ORDER``), group elements as 32 bytes.
"""

import secrets
from dataclasses import dataclass

from . import _ristretto
from .errors import DecodeError, MalformedInputError

SCALAR_BYTE_ORDER = "little"
SCALAR_SIZE = 32
ELEMENT_SIZE = 32
WIDE_SIZE = 64


def _random_bytes(rng, n):
    if rng is None:
        return secrets.token_bytes(n)
    return rng.randbytes(n)


class _ScalarField:
    """Scalar arithmetic mod ``order``, shared by all backends."""

    order: int

    def scalar_from_wide_bytes(self, data):
        if len(data) != WIDE_SIZE:
            raise MalformedInputError(f"expected {WIDE_SIZE} bytes, got {len(data)}")
        return int.from_bytes(data, SCALAR_BYTE_ORDER) % self.order

    def random_scalar(self, rng=None):
        return self.scalar_from_wide_bytes(_random_bytes(rng, WIDE_SIZE))

    def encode_scalar(self, k):
        return (k % self.order).to_bytes(SCALAR_SIZE, SCALAR_BYTE_ORDER)

    def decode_scalar(self, data):
        if len(data) != SCALAR_SIZE:
            raise DecodeError(f"scalar must be {SCALAR_SIZE} bytes")
        k = int.from_bytes(data, SCALAR_BYTE_ORDER)
        if k >= self.order:
            raise DecodeError("non-canonical scalar")
        return k

    def scalar_add(self, a, b):
        return (a + b) % self.order

    def scalar_sub(self, a, b):
        return (a - b) % self.order

    def scalar_mul(self, a, b):
        return a * b % self.order

    def sum(self, elements):
        elements = list(elements)
        if not elements:
            return self.identity
        acc = elements[0]
        for x in elements[1:]:
            acc = self.add(acc, x)
        return acc


class RistrettoPoint:
    """An element of ristretto255; compares by group equality."""

    __slots__ = ("_pt", "_enc")

    def __init__(self, pt, enc=None):
        self._pt = pt
        self._enc = enc

    def encode(self):
        if self._enc is None:
            self._enc = _ristretto.encode(self._pt)
        return self._enc

    def __eq__(self, other):
        if not isinstance(other, RistrettoPoint):
            return NotImplemented
        return _ristretto.equal(self._pt, other._pt)

    def __hash__(self):
        return hash(self.encode())

    def __repr__(self):
        return f"RistrettoPoint({self.encode().hex()})"


class Ristretto255(_ScalarField):
    name = "ristretto255"
    order = _ristretto.L

    def __init__(self):
        self.generator = RistrettoPoint(_ristretto.BASE, _ristretto.BASE_ENCODING)
        self.identity = RistrettoPoint(_ristretto.IDENTITY, bytes(ELEMENT_SIZE))
        self._table = None

    def base_mul(self, k):
        if self._table is None:
            self._table = _ristretto.FixedBaseTable(_ristretto.BASE)
        return RistrettoPoint(self._table.mult(k))

    def mul(self, k, X):
        if X is self.generator:
            return self.base_mul(k)
        return RistrettoPoint(_ristretto.scalar_mult(k, X._pt))

    def add(self, X, Y):
        return RistrettoPoint(_ristretto.add(X._pt, Y._pt))

    def encode(self, X):
        return X.encode()

    def decode(self, data):
        data = bytes(data)
        if len(data) != ELEMENT_SIZE:
            raise DecodeError(f"element must be {ELEMENT_SIZE} bytes")
        pt = _ristretto.decode(data)
        if pt is None:
            raise DecodeError("not a canonical ristretto255 encoding")
        return RistrettoPoint(pt, data)

    def __repr__(self):
        return "Ristretto255()"


class ToyGroup(_ScalarField):
    """Additive group Z_p with generator ``g``; elements are ints.

    Discrete logs are trivial here, which is the point: it is an oracle for
    checking algebra, never a security setting.
    """

    def __init__(self, p=23, g=1):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"toy group order must be prime, got {p}")
        if not 0 < g < p:
            raise ValueError("generator must be a nonzero residue")
        self.name = f"toy{p}"
        self.order = p
        self.generator = g
        self.identity = 0

    def base_mul(self, k):
        return k * self.generator % self.order

    def mul(self, k, X):
        return k * X % self.order

    def add(self, X, Y):
        return (X + Y) % self.order

    def encode(self, X):
        return X.to_bytes(ELEMENT_SIZE, SCALAR_BYTE_ORDER)

    def decode(self, data):
        if len(data) != ELEMENT_SIZE:
            raise DecodeError(f"element must be {ELEMENT_SIZE} bytes")
        x = int.from_bytes(data, SCALAR_BYTE_ORDER)
        if x >= self.order:
            raise DecodeError("toy element out of range")
        return x

    def __repr__(self):
        return f"ToyGroup(p={self.order}, g={self.generator})"


@dataclass
class OpCounter:
    scalar_mults: int = 0
    point_adds: int = 0
    scalar_field_ops: int = 0

    def reset(self):
        self.scalar_mults = self.point_adds = self.scalar_field_ops = 0


class CountingGroup(_ScalarField):
    """Delegates to ``inner`` and tallies operations in ``self.counter``.

    Not thread-safe: use one wrapper per thread.
    """

    def __init__(self, inner):
        self.inner = inner
        self.name = f"counting-{inner.name}"
        self.order = inner.order
        self.generator = inner.generator
        self.identity = inner.identity
        self.counter = OpCounter()

    def base_mul(self, k):
        self.counter.scalar_mults += 1
        return self.inner.base_mul(k)

    def mul(self, k, X):
        self.counter.scalar_mults += 1
        if X is self.generator:
            return self.inner.base_mul(k)
        return self.inner.mul(k, X)

    def add(self, X, Y):
        self.counter.point_adds += 1
        return self.inner.add(X, Y)

    def scalar_add(self, a, b):
        self.counter.scalar_field_ops += 1
        return self.inner.scalar_add(a, b)

    def scalar_sub(self, a, b):
        self.counter.scalar_field_ops += 1
        return self.inner.scalar_sub(a, b)

    def scalar_mul(self, a, b):
        self.counter.scalar_field_ops += 1
        return self.inner.scalar_mul(a, b)

    def encode(self, X):
        return self.inner.encode(X)

    def decode(self, data):
        return self.inner.decode(data)

    def __repr__(self):
        return f"CountingGroup({self.inner!r})"


RISTRETTO255 = Ristretto255()
