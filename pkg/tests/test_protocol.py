import random

import pytest
from hypothesis import given, settings, strategies as st

from e2ibs import protocol, scheme
from e2ibs.errors import ConfigurationError, DecodeError, KeyExpiredError, MalformedInputError
from e2ibs.protocol import (
    PAYLOAD_SIZE, BsIdentity, Reason, Sib1AuthPayload, TrustAnchor, TrustStore,
    pack_identity, unpack_identity, verify_payload,
)

OP = b"001-01"
NOW_S = 1_750_000_000
NOW_MS = NOW_S * 1000
MIB, SIB1 = b"\x01\x02\x03", b"sib1 contents"


@pytest.fixture(scope="module")
def setting():
    m = scheme.setup(rng=random.Random(77))
    key, ident = protocol.issue_bs_key(m, 0x123456789, NOW_S)
    store = TrustStore([TrustAnchor(OP, m.mpk, NOW_S + protocol.DEFAULT_ANCHOR_VALIDITY_S)])
    return m, key, ident, store


def make(setting, t_sign=NOW_MS, dt=1000, rng=None):
    _, key, ident, _ = setting
    nonce = scheme.precompute_nonce(rng=rng or random.Random(t_sign))
    return protocol.build_payload(MIB, SIB1, key, ident, nonce, t_sign, dt)


def test_pack_example():
    assert pack_identity(BsIdentity(1, 0x6553F100)).hex(" ") == "00 00 00 00 16 55 3f 10 00"


@given(st.integers(0, 2**36 - 1), st.integers(0, 2**32 - 1))
def test_identity_roundtrip(cell, expiry):
    ident = BsIdentity(cell, expiry)
    assert len(ident.pack()) == 9
    assert unpack_identity(ident.pack()) == ident


def test_identity_padding_and_range():
    with pytest.raises(MalformedInputError):
        unpack_identity(bytes(8) + b"\x0f")
    with pytest.raises(ConfigurationError):
        BsIdentity(2**36, 0)


def test_issue_defaults(setting):
    m, key, ident, _ = setting
    assert ident.expiry == NOW_S + 600
    assert key.identity == ident.pack()
    assert scheme.key_equation_holds(key, m.mpk)
    other, _ = protocol.issue_bs_key(m, 0x123456789, NOW_S, 601)
    assert other.x != key.x
    with pytest.raises(ConfigurationError):
        protocol.issue_bs_key(m, 1, NOW_S, 0)


def test_payload_layout(setting):
    p = make(setting)
    blob = p.to_bytes()
    assert len(blob) == PAYLOAD_SIZE == 111
    assert blob[:64] == p.sig.to_bytes()
    assert blob[64:73] == p.identity.pack()
    assert blob[73:105] == setting[1].commitment_bytes
    assert int.from_bytes(blob[105:109], "big") == NOW_MS % 2**32
    assert blob[109:] == (1000).to_bytes(2, "big")
    assert Sib1AuthPayload.from_bytes(blob) == p


def test_payload_deterministic(setting):
    assert make(setting, rng=random.Random(1)).to_bytes() == make(setting, rng=random.Random(1)).to_bytes()


def test_build_refuses_expired_key(setting):
    with pytest.raises(KeyExpiredError):
        make(setting, t_sign=NOW_MS + 601_000)


def test_accepts_own_output(setting):
    store = setting[3]
    p = make(setting)
    assert verify_payload(p.to_bytes(), MIB, SIB1, store, OP, NOW_MS).accepted
    assert str(verify_payload(p, MIB, SIB1, store, OP, NOW_MS)) == "accepted"


def test_stale_boundary(setting):
    store = setting[3]
    blob = make(setting).to_bytes()
    edge = NOW_MS + 1000 + protocol.DEFAULT_SKEW_MS
    assert verify_payload(blob, MIB, SIB1, store, OP, edge - 1).accepted
    for now in (edge, edge + 1, edge + 60_000):
        assert verify_payload(blob, MIB, SIB1, store, OP, now).reason is Reason.STALE


def test_future_timestamp_is_stale(setting):
    blob = make(setting).to_bytes()
    v = verify_payload(blob, MIB, SIB1, setting[3], OP, NOW_MS - protocol.DEFAULT_SKEW_MS - 1)
    assert v.reason is Reason.STALE


def test_check_order(setting):
    m, key, ident, store = setting
    blob = make(setting).to_bytes()
    tampered = make(setting).to_bytes()
    late = NOW_MS + 700_000
    # key expiry beats freshness, freshness beats the signature
    assert verify_payload(blob, MIB, SIB1, store, OP, late).reason is Reason.KEY_EXPIRED
    assert verify_payload(tampered, MIB + b"x", SIB1, store, OP, NOW_MS + 5000).reason is Reason.STALE
    assert verify_payload(tampered, MIB + b"x", SIB1, store, OP, NOW_MS).reason is Reason.BAD_SIGNATURE
    assert verify_payload(blob, MIB, SIB1, store, b"999-99", NOW_MS).reason is Reason.UNTRUSTED_OPERATOR
    assert verify_payload(blob[:-1], MIB, SIB1, store, b"999-99", NOW_MS).reason is Reason.MALFORMED
    old = TrustStore([TrustAnchor(OP, m.mpk, NOW_S - 1)])
    assert verify_payload(blob, MIB, SIB1, old, OP, NOW_MS).reason is Reason.ANCHOR_EXPIRED


def test_dt_is_signed(setting):
    blob = bytearray(make(setting).to_bytes())
    blob[110] ^= 0xFF
    v = verify_payload(bytes(blob), MIB, SIB1, setting[3], OP, NOW_MS)
    assert v.reason is Reason.BAD_SIGNATURE


def test_freshness_monotone(setting):
    store = setting[3]
    blob = make(setting, dt=500).to_bytes()
    accepted = [verify_payload(blob, MIB, SIB1, store, OP, NOW_MS + d).accepted
                for d in range(0, 700, 25)]
    # once rejected, stays rejected
    assert accepted == sorted(accepted, reverse=True)
    assert accepted[0] and not accepted[-1]


def test_t_sign_wraparound():
    base = 2**32 * 400
    for now in (base - 5, base + 5):
        assert protocol.full_timestamp((base - 3) % 2**32, now) == base - 3


def test_end_to_end_random(setting):
    m, key, ident, store = setting
    rng = random.Random(8)
    for _ in range(200):
        mib, sib1 = rng.randbytes(3), rng.randbytes(rng.randrange(0, 372))
        t = NOW_MS + rng.randrange(0, 500_000)
        p = protocol.build_payload(mib, sib1, key, ident, scheme.precompute_nonce(rng=rng),
                                   t, rng.randrange(1, 2**16))
        assert verify_payload(p.to_bytes(), mib, sib1, store, OP, t).accepted


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=256))
def test_fuzz_never_crashes(setting, data):
    assert not verify_payload(data, MIB, SIB1, setting[3], OP, NOW_MS).accepted


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 110), st.integers(1, 255))
def test_any_byte_corruption_rejected(setting, pos, mask):
    blob = bytearray(make(setting).to_bytes())
    blob[pos] ^= mask
    assert not verify_payload(bytes(blob), MIB, SIB1, setting[3], OP, NOW_MS).accepted


def test_trust_store(setting):
    m, *_ = setting
    a = TrustAnchor(OP, m.mpk, NOW_S + 10)
    store = TrustStore()
    store.add_anchor(a)
    assert store.lookup(OP) is a and OP in store and len(store) == 1
    with pytest.raises(ConfigurationError):
        store.add_anchor(a)
    b = TrustAnchor(OP, m.mpk, NOW_S + 20)
    store.rotate(b)
    assert store.lookup(OP) is b
    assert store.lookup(b"x") is None


def test_anchor_file_roundtrip(setting):
    m, *_ = setting
    a = TrustAnchor(OP, m.mpk, NOW_S)
    blob = a.to_bytes()
    assert blob.startswith(b"E2IBSTRST")
    back = TrustAnchor.from_bytes(blob)
    assert back.operator_id == OP and back.mpk_expiry == NOW_S
    assert back.mpk.to_bytes() == m.mpk.to_bytes()
    with pytest.raises(DecodeError):
        TrustAnchor.from_bytes(blob[:-1])
