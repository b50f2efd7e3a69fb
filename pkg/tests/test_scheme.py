import random

import pytest
from hypothesis import given, settings, strategies as st

from e2ibs import scheme
from e2ibs.errors import MalformedInputError, NonceReuseError, ParameterError, ConfigurationError
from e2ibs.group import RISTRETTO255 as G, CountingGroup, ToyGroup
from e2ibs.hashing import identity_label, index_label
from e2ibs.scheme import NoncePacket, Signature


def toy_stubs(monkeypatch, toy, indices=(1, 2), h=2, u=7):
    """Pin PRF, H1 and H2 so the toy worked example is computed by hand."""
    table = {index_label(1): 3, index_label(2): 5}

    def prf(key, label, group):
        if label.startswith(b"id:"):
            return u
        return table.get(label, 1)

    monkeypatch.setattr(scheme, "prf", prf)
    monkeypatch.setattr(scheme, "h1_indices", lambda *a, **kw: tuple(indices))
    monkeypatch.setattr(scheme, "h2_challenge", lambda m, R, g: h)
    return scheme.setup(8, 2, group=toy, kappa=0, rng=random.Random(0))


def toy_nonce(toy, r):
    return NoncePacket(r, toy.base_mul(r), toy.encode(toy.base_mul(r)))


def test_toy_setup(monkeypatch, toy):
    m = toy_stubs(monkeypatch, toy)
    assert m.mpk[1] == 3 and m.mpk[2] == 5
    assert len(m.mpk) == 8


def test_toy_worked_example(monkeypatch, toy):
    m = toy_stubs(monkeypatch, toy)
    key = scheme.extract(m, b"U")
    assert (key.x, key.commitment) == (15, 7)
    assert toy.base_mul(key.x) == toy.add(toy.sum([3, 5]), 7) == 15

    nonce = toy_nonce(toy, 4)
    assert nonce.R == 4
    sig = scheme.sign(b"m", key, nonce)
    assert (sig.s, sig.h) == (20, 2)
    assert scheme.nonce_commitment(sig, b"U", 7, m.mpk) == 4
    assert scheme.verify(b"m", sig, b"U", 7, m.mpk)


def test_toy_duplicate_indices(monkeypatch, toy):
    m = toy_stubs(monkeypatch, toy, indices=(1, 1))
    assert scheme.extract(m, b"U").x == 13


def test_zero_challenge_gives_s_equal_r(monkeypatch, toy):
    m = toy_stubs(monkeypatch, toy, h=0)
    sig = scheme.sign(b"m", scheme.extract(m, b"U"), toy_nonce(toy, 9))
    assert sig.s == 9


def test_key_equation_production(master):
    key = scheme.extract(master, b"cell-17")
    assert scheme.key_equation_holds(key, master.mpk)
    assert key == scheme.extract(master, b"cell-17")
    with pytest.raises(MalformedInputError):
        scheme.extract(master, b"")


def test_setup_deterministic_under_seed():
    a = scheme.setup(16, 4, kappa=0, rng=random.Random(7))
    b = scheme.setup(16, 4, kappa=0, rng=random.Random(7))
    assert a.msk == b.msk and a.mpk.to_bytes() == b.mpk.to_bytes()


def test_setup_rejects_weak_params():
    with pytest.raises(ParameterError):
        scheme.setup(16, 4)
    with pytest.raises(ConfigurationError):
        scheme.setup(1000, 18)


def test_production_mpk_size(master):
    assert len(master.mpk) == 1024
    blob = master.mpk.to_bytes()
    assert len(blob) == 16 + 32 * 1024
    assert blob[:8] == b"E2IBSMPK"
    assert scheme.MasterPublicKey.from_bytes(blob).elements == master.mpk.elements


def test_cache_matches_recompute(master):
    cached = scheme.MasterKeyMaterial(master.msk, master.mpk).enable_cache()
    assert scheme.extract(cached, b"x").x == scheme.extract(master, b"x").x


def test_nonce_reuse_is_fatal(master):
    key = scheme.extract(master, b"cell")
    nonce = scheme.precompute_nonce(rng=random.Random(1))
    scheme.sign(b"a", key, nonce)
    with pytest.raises(NonceReuseError):
        scheme.sign(b"b", key, nonce)


def test_nonces_do_not_repeat():
    rng = random.Random(3)
    assert len({G.random_scalar(rng) for _ in range(10_000)}) == 10_000
    n = scheme.precompute_nonce(rng=random.Random(4))
    assert n.R == G.base_mul(n.r)


def test_signature_bytes():
    sig = Signature(5, 6)
    assert len(sig.to_bytes()) == 64
    assert Signature.from_bytes(sig.to_bytes()) == sig


@settings(max_examples=25, deadline=None)
@given(st.binary(max_size=200), st.binary(min_size=1, max_size=20))
def test_completeness(master, message, identity):
    key = scheme.extract(master, identity)
    sig = scheme.sign(message, key, rng=random.Random(len(message)))
    assert scheme.verify(message, sig, identity, key.commitment_bytes, master.mpk)
    assert scheme.verify(message, sig.to_bytes(), identity, key.commitment, master.mpk)


def test_verify_is_total(master):
    key = scheme.extract(master, b"id")
    sig = scheme.sign(b"m", key)
    C = key.commitment_bytes
    assert not scheme.verify(b"m", b"short", b"id", C, master.mpk)
    assert not scheme.verify(b"m", sig, b"id", b"\xff" * 32, master.mpk)
    assert not scheme.verify(b"m", sig, b"", C, master.mpk)
    assert not scheme.verify(b"m", Signature(G.order, sig.h), b"id", C, master.mpk)
    assert not scheme.verify(b"m", None, b"id", C, master.mpk)


def test_security_bits():
    assert scheme.security_bits(2, 1) == pytest.approx(1.0, abs=0.01)
    assert scheme.security_bits(4, 2) == pytest.approx(2.585, abs=0.01)
    assert scheme.security_bits(1024, 18) == pytest.approx(127.28, abs=0.01)
    with pytest.raises(ConfigurationError):
        scheme.security_bits(4, 5)


def test_security_bits_matches_exact_binomial():
    from math import comb, log2
    rng = random.Random(0)
    for _ in range(200):
        t = rng.randrange(1, 3000)
        k = rng.randrange(1, t + 1)
        assert scheme.security_bits(t, k) == pytest.approx(log2(comb(t, k)), abs=1e-6)


def test_operation_counts():
    cg = CountingGroup(G)
    m = scheme.setup(group=cg, rng=random.Random(2))
    cg.counter.reset()
    key = scheme.extract(m, b"cell")
    assert cg.counter.scalar_mults == 1

    nonce = scheme.precompute_nonce(cg, random.Random(3))
    cg.counter.reset()
    sig = scheme.sign(b"m", key, nonce)
    assert cg.counter.scalar_mults == 0 and cg.counter.point_adds == 0

    cg.counter.reset()
    assert scheme.verify(b"m", sig, b"cell", key.commitment, m.mpk)
    assert cg.counter.scalar_mults == 2
    assert cg.counter.point_adds <= scheme.DEFAULT_K + 1


def test_brute_force_dlog_small_group():
    toy = ToyGroup(101, 7)
    dlog = {toy.base_mul(i): i for i in range(101)}
    m = scheme.setup(8, 3, group=toy, kappa=0, rng=random.Random(1))
    for i in range(200):
        key = scheme.extract(m, i.to_bytes(2, "big"))
        nonce = scheme.precompute_nonce(toy, random.Random(i))
        sig = scheme.sign(b"msg", key, nonce)
        R2 = scheme.nonce_commitment(sig, key.identity, key.commitment, m.mpk)
        assert dlog[R2] == nonce.r
