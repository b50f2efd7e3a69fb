"""Sign/verify microbenchmarks: E2IBS against two Schnorr baselines.

``schnorr-plain`` is a single Schnorr key pair with no certification.
``hier2`` stands in for a two-level hierarchy: the UE first checks a root
signature over the base station's public key (a certificate chain of length
one), then the SIB1 signature under that key. It is cost-representative, not
wire-compatible with any published hierarchical scheme.

Timings are medians with median absolute deviation over ``iters`` runs after
100 warm-up runs. Schemes benchmarked together take turns one iteration at a
time on a single thread, so clock-speed drift cannot favour one of them. Every 100th iteration also checks that a valid signature
verifies and a corrupted message does not, so a fast-but-wrong build fails.
"""

import csv
import io
import random
import statistics
import time
from dataclasses import asdict, dataclass, fields

from . import protocol, scheme
from .errors import ConfigurationError
from .group import RISTRETTO255
from .hashing import h2_challenge
from .scheme import Signature

SCHEMES = ("e2ibs", "schnorr-plain", "hier2")
MIN_ITERS = 1000
WARMUP = 100
SAMPLE_EVERY = 100

# Published (sign, verify, end-to-end) timings in us on a fast desktop CPU.
# Printed for context only; nothing is checked against them.
REFERENCE_US = {
    "e2ibs": (6.04, 15.45, 21.48),
    "schnorr-plain": (6.29, 10.36, 16.65),
    "hier2": (5.93, 30.23, 36.16),
}
REFERENCE_KEYS_PER_SEC = 1000 / 5.5e-3


@dataclass
class BenchReport:
    scheme: str
    iters: int
    sign_ns: float
    sign_mad_ns: float
    sign_online_ns: float
    verify_ns: float
    verify_mad_ns: float
    e2e_ns: float
    e2e_mad_ns: float
    sig_bytes: int
    pk_bytes: int
    payload_bytes: int
    extract_per_sec: float = None
    correct: bool = True


# Plain Schnorr over the same group and challenge hash, for the baselines.

def schnorr_keygen(group, rng):
    x = group.random_scalar(rng)
    return x, group.encode(group.base_mul(x))


def schnorr_sign(group, x, message, rng):
    r = group.random_scalar(rng)
    h = h2_challenge(message, group.encode(group.base_mul(r)), group)
    return Signature(group.scalar_sub(r, group.scalar_mul(h, x)), h)


def schnorr_verify(group, pk_bytes, message, sig):
    X = group.decode(pk_bytes)
    R = group.add(group.base_mul(sig.s), group.mul(sig.h, X))
    return sig.h == h2_challenge(message, group.encode(R), group)


def _median_mad(samples):
    med = statistics.median(samples)
    return med, statistics.median(abs(s - med) for s in samples)


class _Harness:
    """Per-scheme sign / online-sign / verify callables plus sizes."""

    def __init__(self, name, t, k, rng):
        self.name = name
        self.rng = rng
        g = self.group = RISTRETTO255
        if name == "e2ibs":
            self.master = scheme.setup(t, k, rng=rng)
            ident = protocol.BsIdentity(0x12345678A, 2**31)
            self.key = scheme.extract(self.master, ident.pack())
            self.pk = self.key.commitment_bytes
            self.sizes = (64, 32, self._e2ibs_payload_size(ident))
        elif name == "schnorr-plain":
            self.x, self.pk = schnorr_keygen(g, rng)
            self.sizes = (64, 32, 64 + 32 + 4 + 2)
        elif name == "hier2":
            root_x, self.root_pk = schnorr_keygen(g, rng)
            self.x, self.pk = schnorr_keygen(g, rng)
            self.cert_msg = self.pk + protocol.BsIdentity(0x12345678A, 2**31).pack()
            self.cert = schnorr_sign(g, root_x, self.cert_msg, rng)
            # signature, gNB key, root signature over (key || 9-byte id), t_sign, dt
            self.sizes = (64, 32, 64 + 32 + 64 + 9 + 4 + 2)
        else:
            raise ConfigurationError(f"unknown scheme {name!r}; choose from {SCHEMES}")

    def _e2ibs_payload_size(self, ident):
        nonce = scheme.precompute_nonce(rng=self.rng)
        payload = protocol.build_payload(b"mib", b"sib1", self.key, ident, nonce, 0, 1000)
        return len(payload.to_bytes())

    def sign(self, message):
        if self.name == "e2ibs":
            return scheme.sign(message, self.key, rng=self.rng)
        return schnorr_sign(self.group, self.x, message, self.rng)

    def prepare_online(self):
        if self.name == "e2ibs":
            return scheme.precompute_nonce(rng=self.rng)
        r = self.group.random_scalar(self.rng)
        return r, self.group.encode(self.group.base_mul(r))

    def sign_online(self, message, pre):
        g = self.group
        if self.name == "e2ibs":
            return scheme.sign(message, self.key, pre)
        r, R = pre
        h = h2_challenge(message, R, g)
        return Signature(g.scalar_sub(r, g.scalar_mul(h, self.x)), h)

    def verify(self, message, sig):
        if self.name == "e2ibs":
            return scheme.verify(message, sig, self.key.identity, self.pk, self.master.mpk)
        if self.name == "hier2" and not schnorr_verify(self.group, self.root_pk, self.cert_msg, self.cert):
            return False
        return schnorr_verify(self.group, self.pk, message, sig)


def _timed(fn, *args):
    t0 = time.perf_counter_ns()
    out = fn(*args)
    return time.perf_counter_ns() - t0, out


def _run(harnesses, iters, rng):
    """Time all harnesses round-robin, one iteration at a time, so slow drift
    of the host clock speed hits every scheme alike."""
    n = iters + WARMUP
    messages = [rng.randbytes(64) for _ in range(n)]
    hs = list(harnesses)
    sign_t = {h.name: [] for h in hs}
    online_t = {h.name: [] for h in hs}
    verify_t = {h.name: [] for h in hs}
    e2e_t = {h.name: [] for h in hs}
    failures = {h.name: 0 for h in hs}

    for i, m in enumerate(messages):
        keep = i >= WARMUP
        for h in hs:
            pre = h.prepare_online()
            dt_on, _ = _timed(h.sign_online, m, pre)
            dt_sign, sig = _timed(h.sign, m)
            dt_ver, ok = _timed(h.verify, m, sig)
            t0 = time.perf_counter_ns()
            ok2 = h.verify(m, h.sign(m))
            dt_e2e = time.perf_counter_ns() - t0
            if i % SAMPLE_EVERY == 0:
                bad = bytes([m[0] ^ 1]) + m[1:]
                if not (ok and ok2) or h.verify(bad, sig):
                    failures[h.name] += 1
            if keep:
                online_t[h.name].append(dt_on)
                sign_t[h.name].append(dt_sign)
                verify_t[h.name].append(dt_ver)
                e2e_t[h.name].append(dt_e2e)

    reports = []
    for h in hs:
        s, s_mad = _median_mad(sign_t[h.name])
        v, v_mad = _median_mad(verify_t[h.name])
        e, e_mad = _median_mad(e2e_t[h.name])
        sig_b, pk_b, pay_b = h.sizes
        reports.append(BenchReport(h.name, iters, s, s_mad, statistics.median(online_t[h.name]),
                                   v, v_mad, e, e_mad, sig_b, pk_b, pay_b,
                                   correct=failures[h.name] == 0))
    return reports


def bench_scheme(name, iters=MIN_ITERS, t=scheme.DEFAULT_T, k=scheme.DEFAULT_K, seed=0):
    """Benchmark one scheme; ``correct`` reflects the embedded correctness samples."""
    return bench_all([name], iters, t, k, seed)[0]


def bench_all(names=SCHEMES, iters=MIN_ITERS, t=scheme.DEFAULT_T, k=scheme.DEFAULT_K, seed=0,
              extraction=True):
    """Benchmark several schemes interleaved; E2IBS also gets extraction throughput."""
    if iters < MIN_ITERS:
        raise ConfigurationError(f"need at least {MIN_ITERS} iterations for stable medians")
    rng = random.Random(seed)
    harnesses = [_Harness(name, t, k, rng) for name in names]
    reports = _run(harnesses, iters, rng)
    if extraction:
        for h, r in zip(harnesses, reports):
            if h.name == "e2ibs":
                r.extract_per_sec = bench_extraction(h.master, iters, seed)
    return reports


def bench_extraction(master, iters=MIN_ITERS, seed=0, cache=True):
    """Key extractions per second over a seeded set of random 9-byte identities."""
    rng = random.Random(seed)
    idents = [rng.randbytes(9) for _ in range(iters)]
    m = scheme.MasterKeyMaterial(master.msk, master.mpk, master.z_cache)
    if cache:
        m.enable_cache()
    else:
        m.z_cache = None
    t0 = time.perf_counter()
    for ident in idents:
        scheme.extract(m, ident)
    return iters / (time.perf_counter() - t0)


def verify_ratio(reports, num="e2ibs", den="hier2"):
    by = {r.scheme: r for r in reports}
    return by[num].verify_ns / by[den].verify_ns


def emit_table(reports, fmt="csv"):
    """Render reports as CSV (machine-diffable) or an aligned text table."""
    if not reports:
        raise ValueError("need at least one report")
    names = [f.name for f in fields(BenchReport)]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for r in reports:
            row = asdict(r)
            w.writerow(["" if row[n] is None else _fmt(row[n]) for n in names])
        return buf.getvalue()

    head = f"{'scheme':<14}{'sign us':>10}{'online us':>11}{'verify us':>11}{'e2e us':>10}" \
           f"{'sig B':>7}{'pk B':>6}{'wire B':>8}   reference sign/verify/e2e us"
    lines = [head]
    for r in reports:
        ref = "/".join(f"{v:g}" for v in REFERENCE_US.get(r.scheme, ()))
        lines.append(f"{r.scheme:<14}{r.sign_ns / 1e3:>10.1f}{r.sign_online_ns / 1e3:>11.1f}"
                     f"{r.verify_ns / 1e3:>11.1f}{r.e2e_ns / 1e3:>10.1f}"
                     f"{r.sig_bytes:>7}{r.pk_bytes:>6}{r.payload_bytes:>8}   {ref}")
    return "\n".join(lines) + "\n"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.1f}"
    return str(v)
