"""Deterministic actor simulation of base-station bootstrapping.

A scenario is a timed script of actions for named actors (PKG, AMF, gNB, UE,
attacker). The channel is an attacker-editable queue of SIB1 broadcasts: the
attacker may capture, tamper with, drop, replay or inject messages. The clock
only moves with the script. All randomness comes from one ``random.Random``
seeded per run, so (scenario, seed) fixes the trace byte for byte.

Traces and scripts serialize to tab-separated text, one record per line.
"""

import hashlib
import random
from dataclasses import dataclass, field, replace

from . import protocol, robust, scheme
from .errors import ConfigurationError, KeyExpiredError
from .hashing import identity_label, prf
from .protocol import TrustAnchor, TrustStore

ROLES = ("pkg", "amf", "gnb", "ue", "attacker")
EPOCH_MS = 1_750_000_000_000  # sim time 0, as Unix milliseconds
DEFAULT_DT_MS = 1000
DEFAULT_OPERATOR = b"001-01"

KEEP_LOOKING = "keep_looking"
CONNECT_UNAUTHENTICATED = "connect_unauthenticated"

TRACE_FIELDS = ("time", "kind", "actor", "role", "peer", "origin", "digest", "pk", "t_sign", "info")


@dataclass(frozen=True)
class SimEvent:
    time: int
    kind: str
    actor: str
    role: str
    peer: str = "-"
    origin: str = "-"
    digest: str = "-"
    pk: str = "-"
    t_sign: str = "-"
    info: str = "-"

    def to_tsv(self):
        return "\t".join(str(getattr(self, f)) for f in TRACE_FIELDS)

    @classmethod
    def from_tsv(cls, line):
        parts = line.rstrip("\n").split("\t")
        if len(parts) != len(TRACE_FIELDS):
            raise ValueError(f"expected {len(TRACE_FIELDS)} fields, got {len(parts)}")
        return cls(int(parts[0]), *parts[1:])


def trace_to_tsv(trace):
    lines = ["#" + "\t".join(TRACE_FIELDS)]
    lines += [e.to_tsv() for e in trace]
    return "\n".join(lines) + "\n"


def trace_from_tsv(text):
    return [SimEvent.from_tsv(line) for line in text.splitlines()
            if line and not line.startswith("#")]


@dataclass
class Action:
    time: int
    actor: str
    op: str
    args: dict = field(default_factory=dict)

    def to_line(self):
        args = ";".join(f"{k}={v}" for k, v in sorted(self.args.items())) or "-"
        return f"{self.time}\t{self.actor}\t{self.op}\t{args}"

    @classmethod
    def from_line(cls, line):
        time, actor, op, args = line.rstrip("\n").split("\t")
        parsed = {}
        if args != "-":
            for item in args.split(";"):
                k, v = item.split("=", 1)
                parsed[k] = int(v) if v.lstrip("-").isdigit() else v
        return cls(int(time), actor, op, parsed)


@dataclass
class Scenario:
    name: str
    actors: dict
    script: list
    expected: list
    description: str = ""
    ue_policy: str = KEEP_LOOKING
    adversarial: bool = True
    t: int = scheme.DEFAULT_T
    k: int = scheme.DEFAULT_K

    def to_text(self):
        head = [f"#scenario\t{self.name}", f"#policy\t{self.ue_policy}",
                f"#params\t{self.t}\t{self.k}", f"#adversarial\t{int(self.adversarial)}"]
        if self.description:
            head.append(f"#about\t{self.description}")
        head += [f"#actor\t{name}\t{role}" for name, role in self.actors.items()]
        head += [f"#expect\t{v}" for v in self.expected]
        return "\n".join(head + [a.to_line() for a in self.script]) + "\n"

    @classmethod
    def from_text(cls, text):
        name, policy, t, k = None, KEEP_LOOKING, scheme.DEFAULT_T, scheme.DEFAULT_K
        about, adversarial = "", True
        actors, expected, script = {}, [], []
        for line in text.splitlines():
            if not line:
                continue
            if line.startswith("#"):
                tag, *rest = line[1:].split("\t")
                if tag == "scenario":
                    name = rest[0]
                elif tag == "policy":
                    policy = rest[0]
                elif tag == "params":
                    t, k = int(rest[0]), int(rest[1])
                elif tag == "actor":
                    actors[rest[0]] = rest[1]
                elif tag == "expect":
                    expected.append(rest[0])
                elif tag == "adversarial":
                    adversarial = rest[0] == "1"
                elif tag == "about":
                    about = rest[0]
                continue
            script.append(Action.from_line(line))
        return cls(name, actors, script, expected, about, policy, adversarial, t, k)


@dataclass
class SimResult:
    scenario: str
    seed: int
    trace: list
    verdicts: list
    expected: list

    @property
    def matches_expectations(self):
        return self.verdicts == self.expected

    def trace_tsv(self):
        return trace_to_tsv(self.trace)


@dataclass
class _Message:
    sender: str
    origin: str  # "honest" or "attacker"; the simulator's god view
    operator_id: bytes
    mib: bytes
    sib1: bytes
    payload: bytes

    def digest(self):
        return hashlib.sha256(self.mib + self.sib1 + self.payload).hexdigest()[:16]


@dataclass
class _Pkg:
    operator_id: bytes
    master: object
    seqs: dict = field(default_factory=dict)


@dataclass
class _Gnb:
    operator_id: bytes = DEFAULT_OPERATOR
    pkg: str = None
    amf: str = None
    cell: int = 1
    key: object = None
    identity: object = None
    next_nonce: object = None
    counter: int = 0


@dataclass
class _Attacker:
    captured: list = field(default_factory=list)
    msk_of: dict = field(default_factory=dict)
    rogue: dict = field(default_factory=dict)


class _Simulation:
    def __init__(self, scenario, seed):
        self.sc = scenario
        self.seed = seed
        self.rng = random.Random(seed)
        self.now = 0
        self.trace = []
        self.verdicts = []
        self.channel = []
        self.pkgs = {}
        self.gnbs = {}
        self.ues = {}
        self.attackers = {}
        for name, role in scenario.actors.items():
            if role not in ROLES:
                raise ConfigurationError(f"actor {name!r} has unknown role {role!r}")
            if role == "gnb":
                self.gnbs[name] = _Gnb()
            elif role == "ue":
                self.ues[name] = TrustStore()
            elif role == "attacker":
                self.attackers[name] = _Attacker()

    @property
    def now_ms(self):
        return EPOCH_MS + self.now

    def emit(self, kind, actor, **kw):
        self.trace.append(SimEvent(self.now, kind, actor, self.sc.actors[actor],
                                   **{k: str(v) for k, v in kw.items()}))

    def role(self, name):
        if name not in self.sc.actors:
            raise ConfigurationError(f"script references unknown actor {name!r}")
        return self.sc.actors[name]

    def first(self, role):
        for name, r in self.sc.actors.items():
            if r == role:
                return name
        raise ConfigurationError(f"scenario has no {role}")

    def run(self):
        for action in self.sc.script:
            if action.time < self.now:
                raise ConfigurationError("script actions must be time-ordered")
            self.now = action.time
            role = self.role(action.actor)
            handler = getattr(self, f"_{role}_{action.op}", None)
            if handler is None:
                raise ConfigurationError(f"{role} cannot perform {action.op!r}")
            handler(action.actor, **action.args)
        return SimResult(self.sc.name, self.seed, self.trace, self.verdicts,
                         list(self.sc.expected))

    # PKG

    def _pkg_setup(self, name, operator=DEFAULT_OPERATOR, provision=1):
        op = operator.encode() if isinstance(operator, str) else operator
        master = scheme.setup(self.sc.t, self.sc.k, rng=self.rng, kappa=0)
        self.pkgs[name] = _Pkg(op, master.enable_cache())
        expiry = self.now_ms // 1000 + protocol.DEFAULT_ANCHOR_VALIDITY_S
        anchor = TrustAnchor(op, master.mpk, expiry)
        self.emit("pkg_setup", name, info=f"operator={op.decode()}")
        if provision:
            for store in self.ues.values():
                store.rotate(anchor)

    def _pkg_bump_seq(self, name, cell=1):
        pkg = self.pkgs[name]
        pkg.seqs[cell] = pkg.seqs.get(cell, 0) + 1
        for store in self.ues.values():
            if pkg.operator_id in store:
                store.set_seq(pkg.operator_id, cell, pkg.seqs[cell])
        self.emit("seq_bump", name, info=f"cell={cell};seq={pkg.seqs[cell]}")

    def _pkg_leak_msk(self, name, to):
        if self.role(to) != "attacker":
            raise ConfigurationError("msk can only leak to an attacker actor")
        self.attackers[to].msk_of[self.pkgs[name].operator_id] = self.pkgs[name]
        self.emit("compromise", to, peer=name, info="msk")

    def _serve_key_request(self, pkg_name, cell, validity_s, Q):
        pkg = self.pkgs[pkg_name]
        ident = protocol.make_identity(cell, self.now_ms // 1000, validity_s)
        if Q is None:
            key = scheme.extract(pkg.master, ident.pack())
            return ident, key, None
        seq = pkg.seqs.setdefault(cell, 0)
        for store in self.ues.values():
            if pkg.operator_id in store:
                store.set_seq(pkg.operator_id, cell, seq)
        return ident, None, robust.extract_blind(pkg.master, ident.pack(), Q, seq)

    # gNB

    def _gnb_attach(self, name, pkg, amf=None, cell=1):
        g = self.gnbs[name]
        if self.role(pkg) != "pkg" or (amf is not None and self.role(amf) != "amf"):
            raise ConfigurationError("gnb must attach to a pkg and an amf")
        g.pkg, g.amf, g.cell = pkg, amf, cell
        g.operator_id = self.pkgs[pkg].operator_id

    def _gnb_request_key(self, name, validity_s=protocol.DEFAULT_KEY_VALIDITY_S, robust_key=0):
        g = self.gnbs[name]
        amf = g.amf or self.first("amf")
        share = robust.user_keygen(self.pkgs[g.pkg].master.group, self.rng) if robust_key else None
        request = g.cell.to_bytes(5, "big") + (share.Q.encode() if share else b"")
        digest = hashlib.sha256(request).hexdigest()[:16]
        self.emit("key_request", name, peer=amf, digest=digest)
        self.emit("key_request", amf, peer=g.pkg, digest=digest, info="forward")
        ident, key, ext = self._serve_key_request(g.pkg, g.cell, validity_s,
                                                  share.Q if share else None)
        if ext is not None:
            mpk = self.pkgs[g.pkg].master.mpk
            wire = ext.to_bytes(mpk.params.group)
            resp_digest = hashlib.sha256(wire).hexdigest()[:16]
            ext = robust.PkgExtraction.from_bytes(wire, mpk.params.group)
            key = robust.complete_key(share, ext, ident.pack(), mpk)
        else:
            resp_digest = hashlib.sha256(key.identity + key.commitment_bytes).hexdigest()[:16]
        self.emit("key_response", g.pkg, peer=amf, digest=resp_digest)
        self.emit("key_response", amf, peer=name, digest=resp_digest, info="forward")
        g.key, g.identity = key, ident
        g.next_nonce = scheme.precompute_nonce(key.group, self.rng)
        self.emit("key_installed", name, pk=key.commitment_bytes.hex(),
                  info=f"expiry={ident.expiry};seq={key.seq}")

    def _gnb_broadcast(self, name, dt=DEFAULT_DT_MS):
        g = self.gnbs[name]
        g.counter += 1
        mib, sib1 = self._system_info(g.cell, g.counter)
        try:
            payload = protocol.build_payload(mib, sib1, g.key, g.identity, g.next_nonce,
                                             self.now_ms, dt)
        except KeyExpiredError:
            self.emit("sign_refused", name, info="key-expired")
            return
        # pre-generate the nonce for the next SIB1 period
        g.next_nonce = scheme.precompute_nonce(g.key.group, self.rng)
        msg = _Message(name, "honest", g.operator_id, mib, sib1, payload.to_bytes())
        self.emit("begin_signing", name, digest=msg.digest(), pk=payload.pk_bs.hex(),
                  t_sign=payload.t_sign)
        self._send(msg)

    @staticmethod
    def _system_info(cell, counter):
        mib = b"MIB" + cell.to_bytes(5, "big") + counter.to_bytes(2, "big")
        sib1 = b"SIB1:cellSelectionInfo;schedulingInfo;" + counter.to_bytes(4, "big")
        return mib, sib1

    def _send(self, msg):
        self.channel.append(msg)
        self.emit("broadcast", msg.sender, origin=msg.origin, digest=msg.digest())

    # UE

    def _ue_deliver(self, name):
        store = self.ues[name]
        accepted_any = False
        inbox, self.channel = self.channel, []
        for msg in inbox:
            verdict = protocol.verify_payload(msg.payload, msg.mib, msg.sib1, store,
                                              msg.operator_id, self.now_ms)
            self.verdicts.append(str(verdict))
            if verdict.accepted:
                accepted_any = True
                t_sign = int.from_bytes(msg.payload[105:109], "big")
                self.emit("authentication_successful", name, peer=msg.sender, origin=msg.origin,
                          digest=msg.digest(), pk=msg.payload[73:105].hex(), t_sign=t_sign)
            else:
                self.emit("rejected", name, peer=msg.sender, origin=msg.origin,
                          digest=msg.digest(), info=verdict.reason.value)
        if inbox and not accepted_any:
            if self.sc.ue_policy == CONNECT_UNAUTHENTICATED:
                self.emit("connect_unauthenticated", name)
            else:
                self.emit("keep_searching", name)

    # attacker

    def _attacker_capture(self, name):
        self.attackers[name].captured.extend(replace(m) for m in self.channel)
        self.emit("capture", name, info=f"count={len(self.channel)}")

    def _attacker_drop(self, name):
        self.emit("drop", name, info=f"count={len(self.channel)}")
        self.channel = []

    def _attacker_tamper(self, name, offset=0, mask=1):
        for i, m in enumerate(self.channel):
            sib1 = bytearray(m.sib1)
            sib1[offset % len(sib1)] ^= mask
            self.channel[i] = replace(m, sib1=bytes(sib1), origin="attacker")
            self.emit("tamper", name, peer=m.sender, digest=self.channel[i].digest())

    def _attacker_replay(self, name, index=-1):
        captured = self.attackers[name].captured
        if not captured:
            raise ConfigurationError("attacker has nothing captured to replay")
        self._send(replace(captured[index], sender=name, origin="attacker"))

    def _attacker_inject_unsigned(self, name, operator=DEFAULT_OPERATOR):
        op = operator.encode() if isinstance(operator, str) else operator
        mib, sib1 = self._system_info(0xBAD, 1)
        self._send(_Message(name, "attacker", op, mib, sib1, b""))

    def _attacker_rogue_broadcast(self, name, operator="999-99", claim=None, cell=1, dt=DEFAULT_DT_MS):
        """Sign with a PKG the attacker runs itself, claiming ``claim`` as operator."""
        att = self.attackers[name]
        op = operator.encode()
        if op not in att.rogue:
            att.rogue[op] = scheme.setup(self.sc.t, self.sc.k, rng=self.rng, kappa=0)
        key, ident = protocol.issue_bs_key(att.rogue[op], cell, self.now_ms // 1000)
        mib, sib1 = self._system_info(cell, 1)
        nonce = scheme.precompute_nonce(key.group, self.rng)
        payload = protocol.build_payload(mib, sib1, key, ident, nonce, self.now_ms, dt)
        claimed = claim.encode() if claim else op
        self._send(_Message(name, "attacker", claimed, mib, sib1, payload.to_bytes()))

    def _attacker_forge(self, name, target, n=1, dt=DEFAULT_DT_MS):
        """Sign as ``target`` under its published commitment using only PKG secrets.

        The attacker knows msk, hence z = sum(z_j) + u2, but not the gNB's
        share u1; each attempt guesses a different completion of the key.
        """
        att = self.attackers[name]
        g = self.gnbs[target]
        pkg = att.msk_of.get(g.operator_id)
        if pkg is None:
            raise ConfigurationError("forging requires the target operator's msk")
        ident = g.identity
        master = pkg.master
        group = master.group
        seq = pkg.seqs.get(g.cell)
        z = prf(master.msk, identity_label(ident.pack()), group)
        for j in scheme.indices_for(ident.pack(), g.key.commitment_bytes, master.params, seq):
            z = group.scalar_add(z, master.z(j))
        for i in range(n):
            guess = 0 if i == 0 else group.random_scalar(self.rng)
            fake = scheme.UserKey(ident.pack(), group.scalar_add(z, guess), g.key.commitment,
                                  seq, group)
            mib, sib1 = self._system_info(g.cell, 10_000 + i)
            nonce = scheme.precompute_nonce(group, self.rng)
            payload = protocol.build_payload(mib, sib1, fake, ident, nonce, self.now_ms, dt)
            self._send(_Message(name, "attacker", g.operator_id, mib, sib1, payload.to_bytes()))


def run_scenario(scenario, seed=0):
    """Run ``scenario`` with ``seed``; the result carries trace and verdicts."""
    return _Simulation(scenario, seed).run()


def assert_correspondence(trace):
    """Check that every acceptance matches an earlier honest signing event.

    Returns ``(True, None)`` or ``(False, witness_event)``. Each honest
    begin_signing(pk, digest, t_sign) can justify at most one acceptance.
    """
    signed = set()
    used = set()
    for ev in trace:
        if ev.kind == "begin_signing" and ev.role == "gnb":
            signed.add((ev.pk, ev.digest, ev.t_sign))
        elif ev.kind == "authentication_successful":
            key = (ev.pk, ev.digest, ev.t_sign)
            if key not in signed or key in used:
                return False, ev
            used.add(key)
    return True, None


def attacker_acceptances(trace):
    return [ev for ev in trace
            if ev.kind == "authentication_successful" and ev.origin == "attacker"]


def _base_actors(**extra):
    actors = {"pkg": "pkg", "amf": "amf", "gnb": "gnb", "ue": "ue"}
    actors.update(extra)
    return actors


def _bootstrap(robust_key=0, validity_s=protocol.DEFAULT_KEY_VALIDITY_S):
    return [
        Action(0, "pkg", "setup"),
        Action(0, "gnb", "attach", {"pkg": "pkg", "amf": "amf", "cell": 0x12345678A}),
        Action(0, "gnb", "request_key", {"robust_key": robust_key, "validity_s": validity_s}),
    ]


ACCEPT = "accepted"


def _rej(reason):
    return f"rejected({reason})"


def builtin_scenarios(forge_attempts=1000):
    honest_script = _bootstrap()
    for i in range(5):
        honest_script += [Action(10 + 160 * i, "gnb", "broadcast"),
                          Action(13 + 160 * i, "ue", "deliver")]

    return [
        Scenario("honest", _base_actors(), honest_script, [ACCEPT] * 5,
                 "Key issue through the AMF, then five signed SIB1 periods.",
                 adversarial=False),
        Scenario("fbs_unsigned", _base_actors(attacker="attacker"), _bootstrap() + [
            Action(10, "attacker", "inject_unsigned"),
            Action(12, "ue", "deliver"),
        ], [_rej("malformed")],
            "Fake base station broadcasts SIB1 without authentication; UE keeps searching."),
        Scenario("fbs_tamper", _base_actors(attacker="attacker"), _bootstrap() + [
            Action(10, "gnb", "broadcast"),
            Action(11, "attacker", "tamper", {"offset": 7, "mask": 0x40}),
            Action(12, "ue", "deliver"),
        ], [_rej("bad-signature")],
            "Attacker flips SIB1 bits in flight."),
        Scenario("replay_expired_key", _base_actors(attacker="attacker"), _bootstrap() + [
            Action(10, "gnb", "broadcast"),
            Action(11, "attacker", "capture"),
            Action(12, "ue", "deliver"),
            Action(601_000, "attacker", "replay"),
            Action(601_002, "ue", "deliver"),
        ], [ACCEPT, _rej("key-expired")],
            "Captured payload replayed after the 10-minute key expiry."),
        Scenario("relay_delay", _base_actors(attacker="attacker"), _bootstrap() + [
            Action(10, "gnb", "broadcast", {"dt": 1000}),
            Action(11, "attacker", "capture"),
            Action(12, "ue", "deliver"),
            Action(70_010, "attacker", "replay"),
            Action(70_012, "ue", "deliver"),
        ], [ACCEPT, _rej("stale")],
            "Captured payload relayed 70 s later with dt = 1000 ms."),
        Scenario("seq_revoked", _base_actors(), _bootstrap(robust_key=1) + [
            Action(10, "gnb", "broadcast"),
            Action(12, "ue", "deliver"),
            Action(100, "pkg", "bump_seq", {"cell": 0x12345678A}),
            Action(110, "gnb", "broadcast"),
            Action(112, "ue", "deliver"),
            Action(200, "gnb", "request_key", {"robust_key": 1}),
            Action(210, "gnb", "broadcast"),
            Action(212, "ue", "deliver"),
        ], [ACCEPT, _rej("bad-signature"), ACCEPT],
            "PKG bumps the cell's sequence number; the old key stops verifying until re-keyed."),
        Scenario("compromised_pkg", _base_actors(attacker="attacker"), _bootstrap(robust_key=1) + [
            Action(10, "gnb", "broadcast"),
            Action(12, "ue", "deliver"),
            Action(20, "pkg", "leak_msk", {"to": "attacker"}),
            Action(30, "attacker", "forge", {"target": "gnb", "n": forge_attempts}),
            Action(32, "ue", "deliver"),
        ], [ACCEPT] + [_rej("bad-signature")] * forge_attempts,
            "Attacker holds the PKG master secret but not the gNB's share u1."),
        Scenario("unknown_operator", _base_actors(attacker="attacker"), _bootstrap() + [
            Action(10, "attacker", "rogue_broadcast", {"operator": "999-99"}),
            Action(12, "ue", "deliver"),
        ], [_rej("untrusted-operator")],
            "Validly signed SIB1 from an operator the UE has no trust anchor for."),
        Scenario("fbs_rogue_pkg", _base_actors(attacker="attacker"), _bootstrap() + [
            Action(10, "attacker", "rogue_broadcast", {"operator": "999-99", "claim": "001-01"}),
            Action(12, "ue", "deliver"),
        ], [_rej("bad-signature")],
            "Attacker signs under its own PKG but claims the home operator."),
    ]


def get_scenario(name, **kw):
    for sc in builtin_scenarios(**kw):
        if sc.name == name:
            return sc
    raise KeyError(name)
