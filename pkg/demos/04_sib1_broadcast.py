# One SIB1 period end to end: key issue, the 111-byte record, and how a UE
# judges it at different moments.
import random

from e2ibs import protocol, scheme
from e2ibs.protocol import TrustAnchor, TrustStore, verify_payload

rng = random.Random(11)
now_s = 1_760_000_000
master = scheme.setup(rng=rng)
ue = TrustStore([TrustAnchor(b"001-01", master.mpk, now_s + 365 * 86400)])

key, ident = protocol.issue_bs_key(master, nrcell_id=0x00ABCDEF1, now=now_s)
print("identity:", ident, "->", ident.pack().hex(" "))

mib, sib1 = b"\x4a\x10\x00", b"plmn=001-01;tac=7;cell=0x00ABCDEF1"
t_sign = now_s * 1000
record = protocol.build_payload(mib, sib1, key, ident, scheme.precompute_nonce(rng=rng),
                                t_sign, dt=1000).to_bytes()
print("record:", len(record), "bytes")

for label, at in [("on time", t_sign + 20),
                  ("1.05 s late", t_sign + 1050),
                  ("11 minutes later", t_sign + 660_000)]:
    print(f"{label:>18}:", verify_payload(record, mib, sib1, ue, b"001-01", at))
print(f"{'edited SIB1':>18}:", verify_payload(record, mib, sib1 + b"!", ue, b"001-01", t_sign))
print(f"{'foreign operator':>18}:", verify_payload(record, mib, sib1, ue, b"310-26", t_sign))
