# A PKG sets up, hands a base station its key, and anyone holding the master
# public key checks signatures from that station with no certificate.
import random

from e2ibs import scheme
from e2ibs.group import CountingGroup, RISTRETTO255

rng = random.Random(2024)

master = scheme.setup(rng=rng)          # t = 1024 master elements, k = 18
print("security level:", round(master.params.security_bits, 2), "bits")
print("master public key:", len(master.mpk.to_bytes()), "bytes")

key = scheme.extract(master, b"cell-0001")
print("commitment C:", key.commitment_bytes.hex())

msg = b"system information, period 42"
sig = scheme.sign(msg, key, rng=rng)
print("signature:", len(sig.to_bytes()), "bytes")
print("valid:", scheme.verify(msg, sig, b"cell-0001", key.commitment_bytes, master.mpk))
print("valid after tampering:", scheme.verify(msg + b"!", sig, b"cell-0001",
                                              key.commitment_bytes, master.mpk))

# The verifier rebuilds the station's public key from k additions, then does
# an ordinary two-multiplication Schnorr check. Count it.
cg = CountingGroup(RISTRETTO255)
m2 = scheme.setup(group=cg, rng=rng)
k2 = scheme.extract(m2, b"cell-0002")
nonce = scheme.precompute_nonce(cg, rng)   # offline part: one multiplication
cg.counter.reset()
s2 = scheme.sign(msg, k2, nonce)
print("online sign:", cg.counter)
cg.counter.reset()
scheme.verify(msg, s2, b"cell-0002", k2.commitment, m2.mpk)
print("verify:", cg.counter)
