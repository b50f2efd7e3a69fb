# Every identity of the scheme in Z_23, small enough to check by hand.
# The hashes are pinned so the numbers come out round.
import random

from e2ibs import scheme
from e2ibs.group import ToyGroup
from e2ibs.hashing import index_label
from e2ibs.scheme import NoncePacket

g = ToyGroup(23)

scheme.prf = lambda key, label, group: 7 if label.startswith(b"id:") else {
    index_label(1): 3, index_label(2): 5}.get(label, 1)
scheme.h1_indices = lambda *a, **kw: (1, 2)
scheme.h2_challenge = lambda m, R, group: 2

master = scheme.setup(8, 2, group=g, kappa=0, rng=random.Random(0))
print("Z =", list(master.mpk.elements))

key = scheme.extract(master, b"U")
print(f"x = 3 + 5 + 7 = {key.x},  C = {key.commitment}")
print("key equation: x*P =", g.base_mul(key.x), " Z1 + Z2 + C =", g.add(g.sum([3, 5]), key.commitment))

sig = scheme.sign(b"m", key, NoncePacket(4, 4, g.encode(4)))
print(f"s = 4 - 2*15 mod 23 = {sig.s},  h = {sig.h}")

R2 = scheme.nonce_commitment(sig, b"U", key.commitment, master.mpk)
print(f"R' = 20 + 2*15 mod 23 = {R2}  (the nonce commitment was 4)")
