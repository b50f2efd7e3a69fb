# The base station keeps half of its key to itself, so a leaked PKG secret is
# not enough to sign. Sequence numbers retire old keys.
import random

from e2ibs import robust, scheme

rng = random.Random(7)
master = scheme.setup(rng=rng)
ident = b"cell-0001"

share = robust.user_keygen(rng=rng)                   # station: u1, Q = u1*P
ext = robust.extract_blind(master, ident, share.Q, seq=0)   # PKG
print("extraction record:", len(ext.to_bytes()), "bytes")
print("station accepts PKG answer:", robust.verify_extraction(ext, share, ident, master.mpk))

key = robust.complete_key(share, ext, ident, master.mpk)
sig = scheme.sign(b"hello", key, rng=rng)
print("verifies at seq 0:", scheme.verify(b"hello", sig, ident, ext.C, master.mpk, seq=0))

# Everything the PKG knows, but not u1:
pkg_only = scheme.UserKey(ident, ext.z, ext.C, 0)
forged = scheme.sign(b"hello", pkg_only, rng=rng)
print("PKG-only key verifies:", scheme.verify(b"hello", forged, ident, ext.C, master.mpk, seq=0))

# After the PKG publishes seq 1, the old key stops verifying.
print("old key at seq 1:", scheme.verify(b"hello", sig, ident, ext.C, master.mpk, seq=1))
