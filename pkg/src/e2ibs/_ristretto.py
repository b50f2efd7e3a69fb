"""Pure-Python ristretto255 over edwards25519 in extended coordinates.

Points are kept as (X, Y, Z, T) tuples with x = X/Z, y = Y/Z, x*y = T/Z so
that additions need no field inversion. Only encode/decode touch square roots.
Encoding and decoding follow RFC 9496.
"""

try:
    from gmpy2 import mpz
except ImportError:  # plain ints work, about 3x slower
    mpz = int

P = mpz(2**255 - 19)
L = 2**252 + 27742317777372353535851937790883648493

D = mpz(37095705934669439343138083508754565189542113879843219016388785533085940283555)
D2 = 2 * D % P
SQRT_M1 = mpz(19681161376707505956807079304988542015446066515923890162744021073123829784752)
INVSQRT_A_MINUS_D = mpz(54469307008909316920995813868745141605393597292927456921205312896311721017578)

BASE_ENCODING = bytes.fromhex(
    "e2f2ae0a6abc4e71a884a961c500515f58e30b6aa582dd8db6a65945e08d2d76"
)

_EXP_P58 = (P - 5) // 8

IDENTITY = (mpz(0), mpz(1), mpz(1), mpz(0))


def _is_negative(x):
    return x % P & 1


def _abs(x):
    x %= P
    return P - x if x & 1 else x


def sqrt_ratio_m1(u, v):
    """Return (was_square, r) with r = +sqrt(u/v) or +sqrt(i*u/v)."""
    v3 = v * v % P * v % P
    v7 = v3 * v3 % P * v % P
    r = u * v3 % P * pow(u * v7 % P, _EXP_P58, P) % P
    check = v * r % P * r % P
    u %= P
    correct = check == u
    flipped = check == (-u) % P
    flipped_i = check == (-u * SQRT_M1) % P
    if flipped or flipped_i:
        r = r * SQRT_M1 % P
    return correct or flipped, _abs(r)


def decode(data):
    """Decode 32 bytes to an extended point; None if not a canonical encoding."""
    s = mpz(int.from_bytes(data, "little"))
    if s >= P or s & 1:
        return None
    ss = s * s % P
    u1 = (1 - ss) % P
    u2 = (1 + ss) % P
    u2_sqr = u2 * u2 % P
    v = (-(D * u1 % P * u1) - u2_sqr) % P
    was_square, invsqrt = sqrt_ratio_m1(1, v * u2_sqr % P)
    den_x = invsqrt * u2 % P
    den_y = invsqrt * den_x % P * v % P
    x = _abs(2 * s * den_x)
    y = u1 * den_y % P
    t = x * y % P
    if not was_square or t & 1 or y == 0:
        return None
    return (x, y, 1, t)


def encode(pt):
    X0, Y0, Z0, T0 = pt
    u1 = (Z0 + Y0) * (Z0 - Y0) % P
    u2 = X0 * Y0 % P
    _, invsqrt = sqrt_ratio_m1(1, u1 * u2 % P * u2 % P)
    den1 = invsqrt * u1 % P
    den2 = invsqrt * u2 % P
    z_inv = den1 * den2 % P * T0 % P
    if _is_negative(T0 * z_inv):
        x = Y0 * SQRT_M1 % P
        y = X0 * SQRT_M1 % P
        den_inv = den1 * INVSQRT_A_MINUS_D % P
    else:
        x, y, den_inv = X0, Y0, den2
    if _is_negative(x * z_inv):
        y = -y
    s = _abs(den_inv * (Z0 - y))
    return int(s).to_bytes(32, "little")


def equal(p1, p2):
    X1, Y1, _, _ = p1
    X2, Y2, _, _ = p2
    return (X1 * Y2 - Y1 * X2) % P == 0 or (Y1 * Y2 - X1 * X2) % P == 0


def add(p1, p2):
    X1, Y1, Z1, T1 = p1
    X2, Y2, Z2, T2 = p2
    a = (Y1 - X1) * (Y2 - X2) % P
    b = (Y1 + X1) * (Y2 + X2) % P
    c = T1 * D2 % P * T2 % P
    d = 2 * Z1 * Z2 % P
    e, f, g, h = b - a, d - c, d + c, b + a
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def neg(pt):
    X, Y, Z, T = pt
    return (-X % P, Y, Z, -T % P)


def double(pt):
    X1, Y1, Z1, _ = pt
    a = X1 * X1 % P
    b = Y1 * Y1 % P
    c = 2 * Z1 * Z1 % P
    xy = X1 + Y1
    e = (xy * xy - a - b) % P
    g = b - a
    f = g - c
    h = -a - b
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def _to_niels(pt):
    # (Y+X, Y-X, 2dT) with Z normalised to 1; cheaper mixed addition
    X, Y, Z, T = pt
    zi = pow(Z, P - 2, P)
    x, y = X * zi % P, Y * zi % P
    return ((y + x) % P, (y - x) % P, x * y % P * D2 % P)


def _add_niels(p1, n):
    X1, Y1, Z1, T1 = p1
    ypx, ymx, t2d = n
    a = (Y1 - X1) * ymx % P
    b = (Y1 + X1) * ypx % P
    c = T1 * t2d % P
    d = 2 * Z1
    e, f, g, h = b - a, d - c, d + c, b + a
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def scalar_mult(k, pt):
    """Variable-base multiplication, signed 5-bit window (wNAF)."""
    k %= L
    if k == 0:
        return IDENTITY
    # odd multiples 1P, 3P, ..., 15P
    twice = double(pt)
    table = [pt]
    for _ in range(7):
        table.append(add(table[-1], twice))
    naf = []
    while k:
        if k & 1:
            digit = k & 31
            if digit >= 16:
                digit -= 32
            k -= digit
        else:
            digit = 0
        naf.append(digit)
        k >>= 1
    acc = IDENTITY
    for digit in reversed(naf):
        acc = double(acc)
        if digit > 0:
            acc = add(acc, table[digit >> 1])
        elif digit < 0:
            acc = add(acc, neg(table[(-digit) >> 1]))
    return acc


class FixedBaseTable:
    """Comb table for a fixed point: 64 windows of 4 bits, 15 entries each."""

    def __init__(self, pt):
        rows = []
        window_base = pt
        for _ in range(64):
            row = [window_base]
            for _ in range(14):
                row.append(add(row[-1], window_base))
            rows.append([_to_niels(q) for q in row])
            window_base = add(row[-1], window_base)  # 16 * previous base
        self._rows = rows

    def mult(self, k):
        k %= L
        acc = IDENTITY
        rows = self._rows
        i = 0
        while k:
            nib = k & 15
            if nib:
                acc = _add_niels(acc, rows[i][nib - 1])
            k >>= 4
            i += 1
        return acc


BASE = decode(BASE_ENCODING)
