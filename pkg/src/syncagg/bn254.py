"""Pure-Python BN254 (alt_bn128) curve and optimal-ate pairing kernel.

Arithmetic is backed by gmpy2 integers.  This module knows nothing about the
package's group abstraction; it exposes raw curve/field operations that
``groups`` wraps.

Representation conventions
--------------------------
- Fp elements: gmpy2 ``mpz`` reduced mod ``P``.
- Fp2 = Fp[u]/(u^2 + 1): pair ``(c0, c1)`` meaning ``c0 + c1*u``.
- Fp6 = Fp2[v]/(v^3 - XI) with ``XI = 9 + u``: triple ``(a0, a1, a2)``.
- Fp12 = Fp6[w]/(w^2 - v): pair ``(b0, b1)``.
- G1 points: affine ``(x, y)`` of mpz, or ``None`` for the point at infinity.
  Internal Jacobian triples ``(X, Y, Z)``.
- G2 points: same shapes with Fp2 coordinates.

The Miller loop processes the signed binary expansion of ``6*U + 2`` and
applies the two Frobenius correction lines, sharing one squaring chain across
all pairs of a product (multi-pairing).  A fixed G2 argument can be
"prepared" once (`g2_prepare`), caching its line coefficients so later
pairings against it skip all G2 point arithmetic.  The final exponentiation
uses the standard easy part followed by the hard-part addition chain with
Granger-Scott cyclotomic squarings.

The hot functions are deliberately written as flat sequences of mpz
operations; the structured Fp2/Fp6 helpers are kept for the cold paths.

Not constant time.  Do not use for anything that handles real secrets.
"""

from gmpy2 import invert, mpz

# Base field modulus, subgroup order, and the BN parameter.
P = mpz(21888242871839275222246405745257275088696311157297823662689037894645226208583)
ORDER = mpz(21888242871839275222246405745257275088548364400416034343698204186575808495617)
U = mpz(4965661367192848881)

CURVE_B = mpz(3)

# Signed binary digits of 6*U + 2, least significant first.
ATE_DIGITS = [
    0, 0, 0, 1, 0, 1, 0, -1, 0, 0, 1, -1, 0, 0, 1, 0,
    0, 1, 1, 0, -1, 0, 0, 1, 0, -1, 0, 0, 0, 0, 1, 1,
    1, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 1,
    1, 0, 0, -1, 0, 0, 0, 1, 1, 0, -1, 0, 0, 1, 0, 1, 1,
]

G1_GEN = (mpz(1), mpz(2))
G2_GEN = (
    (mpz(10857046999023057135944570762232829481370756359578518086990519993285655852781),
     mpz(11559732032986387107991004021392285783925812861821192530917403151452391805634)),
    (mpz(8495653923123431417604973247489272438418190587263600148770280649306958101930),
     mpz(4082367875863433681332203403145435568316851327593401208105741076214120093531)),
)

FP2_ZERO = (mpz(0), mpz(0))
FP2_ONE = (mpz(1), mpz(0))
XI = (mpz(9), mpz(1))

# ---------------------------------------------------------------------------
# Fp2 arithmetic (structured helpers; hot paths inline these by hand)
# ---------------------------------------------------------------------------


def fp2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fp2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fp2_neg(a):
    return ((-a[0]) % P, (-a[1]) % P)


def fp2_conj(a):
    return (a[0], (-a[1]) % P)


def fp2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    t2 = (a0 + a1) * (b0 + b1)
    return ((t0 - t1) % P, (t2 - t0 - t1) % P)


def fp2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, (a0 * a1 * 2) % P)


def fp2_mul_scalar(a, s):
    return (a[0] * s % P, a[1] * s % P)


def fp2_mul_xi(a):
    # (c0 + c1 u) * (9 + u)
    a0, a1 = a
    return ((9 * a0 - a1) % P, (a0 + 9 * a1) % P)


def fp2_inv(a):
    a0, a1 = a
    norm = (a0 * a0 + a1 * a1) % P
    ninv = invert(norm, P)
    return (a0 * ninv % P, (-a1) * ninv % P)


def fp2_is_zero(a):
    return a[0] == 0 and a[1] == 0


def fp2_exp(a, e):
    result = FP2_ONE
    for bit in bin(int(e))[2:]:
        result = fp2_sqr(result)
        if bit == "1":
            result = fp2_mul(result, a)
    return result


# ---------------------------------------------------------------------------
# Frobenius constants, derived from XI at import time
# ---------------------------------------------------------------------------

# gamma1[i] = XI^(i*(P-1)/6) in Fp2, i = 1..5
_G = [fp2_exp(XI, i * (P - 1) // 6) for i in range(1, 6)]
GAMMA_11, GAMMA_12, GAMMA_13, GAMMA_14, GAMMA_15 = _G

# gamma2[i] = XI^(i*(P*P-1)/6); these land in Fp (second coefficient zero)
_G2C = [fp2_exp(XI, i * (P * P - 1) // 6) for i in range(1, 6)]
assert all(c[1] == 0 for c in _G2C)
GAMMA_21, GAMMA_22, GAMMA_23, GAMMA_24, GAMMA_25 = [c[0] for c in _G2C]

# Twist coefficient b' = 3 / XI for the G2 curve y^2 = x^3 + b'.
TWIST_B = fp2_mul_scalar(fp2_inv(XI), 3)


# ---------------------------------------------------------------------------
# Fp6 arithmetic (triples of Fp2)
# ---------------------------------------------------------------------------

FP6_ZERO = (FP2_ZERO, FP2_ZERO, FP2_ZERO)
FP6_ONE = (FP2_ONE, FP2_ZERO, FP2_ZERO)


def fp6_add(a, b):
    return (fp2_add(a[0], b[0]), fp2_add(a[1], b[1]), fp2_add(a[2], b[2]))


def fp6_sub(a, b):
    return (fp2_sub(a[0], b[0]), fp2_sub(a[1], b[1]), fp2_sub(a[2], b[2]))


def fp6_neg(a):
    return (fp2_neg(a[0]), fp2_neg(a[1]), fp2_neg(a[2]))


def fp6_mul_tau(a):
    # multiply by v: (a0, a1, a2) -> (XI*a2, a0, a1)
    return (fp2_mul_xi(a[2]), a[0], a[1])


def fp6_mul(a, b):
    # Karatsuba over the three coefficients; flattened Fp2 products.
    # Inputs may be unreduced (bounded multiples of P); outputs are reduced.
    (a00, a01), (a10, a11), (a20, a21) = a
    (b00, b01), (b10, b11), (b20, b21) = b

    # v0 = a0*b0, v1 = a1*b1, v2 = a2*b2
    t = (a00 + a01) * (b00 + b01)
    v00 = a00 * b00
    v01 = a01 * b01
    v0r = v00 - v01
    v0i = t - v00 - v01
    t = (a10 + a11) * (b10 + b11)
    v10 = a10 * b10
    v11 = a11 * b11
    v1r = v10 - v11
    v1i = t - v10 - v11
    t = (a20 + a21) * (b20 + b21)
    v20 = a20 * b20
    v21 = a21 * b21
    v2r = v20 - v21
    v2i = t - v20 - v21

    # c0 = v0 + XI*((a1+a2)(b1+b2) - v1 - v2)
    s0 = a10 + a20
    s1 = a11 + a21
    r0 = b10 + b20
    r1 = b11 + b21
    t = (s0 + s1) * (r0 + r1)
    m0 = s0 * r0
    m1 = s1 * r1
    x0 = m0 - m1 - v1r - v2r
    x1 = t - m0 - m1 - v1i - v2i
    c0 = ((v0r + 9 * x0 - x1) % P, (v0i + x0 + 9 * x1) % P)

    # c1 = (a0+a1)(b0+b1) - v0 - v1 + XI*v2
    s0 = a00 + a10
    s1 = a01 + a11
    r0 = b00 + b10
    r1 = b01 + b11
    t = (s0 + s1) * (r0 + r1)
    m0 = s0 * r0
    m1 = s1 * r1
    c1 = ((m0 - m1 - v0r - v1r + 9 * v2r - v2i) % P,
          (t - m0 - m1 - v0i - v1i + v2r + 9 * v2i) % P)

    # c2 = (a0+a2)(b0+b2) - v0 - v2 + v1
    s0 = a00 + a20
    s1 = a01 + a21
    r0 = b00 + b20
    r1 = b01 + b21
    t = (s0 + s1) * (r0 + r1)
    m0 = s0 * r0
    m1 = s1 * r1
    c2 = ((m0 - m1 - v0r - v2r + v1r) % P,
          (t - m0 - m1 - v0i - v2i + v1i) % P)
    return (c0, c1, c2)


def fp6_sqr(a):
    a0, a1, a2 = a
    s0 = fp2_sqr(a0)
    ab = fp2_mul(a0, a1)
    s1 = fp2_add(ab, ab)
    s2 = fp2_sqr(fp2_add(fp2_sub(a0, a1), a2))
    bc = fp2_mul(a1, a2)
    s3 = fp2_add(bc, bc)
    s4 = fp2_sqr(a2)
    c0 = fp2_add(s0, fp2_mul_xi(s3))
    c1 = fp2_add(s1, fp2_mul_xi(s4))
    c2 = fp2_sub(fp2_add(fp2_add(s1, s2), s3), fp2_add(s0, s4))
    return (c0, c1, c2)


def fp6_mul_fp2(a, s):
    return (fp2_mul(a[0], s), fp2_mul(a[1], s), fp2_mul(a[2], s))


def fp6_inv(a):
    a0, a1, a2 = a
    t0 = fp2_sqr(a0)
    t1 = fp2_sqr(a1)
    t2 = fp2_sqr(a2)
    t3 = fp2_mul(a0, a1)
    t4 = fp2_mul(a0, a2)
    t5 = fp2_mul(a1, a2)
    c0 = fp2_sub(t0, fp2_mul_xi(t5))
    c1 = fp2_sub(fp2_mul_xi(t2), t3)
    c2 = fp2_sub(t1, t4)
    f = fp2_add(fp2_mul(a0, c0),
                fp2_mul_xi(fp2_add(fp2_mul(a2, c1), fp2_mul(a1, c2))))
    finv = fp2_inv(f)
    return (fp2_mul(c0, finv), fp2_mul(c1, finv), fp2_mul(c2, finv))


# ---------------------------------------------------------------------------
# Fp12 arithmetic (pairs of Fp6)
# ---------------------------------------------------------------------------

FP12_ONE = (FP6_ONE, FP6_ZERO)


def fp12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    v0 = fp6_mul(a0, b0)
    v1 = fp6_mul(a1, b1)
    sa = ((a0[0][0] + a1[0][0], a0[0][1] + a1[0][1]),
          (a0[1][0] + a1[1][0], a0[1][1] + a1[1][1]),
          (a0[2][0] + a1[2][0], a0[2][1] + a1[2][1]))
    sb = ((b0[0][0] + b1[0][0], b0[0][1] + b1[0][1]),
          (b0[1][0] + b1[1][0], b0[1][1] + b1[1][1]),
          (b0[2][0] + b1[2][0], b0[2][1] + b1[2][1]))
    m = fp6_mul(sa, sb)
    c1 = ((m[0][0] - v0[0][0] - v1[0][0]) % P, (m[0][1] - v0[0][1] - v1[0][1]) % P), \
         ((m[1][0] - v0[1][0] - v1[1][0]) % P, (m[1][1] - v0[1][1] - v1[1][1]) % P), \
         ((m[2][0] - v0[2][0] - v1[2][0]) % P, (m[2][1] - v0[2][1] - v1[2][1]) % P)
    # c0 = v0 + tau(v1)
    w0 = 9 * v1[2][0] - v1[2][1]
    w1 = v1[2][0] + 9 * v1[2][1]
    c0 = ((v0[0][0] + w0) % P, (v0[0][1] + w1) % P), \
         ((v0[1][0] + v1[0][0]) % P, (v0[1][1] + v1[0][1]) % P), \
         ((v0[2][0] + v1[1][0]) % P, (v0[2][1] + v1[1][1]) % P)
    return (c0, c1)


def fp12_sqr(a):
    a0, a1 = a
    v0 = fp6_mul(a0, a1)
    # s = a0 + a1 ; t = a0 + tau(a1)
    s = ((a0[0][0] + a1[0][0], a0[0][1] + a1[0][1]),
         (a0[1][0] + a1[1][0], a0[1][1] + a1[1][1]),
         (a0[2][0] + a1[2][0], a0[2][1] + a1[2][1]))
    x0 = 9 * a1[2][0] - a1[2][1]
    x1 = a1[2][0] + 9 * a1[2][1]
    t = ((a0[0][0] + x0, a0[0][1] + x1),
         (a0[1][0] + a1[0][0], a0[1][1] + a1[0][1]),
         (a0[2][0] + a1[1][0], a0[2][1] + a1[1][1]))
    m = fp6_mul(s, t)
    # c0 = m - v0 - tau(v0)
    w0 = 9 * v0[2][0] - v0[2][1]
    w1 = v0[2][0] + 9 * v0[2][1]
    c0 = ((m[0][0] - v0[0][0] - w0) % P, (m[0][1] - v0[0][1] - w1) % P), \
         ((m[1][0] - v0[1][0] - v0[0][0]) % P, (m[1][1] - v0[1][1] - v0[0][1]) % P), \
         ((m[2][0] - v0[2][0] - v0[1][0]) % P, (m[2][1] - v0[2][1] - v0[1][1]) % P)
    c1 = ((2 * v0[0][0] % P, 2 * v0[0][1] % P),
          (2 * v0[1][0] % P, 2 * v0[1][1] % P),
          (2 * v0[2][0] % P, 2 * v0[2][1] % P))
    return (c0, c1)


def fp12_conj(a):
    return (a[0], fp6_neg(a[1]))


def fp12_inv(a):
    t = fp6_sub(fp6_sqr(a[0]), fp6_mul_tau(fp6_sqr(a[1])))
    tinv = fp6_inv(t)
    return (fp6_mul(a[0], tinv), fp6_neg(fp6_mul(a[1], tinv)))


def fp12_frobenius(a):
    (a0, a1, a2), (c0, c1, c2) = a
    b0 = (fp2_conj(a0),
          fp2_mul(fp2_conj(a1), GAMMA_12),
          fp2_mul(fp2_conj(a2), GAMMA_14))
    b1 = (fp2_mul(fp2_conj(c0), GAMMA_11),
          fp2_mul(fp2_conj(c1), GAMMA_13),
          fp2_mul(fp2_conj(c2), GAMMA_15))
    return (b0, b1)


def fp12_frobenius_p2(a):
    (a0, a1, a2), (c0, c1, c2) = a
    b0 = (a0, fp2_mul_scalar(a1, GAMMA_22), fp2_mul_scalar(a2, GAMMA_24))
    b1 = (fp2_mul_scalar(c0, GAMMA_21),
          fp2_mul_scalar(c1, GAMMA_23),
          fp2_mul_scalar(c2, GAMMA_25))
    return (b0, b1)


def fp12_exp(a, e):
    e = int(e)
    if e < 0:
        raise ValueError("negative exponent")
    result = FP12_ONE
    if e == 0:
        return result
    for bit in bin(e)[2:]:
        result = fp12_sqr(result)
        if bit == "1":
            result = fp12_mul(result, a)
    return result


def fp12_cyclo_sqr(a):
    # Granger-Scott squaring; valid only in the cyclotomic subgroup.
    ((x00r, x00i), (x01r, x01i), (x02r, x02i)), \
        ((x10r, x10i), (x11r, x11i), (x12r, x12i)) = a
    t0r = (x11r + x11i) * (x11r - x11i)
    t0i = 2 * x11r * x11i
    t1r = (x00r + x00i) * (x00r - x00i)
    t1i = 2 * x00r * x00i
    sr = x11r + x00r
    si = x11i + x00i
    t6r = ((sr + si) * (sr - si) - t0r - t1r) % P
    t6i = (2 * sr * si - t0i - t1i) % P
    t2r = (x02r + x02i) * (x02r - x02i)
    t2i = 2 * x02r * x02i
    t3r = (x10r + x10i) * (x10r - x10i)
    t3i = 2 * x10r * x10i
    sr = x02r + x10r
    si = x02i + x10i
    t7r = ((sr + si) * (sr - si) - t2r - t3r) % P
    t7i = (2 * sr * si - t2i - t3i) % P
    t4r = (x12r + x12i) * (x12r - x12i)
    t4i = 2 * x12r * x12i
    t5r = (x01r + x01i) * (x01r - x01i)
    t5i = 2 * x01r * x01i
    sr = x12r + x01r
    si = x12i + x01i
    ur = (sr + si) * (sr - si) - t4r - t5r
    ui = 2 * sr * si - t4i - t5i
    t8r = (9 * ur - ui) % P
    t8i = (ur + 9 * ui) % P
    ar = 9 * t0r - t0i + t1r
    ai = t0r + 9 * t0i + t1i
    br = 9 * t2r - t2i + t3r
    bi = t2r + 9 * t2i + t3i
    cr = 9 * t4r - t4i + t5r
    ci = t4r + 9 * t4i + t5i
    return (
        ((3 * ar - 2 * x00r) % P, (3 * ai - 2 * x00i) % P),
        ((3 * br - 2 * x01r) % P, (3 * bi - 2 * x01i) % P),
        ((3 * cr - 2 * x02r) % P, (3 * ci - 2 * x02i) % P),
    ), (
        ((3 * t8r + 2 * x10r) % P, (3 * t8i + 2 * x10i) % P),
        ((3 * t6r + 2 * x11r) % P, (3 * t6i + 2 * x11i) % P),
        ((3 * t7r + 2 * x12r) % P, (3 * t7i + 2 * x12i) % P),
    )


def _naf(k):
    digits = []
    k = int(k)
    while k:
        if k & 1:
            d = 2 - (k & 3)
            k -= d
        else:
            d = 0
        digits.append(d)
        k >>= 1
    return digits


_U_NAF = _naf(U)


def fp12_cyclo_exp_u(a):
    # a^U using cyclotomic squarings; inversion is conjugation here.
    ainv = fp12_conj(a)
    result = None
    for d in reversed(_U_NAF):
        if result is not None:
            result = fp12_cyclo_sqr(result)
        if d == 1:
            result = fp12_mul(result, a) if result is not None else a
        elif d == -1:
            result = fp12_mul(result, ainv) if result is not None else ainv
    return result if result is not None else FP12_ONE


# ---------------------------------------------------------------------------
# G1 (curve over Fp): Jacobian coordinates
# ---------------------------------------------------------------------------


def g1_double(pt):
    x, y, z = pt
    if y == 0:
        return (mpz(0), mpz(1), mpz(0))
    a = x * x % P
    b = y * y % P
    c = b * b % P
    s = x + b
    d = 2 * (s * s - a - c) % P
    e = 3 * a
    f = e * e % P
    x3 = (f - 2 * d) % P
    y3 = (e * (d - x3) - 8 * c) % P
    z3 = 2 * y * z % P
    return (x3, y3, z3)


def g1_add(p1, p2):
    x1, y1, z1 = p1
    x2, y2, z2 = p2
    if z1 == 0:
        return p2
    if z2 == 0:
        return p1
    z1z1 = z1 * z1 % P
    z2z2 = z2 * z2 % P
    u1 = x1 * z2z2 % P
    u2 = x2 * z1z1 % P
    s1 = y1 * z2 * z2z2 % P
    s2 = y2 * z1 * z1z1 % P
    h = (u2 - u1) % P
    r = (s2 - s1) % P
    if h == 0:
        if r == 0:
            return g1_double(p1)
        return (mpz(0), mpz(1), mpz(0))
    hh = h * h % P
    hhh = h * hh % P
    v = u1 * hh % P
    x3 = (r * r - hhh - 2 * v) % P
    y3 = (r * (v - x3) - s1 * hhh) % P
    z3 = z1 * z2 * h % P
    return (x3, y3, z3)


def g1_neg_jac(pt):
    return (pt[0], (-pt[1]) % P, pt[2])


def g1_to_affine(pt):
    x, y, z = pt
    if z == 0:
        return None
    zinv = invert(z, P)
    zinv2 = zinv * zinv % P
    return (x * zinv2 % P, y * zinv2 * zinv % P)


def g1_from_affine(a):
    if a is None:
        return (mpz(0), mpz(1), mpz(0))
    return (a[0], a[1], mpz(1))


def g1_is_on_curve(a):
    if a is None:
        return True
    x, y = a
    return (y * y - x * x * x - CURVE_B) % P == 0


def _wnaf(k, w):
    digits = []
    k = int(k)
    full = 1 << w
    half = 1 << (w - 1)
    while k:
        if k & 1:
            d = k % full
            if d >= half:
                d -= full
            k -= d
        else:
            d = 0
        digits.append(d)
        k >>= 1
    return digits


def g1_mul(a, k):
    """Multiply affine point ``a`` by integer ``k``; returns affine."""
    k = int(k) % ORDER
    if a is None or k == 0:
        return None
    base = g1_from_affine(a)
    dbl = g1_double(base)
    table = [base]
    for _ in range(7):
        table.append(g1_add(table[-1], dbl))
    acc = (mpz(0), mpz(1), mpz(0))
    for d in reversed(_wnaf(k, 5)):
        acc = g1_double(acc)
        if d > 0:
            acc = g1_add(acc, table[d >> 1])
        elif d < 0:
            acc = g1_add(acc, g1_neg_jac(table[(-d) >> 1]))
    return g1_to_affine(acc)


# ---------------------------------------------------------------------------
# G2 (curve over Fp2): Jacobian coordinates, flattened arithmetic
# ---------------------------------------------------------------------------

_G2_INF = (FP2_ZERO, FP2_ONE, FP2_ZERO)


def g2_double(pt):
    (xr, xi), (yr, yi), (zr, zi) = pt
    if yr == 0 and yi == 0:
        return _G2_INF
    # a = x^2, b = y^2, c = b^2
    ar = (xr + xi) * (xr - xi) % P
    ai = 2 * xr * xi % P
    br = (yr + yi) * (yr - yi) % P
    bi = 2 * yr * yi % P
    cr = (br + bi) * (br - bi) % P
    ci = 2 * br * bi % P
    # d = 2*((x+b)^2 - a - c)
    sr = xr + br
    si = xi + bi
    dr = 2 * ((sr + si) * (sr - si) - ar - cr) % P
    di = 2 * (2 * sr * si - ai - ci) % P
    # e = 3a, f = e^2
    er = 3 * ar
    ei = 3 * ai
    fr = (er + ei) * (er - ei) % P
    fi = 2 * er * ei % P
    x3r = (fr - 2 * dr) % P
    x3i = (fi - 2 * di) % P
    # y3 = e*(d - x3) - 8c
    tr = dr - x3r
    ti = di - x3i
    m0 = er * tr
    m1 = ei * ti
    m2 = (er + ei) * (tr + ti)
    y3r = (m0 - m1 - 8 * cr) % P
    y3i = (m2 - m0 - m1 - 8 * ci) % P
    # z3 = 2*y*z
    m0 = yr * zr
    m1 = yi * zi
    m2 = (yr + yi) * (zr + zi)
    z3r = 2 * (m0 - m1) % P
    z3i = 2 * (m2 - m0 - m1) % P
    return ((x3r, x3i), (y3r, y3i), (z3r, z3i))


def g2_add(p1, p2):
    x1, y1, z1 = p1
    x2, y2, z2 = p2
    if z1[0] == 0 and z1[1] == 0:
        return p2
    if z2[0] == 0 and z2[1] == 0:
        return p1
    z1z1 = fp2_sqr(z1)
    z2z2 = fp2_sqr(z2)
    u1 = fp2_mul(x1, z2z2)
    u2 = fp2_mul(x2, z1z1)
    s1 = fp2_mul(fp2_mul(y1, z2), z2z2)
    s2 = fp2_mul(fp2_mul(y2, z1), z1z1)
    h = fp2_sub(u2, u1)
    r = fp2_sub(s2, s1)
    if h[0] == 0 and h[1] == 0:
        if r[0] == 0 and r[1] == 0:
            return g2_double(p1)
        return _G2_INF
    hh = fp2_sqr(h)
    hhh = fp2_mul(h, hh)
    v = fp2_mul(u1, hh)
    x3 = fp2_sub(fp2_sub(fp2_sqr(r), hhh), fp2_add(v, v))
    y3 = fp2_sub(fp2_mul(r, fp2_sub(v, x3)), fp2_mul(s1, hhh))
    z3 = fp2_mul(fp2_mul(z1, z2), h)
    return (x3, y3, z3)


def g2_neg_jac(pt):
    return (pt[0], fp2_neg(pt[1]), pt[2])


def g2_to_affine(pt):
    x, y, z = pt
    if z[0] == 0 and z[1] == 0:
        return None
    zinv = fp2_inv(z)
    zinv2 = fp2_sqr(zinv)
    return (fp2_mul(x, zinv2), fp2_mul(fp2_mul(y, zinv2), zinv))


def g2_from_affine(a):
    if a is None:
        return _G2_INF
    return (a[0], a[1], FP2_ONE)


def g2_is_on_curve(a):
    if a is None:
        return True
    x, y = a
    lhs = fp2_sqr(y)
    rhs = fp2_add(fp2_mul(fp2_sqr(x), x), TWIST_B)
    return lhs == rhs


def g2_mul(a, k):
    k = int(k) % ORDER
    if a is None or k == 0:
        return None
    base = g2_from_affine(a)
    dbl = g2_double(base)
    table = [base]
    for _ in range(7):
        table.append(g2_add(table[-1], dbl))
    acc = _G2_INF
    for d in reversed(_wnaf(k, 5)):
        acc = g2_double(acc)
        if d > 0:
            acc = g2_add(acc, table[d >> 1])
        elif d < 0:
            acc = g2_add(acc, g2_neg_jac(table[(-d) >> 1]))
    return g2_to_affine(acc)


def g2_psi(a):
    """Untwist-Frobenius-twist endomorphism on affine G2 points."""
    if a is None:
        return None
    x, y = a
    return (fp2_mul(fp2_conj(x), GAMMA_12), fp2_mul(fp2_conj(y), GAMMA_13))


_PSI_EIGENVALUE = 6 * U * U


def g2_in_subgroup(a):
    """Check that an on-curve affine point lies in the order-``ORDER`` subgroup."""
    if a is None:
        return True
    lhs = g2_psi(a)
    rhs = g2_mul(a, _PSI_EIGENVALUE)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Fixed-base exponentiation with cached radix-16 tables
# ---------------------------------------------------------------------------

_FIXED_G1: dict = {}
_FIXED_G2: dict = {}
_FIXED_LIMIT = 64  # number of nibbles covering 256-bit exponents


def _build_table(base_jac, double_fn, add_fn, inf):
    table = []
    cur = base_jac
    for _ in range(_FIXED_LIMIT):
        row = [inf, cur]
        for _ in range(14):
            row.append(add_fn(row[-1], cur))
        table.append(row)
        cur = double_fn(double_fn(double_fn(double_fn(cur))))
    return table


def g1_mul_fixed(a, k):
    """Fixed-base multiply; builds and caches a radix-16 table for ``a``."""
    k = int(k) % ORDER
    if a is None or k == 0:
        return None
    key = (int(a[0]), int(a[1]))
    table = _FIXED_G1.get(key)
    if table is None:
        table = _build_table(g1_from_affine(a), g1_double, g1_add,
                             (mpz(0), mpz(1), mpz(0)))
        _FIXED_G1[key] = table
    acc = (mpz(0), mpz(1), mpz(0))
    i = 0
    while k:
        d = k & 15
        if d:
            acc = g1_add(acc, table[i][d])
        k >>= 4
        i += 1
    return g1_to_affine(acc)


def g2_mul_fixed(a, k):
    k = int(k) % ORDER
    if a is None or k == 0:
        return None
    key = (int(a[0][0]), int(a[0][1]), int(a[1][0]), int(a[1][1]))
    table = _FIXED_G2.get(key)
    if table is None:
        table = _build_table(g2_from_affine(a), g2_double, g2_add, _G2_INF)
        _FIXED_G2[key] = table
    acc = _G2_INF
    i = 0
    while k:
        d = k & 15
        if d:
            acc = g2_add(acc, table[i][d])
        k >>= 4
        i += 1
    return g2_to_affine(acc)


# ---------------------------------------------------------------------------
# Square roots (for point decompression)
# ---------------------------------------------------------------------------

_SQRT_EXP = (P + 1) // 4  # valid since P % 4 == 3
_INV2 = invert(mpz(2), P)


def fp_sqrt(a):
    a = a % P
    r = pow(a, _SQRT_EXP, P)
    if r * r % P == a:
        return r
    return None


def fp2_sqrt(a):
    a0, a1 = a[0] % P, a[1] % P
    if a1 == 0:
        r = fp_sqrt(a0)
        if r is not None:
            return (r, mpz(0))
        # a0 is a non-residue: sqrt is purely imaginary
        r = fp_sqrt((-a0) % P)
        if r is not None:
            return (mpz(0), r)
        return None
    norm = (a0 * a0 + a1 * a1) % P
    n = fp_sqrt(norm)
    if n is None:
        return None
    delta = (a0 + n) * _INV2 % P
    x0 = fp_sqrt(delta)
    if x0 is None:
        delta = (a0 - n) * _INV2 % P
        x0 = fp_sqrt(delta)
        if x0 is None:
            return None
    x1 = a1 * invert(2 * x0 % P, P) % P
    cand = (x0, x1)
    if fp2_sqr(cand) == (a0, a1):
        return cand
    return None


# ---------------------------------------------------------------------------
# Pairing: multi-pair Miller loop and final exponentiation
# ---------------------------------------------------------------------------


def _line_double_coeffs(r):
    """Double ``r`` (Jacobian G2 with cached T=Z^2); return P-independent line
    coefficients ``(la, lbc, lcc, r_new)`` where the line at (px, py) is
    ``lcc*py + (lbc*px + la*v) * w``.
    """
    (xr, xi), (yr, yi), (zr, zi), (tr, ti) = r
    # a = x^2, b = y^2, c = b^2
    a_r = (xr + xi) * (xr - xi) % P
    a_i = 2 * xr * xi % P
    b_r = (yr + yi) * (yr - yi) % P
    b_i = 2 * yr * yi % P
    c_r = (b_r + b_i) * (b_r - b_i) % P
    c_i = 2 * b_r * b_i % P
    # d = 2*((x+b)^2 - a - c)
    s_r = xr + b_r
    s_i = xi + b_i
    d_r = 2 * ((s_r + s_i) * (s_r - s_i) - a_r - c_r) % P
    d_i = 2 * (2 * s_r * s_i - a_i - c_i) % P
    # e = 3a, f = e^2
    e_r = 3 * a_r % P
    e_i = 3 * a_i % P
    f_r = (e_r + e_i) * (e_r - e_i) % P
    f_i = 2 * e_r * e_i % P
    x3r = (f_r - 2 * d_r) % P
    x3i = (f_i - 2 * d_i) % P
    # y3 = e*(d - x3) - 8c
    u_r = d_r - x3r
    u_i = d_i - x3i
    m0 = e_r * u_r
    m1 = e_i * u_i
    m2 = (e_r + e_i) * (u_r + u_i)
    y3r = (m0 - m1 - 8 * c_r) % P
    y3i = (m2 - m0 - m1 - 8 * c_i) % P
    # z3 = (y+z)^2 - b - t
    s_r = yr + zr
    s_i = yi + zi
    z3r = ((s_r + s_i) * (s_r - s_i) - b_r - tr) % P
    z3i = (2 * s_r * s_i - b_i - ti) % P
    t3r = (z3r + z3i) * (z3r - z3i) % P
    t3i = 2 * z3r * z3i % P
    # la = (x+e)^2 - a - f - 4b
    s_r = xr + e_r
    s_i = xi + e_i
    la = (((s_r + s_i) * (s_r - s_i) - a_r - f_r - 4 * b_r) % P,
          (2 * s_r * s_i - a_i - f_i - 4 * b_i) % P)
    # lbc = -2*e*t
    m0 = e_r * tr
    m1 = e_i * ti
    m2 = (e_r + e_i) * (tr + ti)
    lbc = (-2 * (m0 - m1) % P, -2 * (m2 - m0 - m1) % P)
    # lcc = 2*z3*t
    m0 = z3r * tr
    m1 = z3i * ti
    m2 = (z3r + z3i) * (tr + ti)
    lcc = (2 * (m0 - m1) % P, 2 * (m2 - m0 - m1) % P)
    return la, lbc, lcc, ((x3r, x3i), (y3r, y3i), (z3r, z3i), (t3r, t3i))


def _line_add_coeffs(r, q, q_ysq):
    """Add affine G2 point ``q`` to ``r``; return P-independent coefficients."""
    (xr, xi), (yr, yi), (zr, zi), (tr, ti) = r
    (qxr, qxi), (qyr, qyi) = q
    qy2r, qy2i = q_ysq
    # b = qx * t
    m0 = qxr * tr
    m1 = qxi * ti
    m2 = (qxr + qxi) * (tr + ti)
    b_r = (m0 - m1) % P
    b_i = (m2 - m0 - m1) % P
    # d = ((qy + z)^2 - qy2 - t) * t
    s_r = qyr + zr
    s_i = qyi + zi
    d_r = ((s_r + s_i) * (s_r - s_i) - qy2r - tr) % P
    d_i = (2 * s_r * s_i - qy2i - ti) % P
    m0 = d_r * tr
    m1 = d_i * ti
    m2 = (d_r + d_i) * (tr + ti)
    d_r, d_i = (m0 - m1) % P, (m2 - m0 - m1) % P
    # h = b - x, i = h^2, e = 4i, j = h*e, l1 = d - 2y, v = x*e
    h_r = (b_r - xr) % P
    h_i = (b_i - xi) % P
    i_r = (h_r + h_i) * (h_r - h_i) % P
    i_i = 2 * h_r * h_i % P
    e_r = 4 * i_r % P
    e_i = 4 * i_i % P
    m0 = h_r * e_r
    m1 = h_i * e_i
    m2 = (h_r + h_i) * (e_r + e_i)
    j_r = (m0 - m1) % P
    j_i = (m2 - m0 - m1) % P
    l1r = (d_r - 2 * yr) % P
    l1i = (d_i - 2 * yi) % P
    m0 = xr * e_r
    m1 = xi * e_i
    m2 = (xr + xi) * (e_r + e_i)
    v_r = (m0 - m1) % P
    v_i = (m2 - m0 - m1) % P
    # x3 = l1^2 - j - 2v
    x3r = ((l1r + l1i) * (l1r - l1i) - j_r - 2 * v_r) % P
    x3i = (2 * l1r * l1i - j_i - 2 * v_i) % P
    # z3 = (z + h)^2 - t - i
    s_r = zr + h_r
    s_i = zi + h_i
    z3r = ((s_r + s_i) * (s_r - s_i) - tr - i_r) % P
    z3i = (2 * s_r * s_i - ti - i_i) % P
    # y3 = l1*(v - x3) - 2*y*j
    u_r = (v_r - x3r) % P
    u_i = (v_i - x3i) % P
    m0 = l1r * u_r
    m1 = l1i * u_i
    m2 = (l1r + l1i) * (u_r + u_i)
    n0 = yr * j_r
    n1 = yi * j_i
    n2 = (yr + yi) * (j_r + j_i)
    y3r = (m0 - m1 - 2 * (n0 - n1)) % P
    y3i = (m2 - m0 - m1 - 2 * (n2 - n0 - n1)) % P
    t3r = (z3r + z3i) * (z3r - z3i) % P
    t3i = 2 * z3r * z3i % P
    # t = (qy + z3)^2 - qy2 - t3
    s_r = qyr + z3r
    s_i = qyi + z3i
    w_r = ((s_r + s_i) * (s_r - s_i) - qy2r - t3r) % P
    w_i = (2 * s_r * s_i - qy2i - t3i) % P
    # la = 2*l1*qx - t
    m0 = l1r * qxr
    m1 = l1i * qxi
    m2 = (l1r + l1i) * (qxr + qxi)
    la = ((2 * (m0 - m1) - w_r) % P, (2 * (m2 - m0 - m1) - w_i) % P)
    lbc = (-2 * l1r % P, -2 * l1i % P)
    lcc = (2 * z3r % P, 2 * z3i % P)
    return la, lbc, lcc, ((x3r, x3i), (y3r, y3i), (z3r, z3i), (t3r, t3i))


def _mul_by_line(f, lc, lb, la):
    """Multiply f by the sparse element (lc, 0, 0) + (lb + la*v)*w."""
    ((f00r, f00i), (f01r, f01i), (f02r, f02i)), \
        ((f10r, f10i), (f11r, f11i), (f12r, f12i)) = f
    lcr, lci = lc
    lbr, lbi = lb
    lar, lai = la

    # v0 = f0 * lc (three Fp2 scalings)
    m0 = f00r * lcr
    m1 = f00i * lci
    m2 = (f00r + f00i) * (lcr + lci)
    v00r, v00i = m0 - m1, m2 - m0 - m1
    m0 = f01r * lcr
    m1 = f01i * lci
    m2 = (f01r + f01i) * (lcr + lci)
    v01r, v01i = m0 - m1, m2 - m0 - m1
    m0 = f02r * lcr
    m1 = f02i * lci
    m2 = (f02r + f02i) * (lcr + lci)
    v02r, v02i = m0 - m1, m2 - m0 - m1

    # v1 = f1 * (lb, la, 0)
    m0 = f10r * lbr
    m1 = f10i * lbi
    m2 = (f10r + f10i) * (lbr + lbi)
    g0br, g0bi = m0 - m1, m2 - m0 - m1
    m0 = f10r * lar
    m1 = f10i * lai
    m2 = (f10r + f10i) * (lar + lai)
    g0ar, g0ai = m0 - m1, m2 - m0 - m1
    m0 = f11r * lbr
    m1 = f11i * lbi
    m2 = (f11r + f11i) * (lbr + lbi)
    g1br, g1bi = m0 - m1, m2 - m0 - m1
    m0 = f11r * lar
    m1 = f11i * lai
    m2 = (f11r + f11i) * (lar + lai)
    g1ar, g1ai = m0 - m1, m2 - m0 - m1
    m0 = f12r * lbr
    m1 = f12i * lbi
    m2 = (f12r + f12i) * (lbr + lbi)
    g2br, g2bi = m0 - m1, m2 - m0 - m1
    m0 = f12r * lar
    m1 = f12i * lai
    m2 = (f12r + f12i) * (lar + lai)
    g2ar, g2ai = m0 - m1, m2 - m0 - m1
    v10r = g0br + 9 * g2ar - g2ai
    v10i = g0bi + g2ar + 9 * g2ai
    v11r = g0ar + g1br
    v11i = g0ai + g1bi
    v12r = g1ar + g2br
    v12i = g1ai + g2bi

    # t = (f0 + f1) * (lc + lb, la, 0)
    s0r, s0i = f00r + f10r, f00i + f10i
    s1r, s1i = f01r + f11r, f01i + f11i
    s2r, s2i = f02r + f12r, f02i + f12i
    cbr, cbi = lcr + lbr, lci + lbi
    m0 = s0r * cbr
    m1 = s0i * cbi
    m2 = (s0r + s0i) * (cbr + cbi)
    h0br, h0bi = m0 - m1, m2 - m0 - m1
    m0 = s0r * lar
    m1 = s0i * lai
    m2 = (s0r + s0i) * (lar + lai)
    h0ar, h0ai = m0 - m1, m2 - m0 - m1
    m0 = s1r * cbr
    m1 = s1i * cbi
    m2 = (s1r + s1i) * (cbr + cbi)
    h1br, h1bi = m0 - m1, m2 - m0 - m1
    m0 = s1r * lar
    m1 = s1i * lai
    m2 = (s1r + s1i) * (lar + lai)
    h1ar, h1ai = m0 - m1, m2 - m0 - m1
    m0 = s2r * cbr
    m1 = s2i * cbi
    m2 = (s2r + s2i) * (cbr + cbi)
    h2br, h2bi = m0 - m1, m2 - m0 - m1
    m0 = s2r * lar
    m1 = s2i * lai
    m2 = (s2r + s2i) * (lar + lai)
    h2ar, h2ai = m0 - m1, m2 - m0 - m1
    t0r = h0br + 9 * h2ar - h2ai
    t0i = h0bi + h2ar + 9 * h2ai
    t1r = h0ar + h1br
    t1i = h0ai + h1bi
    t2r = h1ar + h2br
    t2i = h1ai + h2bi

    # c1 = t - v0 - v1 ; c0 = v0 + tau(v1)
    c10 = ((t0r - v00r - v10r) % P, (t0i - v00i - v10i) % P)
    c11 = ((t1r - v01r - v11r) % P, (t1i - v01i - v11i) % P)
    c12 = ((t2r - v02r - v12r) % P, (t2i - v02i - v12i) % P)
    w0 = 9 * v12r - v12i
    w1 = v12r + 9 * v12i
    c00 = ((v00r + w0) % P, (v00i + w1) % P)
    c01 = ((v01r + v10r) % P, (v01i + v10i) % P)
    c02 = ((v02r + v11r) % P, (v02i + v11i) % P)
    return ((c00, c01, c02), (c10, c11, c12))


class G2Prepared:
    """Cached line coefficients of a fixed G2 argument across the ate loop."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = coeffs


def g2_prepare(qa):
    """Precompute the Miller-loop line coefficients for affine G2 point ``qa``."""
    if qa is None:
        raise ValueError("cannot prepare the point at infinity")
    qx, qy = qa
    neg_q = (qx, fp2_neg(qy))
    q_ysq = fp2_sqr(qy)
    nq_ysq = fp2_sqr(neg_q[1])
    r = (qx, qy, FP2_ONE, FP2_ONE)
    coeffs = []
    for idx in range(len(ATE_DIGITS) - 2, -1, -1):
        la, lbc, lcc, r = _line_double_coeffs(r)
        coeffs.append((la, lbc, lcc))
        digit = ATE_DIGITS[idx]
        if digit == 1:
            la, lbc, lcc, r = _line_add_coeffs(r, qa, q_ysq)
            coeffs.append((la, lbc, lcc))
        elif digit == -1:
            la, lbc, lcc, r = _line_add_coeffs(r, neg_q, nq_ysq)
            coeffs.append((la, lbc, lcc))
    q1 = (fp2_mul(fp2_conj(qx), GAMMA_12), fp2_mul(fp2_conj(qy), GAMMA_13))
    mq2 = (fp2_mul_scalar(qx, GAMMA_22), qy)
    la, lbc, lcc, r = _line_add_coeffs(r, q1, fp2_sqr(q1[1]))
    coeffs.append((la, lbc, lcc))
    la, lbc, lcc, r = _line_add_coeffs(r, mq2, fp2_sqr(mq2[1]))
    coeffs.append((la, lbc, lcc))
    return G2Prepared(coeffs)


def miller_loop(pairs):
    """Shared Miller loop over ``[(g1_affine, g2_affine_or_prepared), ...]``.

    Pairs whose G1 side is infinity (or whose G2 side is the affine infinity)
    contribute the identity factor and are skipped.  Returns an unreduced Fp12
    value; apply ``final_exp``.
    """
    live = []      # [px, py, q, neg_q, q_ysq, nq_ysq, r]
    prepped = []   # [px, py, iterator over coeffs]
    for pa, q in pairs:
        if pa is None or q is None:
            continue
        px, py = pa
        if isinstance(q, G2Prepared):
            prepped.append((px, py, iter(q.coeffs)))
        else:
            qx, qy = q
            neg_q = (qx, fp2_neg(qy))
            live.append([px, py, q, neg_q, fp2_sqr(qy), fp2_sqr(neg_q[1]),
                         (qx, qy, FP2_ONE, FP2_ONE)])
    f = FP12_ONE
    if not live and not prepped:
        return f
    first = True
    for idx in range(len(ATE_DIGITS) - 2, -1, -1):
        if not first:
            f = fp12_sqr(f)
        first = False
        digit = ATE_DIGITS[idx]
        for w in live:
            px, py = w[0], w[1]
            la, lbc, lcc, w[6] = _line_double_coeffs(w[6])
            f = _mul_by_line(f, (lcc[0] * py % P, lcc[1] * py % P),
                             (lbc[0] * px % P, lbc[1] * px % P), la)
            if digit == 1:
                la, lbc, lcc, w[6] = _line_add_coeffs(w[6], w[2], w[4])
                f = _mul_by_line(f, (lcc[0] * py % P, lcc[1] * py % P),
                                 (lbc[0] * px % P, lbc[1] * px % P), la)
            elif digit == -1:
                la, lbc, lcc, w[6] = _line_add_coeffs(w[6], w[3], w[5])
                f = _mul_by_line(f, (lcc[0] * py % P, lcc[1] * py % P),
                                 (lbc[0] * px % P, lbc[1] * px % P), la)
        for px, py, stream in prepped:
            la, lbc, lcc = next(stream)
            f = _mul_by_line(f, (lcc[0] * py % P, lcc[1] * py % P),
                             (lbc[0] * px % P, lbc[1] * px % P), la)
            if digit:
                la, lbc, lcc = next(stream)
                f = _mul_by_line(f, (lcc[0] * py % P, lcc[1] * py % P),
                                 (lbc[0] * px % P, lbc[1] * px % P), la)
    # Frobenius correction lines
    for w in live:
        px, py = w[0], w[1]
        qx, qy = w[2]
        q1 = (fp2_mul(fp2_conj(qx), GAMMA_12), fp2_mul(fp2_conj(qy), GAMMA_13))
        mq2 = (fp2_mul_scalar(qx, GAMMA_22), qy)
        la, lbc, lcc, w[6] = _line_add_coeffs(w[6], q1, fp2_sqr(q1[1]))
        f = _mul_by_line(f, (lcc[0] * py % P, lcc[1] * py % P),
                         (lbc[0] * px % P, lbc[1] * px % P), la)
        la, lbc, lcc, w[6] = _line_add_coeffs(w[6], mq2, fp2_sqr(mq2[1]))
        f = _mul_by_line(f, (lcc[0] * py % P, lcc[1] * py % P),
                         (lbc[0] * px % P, lbc[1] * px % P), la)
    for px, py, stream in prepped:
        for _ in range(2):
            la, lbc, lcc = next(stream)
            f = _mul_by_line(f, (lcc[0] * py % P, lcc[1] * py % P),
                             (lbc[0] * px % P, lbc[1] * px % P), la)
    return f


def final_exp(f):
    """Map a Miller-loop output to the canonical coset representative in GT."""
    # easy part: f^((p^6 - 1)(p^2 + 1))
    t1 = fp12_conj(f)
    t1 = fp12_mul(t1, fp12_inv(f))
    t1 = fp12_mul(t1, fp12_frobenius_p2(t1))
    # hard part
    fp_ = fp12_frobenius(t1)
    fp2_ = fp12_frobenius_p2(t1)
    fp3_ = fp12_frobenius(fp2_)
    fu = fp12_cyclo_exp_u(t1)
    fu2 = fp12_cyclo_exp_u(fu)
    fu3 = fp12_cyclo_exp_u(fu2)
    y3 = fp12_conj(fp12_frobenius(fu))
    fu2p = fp12_frobenius(fu2)
    fu3p = fp12_frobenius(fu3)
    y2 = fp12_frobenius_p2(fu2)
    y0 = fp12_mul(fp12_mul(fp_, fp2_), fp3_)
    y1 = fp12_conj(t1)
    y5 = fp12_conj(fu2)
    y4 = fp12_conj(fp12_mul(fu, fu2p))
    y6 = fp12_conj(fp12_mul(fu3, fu3p))
    t0 = fp12_mul(fp12_mul(fp12_cyclo_sqr(y6), y4), y5)
    t1b = fp12_mul(fp12_mul(y3, y5), t0)
    t0 = fp12_mul(t0, y2)
    t1b = fp12_mul(fp12_cyclo_sqr(t1b), t0)
    t1b = fp12_cyclo_sqr(t1b)
    t0b = fp12_mul(t1b, y1)
    t1b = fp12_mul(t1b, y0)
    t0b = fp12_cyclo_sqr(t0b)
    return fp12_mul(t0b, t1b)


def pairing(pa, qa):
    """Full pairing of affine points: e(P, Q) with P in G1, Q in G2."""
    return final_exp(miller_loop([(pa, qa)]))


def pairing_product_is_one(pairs):
    """True iff the product of pairings over ``pairs`` equals 1 in GT."""
    return final_exp(miller_loop(pairs)) == FP12_ONE
