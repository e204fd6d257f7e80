"""Backend-agnostic symmetric ("type-1") bilinear group abstraction.

Two backends share one interface:

- ``production``: BN254 (alt_bn128).  The paper-facing group G is emulated on
  top of the type-3 curve by carrying each element as a coherent pair
  ``(P, Q)`` of G1/G2 points with the same discrete logarithm relative to the
  canonical generator pair; ``pairing(A, B)`` is the asymmetric pairing of
  ``(A.P, B.Q)``.  This preserves bilinearity and symmetry exactly, at twice
  the element size.  The G2 component of derived elements is computed lazily
  and memoized, since most elements are only ever used on the G1 side of a
  pairing.
- ``toy``: the additive group Z_p for a small prime p (default 101), with
  ``pairing(a, b) = a*b mod p``.  Insecure by construction; it exists as the
  independent brute-force oracle for tests.

Everything here is a value: operations are pure given their inputs plus an
explicitly passed ``rng`` (anything with ``randrange``).  The lazy G2
memoization is observationally pure (it caches a deterministic function of
the element), so sharing across threads stays safe under CPython.

NOT CONSTANT TIME and not hardened: this is a research artifact, not
production cryptography.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from gmpy2 import is_prime, mpz

from . import bn254
from .errors import (
    BackendMismatchError,
    IncoherentElementError,
    InvalidGroupOrderError,
    MalformedEncodingError,
    NonInvertibleScalarError,
    OffCurveError,
)

PRODUCTION = "production"
TOY = "toy"

_BACKEND_IDS = {PRODUCTION: 1, TOY: 2}
_BACKEND_FROM_ID = {1: PRODUCTION, 2: TOY}

# Module-level count of pairing evaluations (each (G1, G2) pair fed to a
# pairing or pairing product counts once).  Test instrumentation only.
_PAIRING_EVALUATIONS = 0


def pairing_count() -> int:
    """Monotonic count of pairing evaluations performed so far."""
    return _PAIRING_EVALUATIONS


@dataclass(frozen=True)
class GroupDescription:
    """Description of a bilinear group: backend, prime order, parameters."""

    backend: str
    p: int
    security_level: int

    def scalar_width(self) -> int:
        return 32 if self.backend == PRODUCTION else 8

    def element_width(self) -> int:
        return 96 if self.backend == PRODUCTION else 8

    def target_width(self) -> int:
        return 384 if self.backend == PRODUCTION else 8


def generate_group(backend: str = PRODUCTION, *, security_level: int = 128,
                   toy_modulus: int = 101, rng=None):
    """Create a group description and its canonical generator.

    The canonical generator is fixed per description (the standard generator
    pair of the curve; 1 for the toy backend) so serialized artifacts are
    interoperable across runs.  ``rng`` is accepted for interface uniformity
    but unused: descriptions are deterministic given their parameters.
    """
    if backend == PRODUCTION:
        if security_level != 128:
            raise InvalidGroupOrderError(
                f"unsupported security level {security_level}; only 128 is available")
        desc = GroupDescription(PRODUCTION, int(bn254.ORDER), 128)
        return desc, canonical_generator(desc)
    if backend == TOY:
        if toy_modulus < 2 or toy_modulus >= (1 << 64) or not is_prime(toy_modulus):
            raise InvalidGroupOrderError("invalid group order")
        desc = GroupDescription(TOY, int(toy_modulus), int(toy_modulus))
        return desc, canonical_generator(desc)
    raise InvalidGroupOrderError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


class Scalar:
    """An element of Z_p, attached to its group description."""

    __slots__ = ("group", "value")

    def __init__(self, group: GroupDescription, value: int):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "value", int(value) % group.p)

    def __setattr__(self, *_):
        raise AttributeError("Scalar is immutable")

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        return (isinstance(other, Scalar) and other.group == self.group
                and other.value == self.value)

    def __hash__(self):
        return hash((self.group.backend, self.group.p, self.value))

    def __repr__(self):
        return f"Scalar({self.value} mod {self.group.p})"

    def _coerce(self, other) -> int:
        if isinstance(other, Scalar):
            if other.group != self.group:
                raise BackendMismatchError("scalars from different groups")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.group, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.group, self.value - v)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.group, self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.group, -self.value)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise NonInvertibleScalarError("non-invertible scalar")
        return Scalar(self.group, pow(self.value, self.group.p - 2, self.group.p))

    def is_zero(self) -> bool:
        return self.value == 0


def scalar(group: GroupDescription, value: int) -> Scalar:
    return Scalar(group, value)


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_neg(a: Scalar) -> Scalar:
    return -a


def scalar_inv(a: Scalar) -> Scalar:
    return a.inverse()


def random_scalar(group: GroupDescription, rng) -> Scalar:
    return Scalar(group, rng.randrange(group.p))


def random_nonzero_scalar(group: GroupDescription, rng) -> Scalar:
    while True:
        s = rng.randrange(group.p)
        if s != 0:
            return Scalar(group, s)


# ---------------------------------------------------------------------------
# Group elements
# ---------------------------------------------------------------------------


class GroupElement:
    """Element of G.

    Production: coherent pair of a G1 point (eager) and a G2 point (lazy,
    memoized).  Toy: one integer mod p.  Equality and hashing use the G1
    component only; for coherent pairs this determines the element.
    """

    __slots__ = ("group", "_n", "_g1", "_q", "_prep", "_fixed")

    def __init__(self, group, *, n=None, g1=None, q=None, fixed=False):
        self.group = group
        self._n = n
        self._g1 = g1
        self._q = q
        self._prep = None
        self._fixed = fixed

    # -- accessors ----------------------------------------------------------

    def _q_affine(self):
        """Force and memoize the G2 component (production only)."""
        q = self._q
        if callable(q):
            q = q()
            self._q = q
        return q

    def _prepared(self):
        if self._prep is None:
            q = self._q_affine()
            if q is None:
                return None
            self._prep = bn254.g2_prepare(q)
        return self._prep

    def is_identity(self) -> bool:
        if self.group.backend == TOY:
            return self._n == 0
        return self._g1 is None

    # -- equality -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement) or other.group != self.group:
            return False
        if self.group.backend == TOY:
            return self._n == other._n
        return self._g1 == other._g1

    def __hash__(self):
        if self.group.backend == TOY:
            return hash(("toy-el", self.group.p, self._n))
        if self._g1 is None:
            return hash("prod-el-inf")
        return hash(("prod-el", int(self._g1[0]), int(self._g1[1])))

    def __repr__(self):
        if self.group.backend == TOY:
            return f"GroupElement(toy {self._n} mod {self.group.p})"
        if self._g1 is None:
            return "GroupElement(production identity)"
        return f"GroupElement(production x={int(self._g1[0]) % 10**8:08d}...)"

    # -- group law ----------------------------------------------------------

    def _check_same(self, other):
        if not isinstance(other, GroupElement):
            raise TypeError(f"cannot combine GroupElement with {type(other)!r}")
        if other.group != self.group:
            raise BackendMismatchError("elements from different groups")

    def __mul__(self, other) -> "GroupElement":
        self._check_same(other)
        if self.group.backend == TOY:
            return GroupElement(self.group, n=(self._n + other._n) % self.group.p)
        g1 = bn254.g1_to_affine(
            bn254.g1_add(bn254.g1_from_affine(self._g1),
                         bn254.g1_from_affine(other._g1)))
        a, b = self, other
        return GroupElement(
            self.group, g1=g1,
            q=lambda: bn254.g2_to_affine(
                bn254.g2_add(bn254.g2_from_affine(a._q_affine()),
                             bn254.g2_from_affine(b._q_affine()))))

    def __pow__(self, e) -> "GroupElement":
        if isinstance(e, Scalar):
            if e.group != self.group:
                raise BackendMismatchError("scalar from a different group")
            k = e.value
        elif isinstance(e, int):
            k = e % self.group.p
        else:
            return NotImplemented
        if self.group.backend == TOY:
            return GroupElement(self.group, n=self._n * k % self.group.p)
        base = self
        if self._fixed:
            g1 = bn254.g1_mul_fixed(self._g1, k)
            return GroupElement(
                self.group, g1=g1,
                q=lambda: bn254.g2_mul_fixed(base._q_affine(), k))
        g1 = bn254.g1_mul(self._g1, k)
        return GroupElement(
            self.group, g1=g1,
            q=lambda: bn254.g2_mul(base._q_affine(), k))

    def inverse(self) -> "GroupElement":
        if self.group.backend == TOY:
            return GroupElement(self.group, n=(-self._n) % self.group.p)
        g1 = self._g1
        inv1 = None if g1 is None else (g1[0], (-g1[1]) % bn254.P)
        base = self
        def inv_q():
            q = base._q_affine()
            return None if q is None else (q[0], bn254.fp2_neg(q[1]))
        return GroupElement(self.group, g1=inv1, q=inv_q)


def identity(group: GroupDescription) -> GroupElement:
    if group.backend == TOY:
        return GroupElement(group, n=0)
    return GroupElement(group, g1=None, q=None)


def canonical_generator(group: GroupDescription) -> GroupElement:
    if group.backend == TOY:
        return GroupElement(group, n=1)
    return GroupElement(group, g1=bn254.G1_GEN, q=bn254.G2_GEN, fixed=True)


def group_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def group_exp(base: GroupElement, e: Union[Scalar, int]) -> GroupElement:
    return base ** e


def group_inv(a: GroupElement) -> GroupElement:
    return a.inverse()


def random_nonidentity(group: GroupDescription, rng) -> GroupElement:
    """Uniform element of G^*, sampled as canonical_generator^r with r != 0."""
    r = random_nonzero_scalar(group, rng)
    return canonical_generator(group) ** r


def mark_fixed_base(a: GroupElement) -> GroupElement:
    """Return an equal element flagged to use cached fixed-base tables.

    Only worth it for long-lived bases (a setup's generator); tables are
    cached globally per base point.
    """
    if a.group.backend == TOY or a._fixed:
        return a
    el = GroupElement(a.group, g1=a._g1, q=a._q, fixed=True)
    return el


def toy_discrete_log(base: GroupElement, target: GroupElement) -> int:
    """Brute-force discrete logarithm on the toy backend; the tests' oracle."""
    if base.group.backend != TOY:
        raise BackendMismatchError("brute-force dlog is toy-only")
    if target.group != base.group:
        raise BackendMismatchError("elements from different groups")
    p = base.group.p
    acc = 0
    for k in range(p):
        if acc == target._n:
            return k
        acc = (acc + base._n) % p
    raise ValueError("no discrete log found (base does not generate target)")


# ---------------------------------------------------------------------------
# Target group
# ---------------------------------------------------------------------------


class TargetElement:
    """Element of G_T (production: Fp12 coset representative; toy: int mod p)."""

    __slots__ = ("group", "_n", "_f")

    def __init__(self, group, *, n=None, f=None):
        self.group = group
        self._n = n
        self._f = f

    def is_identity(self) -> bool:
        if self.group.backend == TOY:
            return self._n == 0
        return self._f == bn254.FP12_ONE

    def __eq__(self, other) -> bool:
        if not isinstance(other, TargetElement) or other.group != self.group:
            return False
        if self.group.backend == TOY:
            return self._n == other._n
        return self._f == other._f

    def __hash__(self):
        if self.group.backend == TOY:
            return hash(("toy-gt", self.group.p, self._n))
        return hash(("prod-gt", str(self._f)))

    def __repr__(self):
        if self.group.backend == TOY:
            return f"TargetElement(toy {self._n} mod {self.group.p})"
        return "TargetElement(production)"

    def _check_same(self, other):
        if not isinstance(other, TargetElement):
            raise TypeError(f"cannot combine TargetElement with {type(other)!r}")
        if other.group != self.group:
            raise BackendMismatchError("target elements from different groups")

    def __mul__(self, other) -> "TargetElement":
        self._check_same(other)
        if self.group.backend == TOY:
            return TargetElement(self.group, n=(self._n + other._n) % self.group.p)
        return TargetElement(self.group, f=bn254.fp12_mul(self._f, other._f))

    def __pow__(self, e) -> "TargetElement":
        if isinstance(e, Scalar):
            if e.group != self.group:
                raise BackendMismatchError("scalar from a different group")
            k = e.value
        elif isinstance(e, int):
            k = e % self.group.p
        else:
            return NotImplemented
        if self.group.backend == TOY:
            return TargetElement(self.group, n=self._n * k % self.group.p)
        return TargetElement(self.group, f=bn254.fp12_exp(self._f, k))

    def inverse(self) -> "TargetElement":
        if self.group.backend == TOY:
            return TargetElement(self.group, n=(-self._n) % self.group.p)
        return TargetElement(self.group, f=bn254.fp12_inv(self._f))


def gt_identity(group: GroupDescription) -> TargetElement:
    if group.backend == TOY:
        return TargetElement(group, n=0)
    return TargetElement(group, f=bn254.FP12_ONE)


def gt_mul(a: TargetElement, b: TargetElement) -> TargetElement:
    return a * b


def gt_exp(a: TargetElement, e: Union[Scalar, int]) -> TargetElement:
    return a ** e


# ---------------------------------------------------------------------------
# Pairing
# ---------------------------------------------------------------------------


def _bump_pairing_count(n: int):
    global _PAIRING_EVALUATIONS
    _PAIRING_EVALUATIONS += n


def pairing(a: GroupElement, b: GroupElement) -> TargetElement:
    """The symmetric bilinear map e: G x G -> G_T."""
    if not isinstance(a, GroupElement) or not isinstance(b, GroupElement):
        raise TypeError("pairing expects two GroupElements")
    if a.group != b.group:
        raise BackendMismatchError("pairing of elements from different groups")
    _bump_pairing_count(1)
    group = a.group
    if group.backend == TOY:
        return TargetElement(group, n=a._n * b._n % group.p)
    if a._g1 is None or b.is_identity():
        return gt_identity(group)
    f = bn254.final_exp(bn254.miller_loop([(a._g1, b._prepared())]))
    return TargetElement(group, f=f)


def pairing_check(pairs: Iterable[tuple]) -> bool:
    """True iff the product of e(a_i, b_i) over all pairs equals 1 in G_T.

    Counts one pairing evaluation per pair; production shares a single final
    exponentiation across the product.
    """
    pairs = list(pairs)
    if not pairs:
        return True
    group = pairs[0][0].group
    for a, b in pairs:
        if a.group != group or b.group != group:
            raise BackendMismatchError("pairing product across different groups")
    _bump_pairing_count(len(pairs))
    if group.backend == TOY:
        acc = 0
        for a, b in pairs:
            acc = (acc + a._n * b._n) % group.p
        return acc == 0
    kernel_pairs = []
    for a, b in pairs:
        if a._g1 is None or b.is_identity():
            continue
        kernel_pairs.append((a._g1, b._prepared()))
    return bn254.pairing_product_is_one(kernel_pairs)


def pairings_equal(a1: GroupElement, b1: GroupElement,
                   a2: GroupElement, b2: GroupElement) -> bool:
    """Decide e(a1, b1) == e(a2, b2) as a two-pairing product check."""
    return pairing_check([(a1, b1), (a2.inverse(), b2)])


# ---------------------------------------------------------------------------
# Hashing helper (deterministic domain-separated hash to Z_p)
# ---------------------------------------------------------------------------


def hash_to_scalar(group: GroupDescription, *chunks: bytes) -> Scalar:
    h = hashlib.sha512()
    for c in chunks:
        h.update(len(c).to_bytes(8, "big"))
        h.update(c)
    return Scalar(group, int.from_bytes(h.digest(), "big") % group.p)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_INF_FLAG = 0x40
_SIGN_FLAG = 0x80


def serialize_group_description(group: GroupDescription) -> bytes:
    bid = _BACKEND_IDS[group.backend].to_bytes(1, "big")
    if group.backend == PRODUCTION:
        return bid + group.security_level.to_bytes(2, "big")
    return bid + group.p.to_bytes(8, "big")


def deserialize_group_description(data: bytes) -> GroupDescription:
    if len(data) < 1 or data[0] not in _BACKEND_FROM_ID:
        raise MalformedEncodingError("malformed encoding: bad backend id")
    backend = _BACKEND_FROM_ID[data[0]]
    if backend == PRODUCTION:
        if len(data) != 3:
            raise MalformedEncodingError("malformed encoding: wrong length")
        level = int.from_bytes(data[1:3], "big")
        desc, _ = generate_group(PRODUCTION, security_level=level)
        return desc
    if len(data) != 9:
        raise MalformedEncodingError("malformed encoding: wrong length")
    p = int.from_bytes(data[1:9], "big")
    desc, _ = generate_group(TOY, toy_modulus=p)
    return desc


def _fp2_is_larger(y) -> bool:
    ny = bn254.fp2_neg(y)
    return (int(y[1]), int(y[0])) > (int(ny[1]), int(ny[0]))


def _compress_g1(pt) -> bytes:
    if pt is None:
        return bytes([_INF_FLAG]) + b"\x00" * 31
    x, y = pt
    raw = bytearray(int(x).to_bytes(32, "big"))
    if int(y) > (int(bn254.P) - int(y)) % int(bn254.P):
        raw[0] |= _SIGN_FLAG
    return bytes(raw)


def _decompress_g1(data: bytes):
    flags = data[0] & 0xC0
    body = bytes([data[0] & 0x3F]) + data[1:]
    x = int.from_bytes(body, "big")
    if flags & _INF_FLAG:
        if x != 0 or (flags & _SIGN_FLAG):
            raise MalformedEncodingError("malformed encoding: bad infinity")
        return None
    if x >= bn254.P:
        raise MalformedEncodingError("malformed encoding: coordinate out of range")
    x = mpz(x)
    rhs = (x * x % bn254.P) * x % bn254.P + bn254.CURVE_B
    y = bn254.fp_sqrt(rhs % bn254.P)
    if y is None:
        raise OffCurveError("off-curve point")
    y_big = int(y) > (int(bn254.P) - int(y)) % int(bn254.P)
    if bool(flags & _SIGN_FLAG) != y_big:
        y = (-y) % bn254.P
    return (x, y)


def _compress_g2(pt) -> bytes:
    if pt is None:
        return bytes([_INF_FLAG]) + b"\x00" * 63
    (x0, x1), y = pt
    raw = bytearray(int(x0).to_bytes(32, "big") + int(x1).to_bytes(32, "big"))
    if _fp2_is_larger(y):
        raw[0] |= _SIGN_FLAG
    return bytes(raw)


def _decompress_g2(data: bytes):
    flags = data[0] & 0xC0
    body = bytes([data[0] & 0x3F]) + data[1:]
    x0 = int.from_bytes(body[:32], "big")
    x1 = int.from_bytes(body[32:], "big")
    if flags & _INF_FLAG:
        if x0 != 0 or x1 != 0 or (flags & _SIGN_FLAG):
            raise MalformedEncodingError("malformed encoding: bad infinity")
        return None
    if x0 >= bn254.P or x1 >= bn254.P:
        raise MalformedEncodingError("malformed encoding: coordinate out of range")
    x = (mpz(x0), mpz(x1))
    rhs = bn254.fp2_add(bn254.fp2_mul(bn254.fp2_sqr(x), x), bn254.TWIST_B)
    y = bn254.fp2_sqrt(rhs)
    if y is None:
        raise OffCurveError("off-curve point")
    if bool(flags & _SIGN_FLAG) != _fp2_is_larger(y):
        y = bn254.fp2_neg(y)
    pt = (x, y)
    if not bn254.g2_in_subgroup(pt):
        raise OffCurveError("off-curve point: not in the prime-order subgroup")
    return pt


_COHERENCE_PREPARED_G2 = None


def _check_coherence(g1_pt, g2_pt) -> bool:
    """pairing(P, g2_gen) == pairing(g1_gen, Q), as one product check."""
    global _COHERENCE_PREPARED_G2
    if g1_pt is None or g2_pt is None:
        return g1_pt is None and g2_pt is None
    if _COHERENCE_PREPARED_G2 is None:
        _COHERENCE_PREPARED_G2 = bn254.g2_prepare(bn254.G2_GEN)
    neg_gen = (bn254.G1_GEN[0], (-bn254.G1_GEN[1]) % bn254.P)
    return bn254.pairing_product_is_one([
        (g1_pt, _COHERENCE_PREPARED_G2),
        (neg_gen, g2_pt),
    ])


def serialize_element(x) -> bytes:
    """Canonical fixed-width encoding of a Scalar, GroupElement or TargetElement."""
    if isinstance(x, Scalar):
        return x.value.to_bytes(x.group.scalar_width(), "big")
    if isinstance(x, GroupElement):
        if x.group.backend == TOY:
            return x._n.to_bytes(8, "big")
        return _compress_g1(x._g1) + _compress_g2(x._q_affine())
    if isinstance(x, TargetElement):
        if x.group.backend == TOY:
            return x._n.to_bytes(8, "big")
        out = bytearray()
        for half in x._f:
            for c in half:
                out += int(c[0]).to_bytes(32, "big")
                out += int(c[1]).to_bytes(32, "big")
        return bytes(out)
    raise TypeError(f"cannot serialize {type(x)!r}")


def deserialize_element(data: bytes, group: GroupDescription, kind: str):
    """Decode ``data`` as ``kind`` in {"scalar", "group", "target"}.

    Rejects non-canonical encodings: out-of-range scalars and coordinates,
    off-curve or wrong-subgroup points, and production pairs whose two
    components disagree on the discrete log (coherence check via pairings).
    """
    if kind == "scalar":
        if len(data) != group.scalar_width():
            raise MalformedEncodingError("malformed encoding: wrong scalar length")
        v = int.from_bytes(data, "big")
        if v >= group.p:
            raise MalformedEncodingError("malformed encoding: scalar out of range")
        return Scalar(group, v)
    if kind == "group":
        if group.backend == TOY:
            if len(data) != 8:
                raise MalformedEncodingError("malformed encoding: wrong element length")
            v = int.from_bytes(data, "big")
            if v >= group.p:
                raise MalformedEncodingError("malformed encoding: element out of range")
            return GroupElement(group, n=v)
        if len(data) != 96:
            raise MalformedEncodingError("malformed encoding: wrong element length")
        g1_pt = _decompress_g1(data[:32])
        g2_pt = _decompress_g2(data[32:])
        if not _check_coherence(g1_pt, g2_pt):
            raise IncoherentElementError("incoherent element")
        return GroupElement(group, g1=g1_pt, q=g2_pt)
    if kind == "target":
        if group.backend == TOY:
            if len(data) != 8:
                raise MalformedEncodingError("malformed encoding: wrong target length")
            v = int.from_bytes(data, "big")
            if v >= group.p:
                raise MalformedEncodingError("malformed encoding: target out of range")
            return TargetElement(group, n=v)
        if len(data) != 384:
            raise MalformedEncodingError("malformed encoding: wrong target length")
        limbs = []
        for i in range(12):
            v = int.from_bytes(data[i * 32:(i + 1) * 32], "big")
            if v >= bn254.P:
                raise MalformedEncodingError("malformed encoding: limb out of range")
            limbs.append(mpz(v))
        f = (((limbs[0], limbs[1]), (limbs[2], limbs[3]), (limbs[4], limbs[5])),
             ((limbs[6], limbs[7]), (limbs[8], limbs[9]), (limbs[10], limbs[11])))
        return TargetElement(group, f=f)
    raise ValueError(f"unknown kind {kind!r}")
