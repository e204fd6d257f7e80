"""Single-message modified Camenisch-Lysyanskaya (MCL) signatures.

The Pointcheval-Sanders modification of the CL scheme, restricted to one
message in Z_p.  Keys are (g, X=g^x, Y=g^y, Z=g^z); a signature on m is
(w, A, B=A^y, C=A^z, D=C^y, E=A^x B^{mx} D^{wx}) with w uniform in Z_p and
A uniform in G^*.

Byte-string hashing is deliberately not part of this scheme; callers sign
scalars directly (the aggregate layer owns message hashing).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BackendMismatchError, MalformedEncodingError
from .groups import (
    GroupDescription,
    GroupElement,
    Scalar,
    deserialize_element,
    generate_group,
    pairings_equal,
    random_nonidentity,
    random_nonzero_scalar,
    random_scalar,
    serialize_element,
)


@dataclass(frozen=True)
class MclPublicParams:
    group: GroupDescription


@dataclass(frozen=True)
class MclVerifyingKey:
    g: GroupElement
    X: GroupElement
    Y: GroupElement
    Z: GroupElement


@dataclass(frozen=True)
class MclSigningKey:
    x: Scalar
    y: Scalar
    z: Scalar


@dataclass(frozen=True)
class MclKeyPair:
    vk: MclVerifyingKey
    sk: MclSigningKey


@dataclass(frozen=True)
class MclSignature:
    w: Scalar
    A: GroupElement
    B: GroupElement
    C: GroupElement
    D: GroupElement
    E: GroupElement

    def to_bytes(self) -> bytes:
        return b"".join(serialize_element(v)
                        for v in (self.w, self.A, self.B, self.C, self.D, self.E))

    @classmethod
    def from_bytes(cls, data: bytes, group: GroupDescription) -> "MclSignature":
        sw = group.scalar_width()
        ew = group.element_width()
        if len(data) != sw + 5 * ew:
            raise MalformedEncodingError("malformed encoding: wrong signature length")
        w = deserialize_element(data[:sw], group, "scalar")
        off = sw
        elems = []
        for _ in range(5):
            elems.append(deserialize_element(data[off:off + ew], group, "group"))
            off += ew
        return cls(w, *elems)


def mcl_setup(backend: str = "production", *, security_level: int = 128,
              toy_modulus: int = 101, rng=None) -> MclPublicParams:
    desc, _ = generate_group(backend, security_level=security_level,
                             toy_modulus=toy_modulus, rng=rng)
    return MclPublicParams(group=desc)


def mcl_keygen(pp: MclPublicParams, rng) -> MclKeyPair:
    """Sample g from G^* and x, y, z from Z_p^*.  Draw order: g, x, y, z."""
    g = random_nonidentity(pp.group, rng)
    x = random_nonzero_scalar(pp.group, rng)
    y = random_nonzero_scalar(pp.group, rng)
    z = random_nonzero_scalar(pp.group, rng)
    vk = MclVerifyingKey(g=g, X=g ** x, Y=g ** y, Z=g ** z)
    return MclKeyPair(vk=vk, sk=MclSigningKey(x=x, y=y, z=z))


def mcl_sign(pp: MclPublicParams, sk: MclSigningKey, m: Scalar, rng) -> MclSignature:
    """Sign scalar m.  Draw order: w (from Z_p, zero allowed), A (from G^*)."""
    if m.group != pp.group:
        raise BackendMismatchError("message scalar from a different group")
    w = random_scalar(pp.group, rng)
    A = random_nonidentity(pp.group, rng)
    x, y, z = sk.x, sk.y, sk.z
    B = A ** y
    C = A ** z
    D = C ** y
    E = (A ** x) * (B ** (m * x)) * (D ** (w * x))
    return MclSignature(w=w, A=A, B=B, C=C, D=D, E=E)


def mcl_verify(pp: MclPublicParams, vk: MclVerifyingKey, m: Scalar,
               sig: MclSignature) -> bool:
    """Verdict of the four pairing checks; False is a rejection, not an error."""
    group = pp.group
    for el in (vk.g, vk.X, vk.Y, vk.Z, sig.A, sig.B, sig.C, sig.D, sig.E):
        if el.group != group:
            raise BackendMismatchError("element from a different group")
    if m.group != group or sig.w.group != group:
        raise BackendMismatchError("scalar from a different group")
    # A is sampled from G^*; the identity would vacuously satisfy the
    # auxiliary equations, so reject it outright.
    if sig.A.is_identity():
        return False
    if not pairings_equal(sig.A, vk.Y, sig.B, vk.g):
        return False
    if not pairings_equal(sig.A, vk.Z, sig.C, vk.g):
        return False
    if not pairings_equal(sig.C, vk.Y, sig.D, vk.g):
        return False
    combined = sig.A * (sig.B ** m) * (sig.D ** sig.w)
    return pairings_equal(combined, vk.X, sig.E, vk.g)
