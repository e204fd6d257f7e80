"""Lee-Lee-Yung synchronized aggregate signatures over the MCL structure.

All signers share a period counter t and sign at most once per period; all
signatures for one period aggregate into a single element.  A signature on
message m at period t is E = H1(t)^sk * H2(t)^{m' sk} with m' = H3(t, m); an
aggregate is the product of the E's together with t.

Hash functions are pluggable: the default suite derives H1/H2 by
exponentiating the canonical generator with a domain-separated hash (the
standard trick for a symmetric-pairing emulation -- the exponents are
public-coin, so knowing them gives no signing advantage, but this is weaker
than a true random oracle into G).  The security-game harness injects
programmable table-backed suites instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BackendMismatchError,
    DuplicateKeyError,
    EmptyInputError,
    InvalidConstituentError,
    LengthMismatchError,
    MalformedEncodingError,
    MixedPeriodsError,
    PeriodOutOfBoundsError,
)
from .groups import (
    GroupDescription,
    GroupElement,
    Scalar,
    canonical_generator,
    deserialize_element,
    generate_group,
    hash_to_scalar,
    identity,
    mark_fixed_base,
    pairing_check,
    random_nonzero_scalar,
    serialize_element,
    serialize_group_description,
)

import hashlib

SIG_TAG = 0x01
AGG_TAG = 0x02

DEFAULT_SUITE_ID = "sha512-exp-v1"
_TAG_H1 = b"syncagg/H1"
_TAG_H2 = b"syncagg/H2"
_TAG_H3 = b"syncagg/H3"


@dataclass(frozen=True)
class HashConfig:
    suite_id: str = DEFAULT_SUITE_ID
    tag1: bytes = _TAG_H1
    tag2: bytes = _TAG_H2
    tag3: bytes = _TAG_H3


@dataclass(frozen=True)
class SasPublicParams:
    group: GroupDescription
    g: GroupElement
    T: int
    hash_config: HashConfig = HashConfig()

    def pp_id(self) -> bytes:
        """Hash of the serialized parameters, excluding the hash configuration."""
        h = hashlib.sha256()
        h.update(serialize_group_description(self.group))
        h.update(serialize_element(self.g))
        h.update(self.T.to_bytes(8, "big"))
        return h.digest()


@dataclass(frozen=True)
class SasKeyPair:
    vk: GroupElement
    sk: Scalar


@dataclass(frozen=True)
class SasSignature:
    E: GroupElement
    t: int

    def to_bytes(self) -> bytes:
        return bytes([SIG_TAG]) + self.t.to_bytes(8, "big") + serialize_element(self.E)

    @classmethod
    def from_bytes(cls, data: bytes, group: GroupDescription) -> "SasSignature":
        if len(data) != 9 + group.element_width() or data[0] != SIG_TAG:
            raise MalformedEncodingError("malformed encoding: not a signature")
        t = int.from_bytes(data[1:9], "big")
        return cls(E=deserialize_element(data[9:], group, "group"), t=t)


@dataclass(frozen=True)
class AggregateSignature:
    E_prime: GroupElement
    t: int

    def to_bytes(self) -> bytes:
        return bytes([AGG_TAG]) + self.t.to_bytes(8, "big") + serialize_element(self.E_prime)

    @classmethod
    def from_bytes(cls, data: bytes, group: GroupDescription) -> "AggregateSignature":
        if len(data) != 9 + group.element_width() or data[0] != AGG_TAG:
            raise MalformedEncodingError("malformed encoding: not an aggregate")
        t = int.from_bytes(data[1:9], "big")
        return cls(E_prime=deserialize_element(data[9:], group, "group"), t=t)


# ---------------------------------------------------------------------------
# Hash suites
# ---------------------------------------------------------------------------


class DeterministicHashSuite:
    """Domain-separated deterministic instantiation of H1, H2, H3.

    H1(t) = gen^{hash(tag1 || pp_id || t)}; H2(t) retries a one-byte counter
    until the exponent is nonzero (so the output is never the identity);
    H3(t, m) hashes straight to Z_p.  H1/H2 values are memoized per period.
    """

    def __init__(self, pp: SasPublicParams):
        self._group = pp.group
        self._gen = canonical_generator(pp.group)
        self._pp_id = pp.pp_id()
        self._cfg = pp.hash_config
        self._h1_cache: dict = {}
        self._h2_cache: dict = {}

    def h1(self, t: int) -> GroupElement:
        el = self._h1_cache.get(t)
        if el is None:
            s = hash_to_scalar(self._group, self._cfg.tag1, self._pp_id,
                               t.to_bytes(8, "big"))
            el = self._gen ** s
            self._h1_cache[t] = el
        return el

    def h2(self, t: int) -> GroupElement:
        el = self._h2_cache.get(t)
        if el is None:
            for ctr in range(256):
                s = hash_to_scalar(self._group, self._cfg.tag2, self._pp_id,
                                   t.to_bytes(8, "big") + bytes([ctr]))
                if not s.is_zero():
                    el = self._gen ** s
                    break
            else:
                raise RuntimeError("H2 retry counter exhausted (unreachable)")
            self._h2_cache[t] = el
        return el

    def h3(self, t: int, m: bytes) -> Scalar:
        return hash_to_scalar(self._group, self._cfg.tag3, self._pp_id,
                              t.to_bytes(8, "big"), m)


class TableHashSuite:
    """Hash suite backed by explicit tables; for tests with forced values."""

    def __init__(self, h1_table: dict, h2_table: dict, h3_table: dict):
        self._h1 = h1_table
        self._h2 = h2_table
        self._h3 = h3_table

    def h1(self, t: int) -> GroupElement:
        return self._h1[t]

    def h2(self, t: int) -> GroupElement:
        el = self._h2[t]
        if el.is_identity():
            raise ValueError("H2 table contains the identity")
        return el

    def h3(self, t: int, m: bytes) -> Scalar:
        return self._h3[(t, m)]


@lru_cache(maxsize=64)
def _suite_for(pp: SasPublicParams) -> DeterministicHashSuite:
    return DeterministicHashSuite(pp)


def hash_h1(pp: SasPublicParams, t: int) -> GroupElement:
    _check_period(pp, t)
    return _suite_for(pp).h1(t)


def hash_h2(pp: SasPublicParams, t: int) -> GroupElement:
    _check_period(pp, t)
    return _suite_for(pp).h2(t)


def hash_h3(pp: SasPublicParams, t: int, m: bytes) -> Scalar:
    _check_period(pp, t)
    return _suite_for(pp).h3(t, m)


def _check_period(pp: SasPublicParams, t: int):
    if not 1 <= t <= pp.T:
        raise PeriodOutOfBoundsError("period out of bounds")


# ---------------------------------------------------------------------------
# Scheme operations
# ---------------------------------------------------------------------------


def sas_setup(backend: str = "production", *, T: int, security_level: int = 128,
              toy_modulus: int = 101, rng) -> SasPublicParams:
    """Generate parameters with period bound T; g = canonical_generator^r."""
    if T < 1:
        raise ValueError("period bound T must be >= 1")
    desc, gen = generate_group(backend, security_level=security_level,
                               toy_modulus=toy_modulus, rng=rng)
    r = random_nonzero_scalar(desc, rng)
    g = mark_fixed_base(gen ** r)
    return SasPublicParams(group=desc, g=g, T=T)


def sas_keygen(pp: SasPublicParams, rng) -> SasKeyPair:
    x = random_nonzero_scalar(pp.group, rng)
    return SasKeyPair(vk=pp.g ** x, sk=x)


def sas_sign(pp: SasPublicParams, sk: Scalar, t: int, m: bytes,
             *, hash_suite=None) -> SasSignature:
    """Deterministic signature E = H1(t)^sk * H2(t)^{m' sk}, m' = H3(t, m)."""
    _check_period(pp, t)
    suite = hash_suite if hash_suite is not None else _suite_for(pp)
    m_prime = suite.h3(t, m)
    E = (suite.h1(t) ** sk) * (suite.h2(t) ** (m_prime * sk))
    return SasSignature(E=E, t=t)


def sas_verify(pp: SasPublicParams, vk: GroupElement, m: bytes,
               sig: SasSignature, *, hash_suite=None) -> bool:
    """Verdict of e(E, g) == e(H1(t) H2(t)^{m'}, vk); exactly 2 pairings."""
    if vk.group != pp.group or sig.E.group != pp.group:
        raise BackendMismatchError("element from a different group")
    if not 1 <= sig.t <= pp.T:
        return False
    suite = hash_suite if hash_suite is not None else _suite_for(pp)
    m_prime = suite.h3(sig.t, m)
    lhs = suite.h1(sig.t) * (suite.h2(sig.t) ** m_prime)
    return pairing_check([(sig.E, pp.g), (lhs.inverse(), vk)])


def sas_aggregate(pp: SasPublicParams, vks: list, msgs: list, sigs: list,
                  *, hash_suite=None, skip_validation: bool = False) -> AggregateSignature:
    """Validate constituents and multiply them into (prod E_i, t).

    ``skip_validation`` exists for benchmarking only; the scheme checks every
    constituent signature before aggregation.
    """
    if len(vks) != len(msgs) or len(msgs) != len(sigs):
        raise LengthMismatchError("length mismatch")
    if not vks:
        raise EmptyInputError("empty input")
    t0 = sigs[0].t
    for s in sigs[1:]:
        if s.t != t0:
            raise MixedPeriodsError("mixed periods")
    if len(set(vks)) != len(vks):
        raise DuplicateKeyError("duplicate verification key")
    if not skip_validation:
        for i, (vk, m, s) in enumerate(zip(vks, msgs, sigs)):
            if not sas_verify(pp, vk, m, s, hash_suite=hash_suite):
                raise InvalidConstituentError(i)
    acc = identity(pp.group)
    for s in sigs:
        acc = acc * s.E
    return AggregateSignature(E_prime=acc, t=t0)


def sas_agg_verify(pp: SasPublicParams, vks: list, msgs: list,
                   agg: AggregateSignature, *, hash_suite=None) -> bool:
    """Verdict of the three-pairing aggregate equation.

    e(E', g) == e(H1(t), prod vk_i) * e(H2(t), prod vk_i^{m'_i}); duplicate
    keys yield 0.  Exactly 3 pairing evaluations.
    """
    if len(vks) != len(msgs):
        raise LengthMismatchError("length mismatch")
    if not vks:
        raise EmptyInputError("empty input")
    for vk in vks:
        if vk.group != pp.group:
            raise BackendMismatchError("element from a different group")
    if agg.E_prime.group != pp.group:
        raise BackendMismatchError("element from a different group")
    if len(set(vks)) != len(vks):
        return False
    t = agg.t
    if not 1 <= t <= pp.T:
        return False
    suite = hash_suite if hash_suite is not None else _suite_for(pp)
    vk_prod = identity(pp.group)
    weighted = identity(pp.group)
    for vk, m in zip(vks, msgs):
        vk_prod = vk_prod * vk
        weighted = weighted * (vk ** suite.h3(t, m))
    return pairing_check([
        (agg.E_prime.inverse(), pp.g),
        (suite.h1(t), vk_prod),
        (suite.h2(t), weighted),
    ])
