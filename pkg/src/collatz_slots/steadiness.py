"""Orbit steadiness: exact products, log-domain approximations, level identity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InvalidInputError
from .orbit import OrbitRecord

LITERAL = "literal"
TELESCOPING = "telescoping"
MODES = (LITERAL, TELESCOPING)

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class SteadinessValue:
    mode: str
    exact: Fraction
    log2_approx: float


def factor_log2(k: int) -> float:
    """``log2((k - 1) / k)`` without cancellation for large ``k``."""
    return math.log1p(-1.0 / k) / _LN2


def literal_factors(rec: OrbitRecord) -> list[int]:
    """Orbit-set members ``k = 4 (mod 6)``, ascending, each once."""
    return sorted(k for k in rec.orbit_set if k % 6 == 4)


def telescoping_factors(rec: OrbitRecord) -> list[int]:
    return list(rec.odd_images)


def _factors(rec: OrbitRecord, mode: str) -> list[int]:
    if mode == LITERAL:
        return literal_factors(rec)
    if mode == TELESCOPING:
        return telescoping_factors(rec)
    raise InvalidInputError(f"unknown steadiness mode {mode!r}")


def exact_product(ks: Iterable[int]) -> Fraction:
    # Fraction normalises after every multiplication, which keeps the
    # numerator and denominator near their reduced size.
    value = Fraction(1)
    for k in ks:
        value *= Fraction(k - 1, k)
    return value


def sigma_log2(rec: OrbitRecord, mode: str) -> float:
    return math.fsum(factor_log2(k) for k in _factors(rec, mode))


def _value(rec: OrbitRecord, mode: str) -> SteadinessValue:
    ks = _factors(rec, mode)
    return SteadinessValue(mode, exact_product(ks), math.fsum(factor_log2(k) for k in ks))


def sigma_literal(rec: OrbitRecord) -> SteadinessValue:
    """Product of ``(k-1)/k`` over the orbit set, ``k = 4 (mod 6)``."""
    return _value(rec, LITERAL)


def sigma_telescoping(rec: OrbitRecord) -> SteadinessValue:
    """Product of ``(k-1)/k`` over the images of the tripling steps.

    Satisfies ``n == 2**nu / 6**kappa * value`` exactly.
    """
    return _value(rec, TELESCOPING)


def sigma(rec: OrbitRecord, mode: str) -> SteadinessValue:
    return _value(rec, mode)


@dataclass(frozen=True)
class IdentityVerdict:
    holds: bool
    lhs: int
    rhs: int
    mode: str = TELESCOPING

    def __bool__(self) -> bool:
        return self.holds


def verify_level_identity(rec: OrbitRecord, mode: str = TELESCOPING) -> IdentityVerdict:
    """Check ``n * 6**kappa * den == 2**nu * num`` in integer arithmetic.

    Only the telescoping product is expected to satisfy it; ``mode=literal``
    exists to exhibit where the orbit-set product does not.
    """
    value = _value(rec, mode).exact
    lhs = rec.n * 6**rec.kappa * value.denominator
    rhs = 2**rec.nu * value.numerator
    return IdentityVerdict(lhs == rhs, lhs, rhs, mode)


def level_ratio(rec: OrbitRecord) -> Fraction:
    """``n * 6**kappa / 2**nu``, the position of ``n`` inside its slot."""
    return Fraction(rec.n * 6**rec.kappa, 2**rec.nu)
