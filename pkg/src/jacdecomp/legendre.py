"""Legendre-form genus-1 curve bookkeeping.

A curve y^2 = x(x-1)(x-t) is admissible for t outside {0, 1}.  Two
parameters describe isomorphic curves exactly when they lie in the same
orbit of the six-element group generated by t -> 1/t and t -> 1 - t.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mpc

from .numerics import (
    DomainError,
    MobiusMap,
    NotInvolution,
    close,
    cross_ratio_lambda,
    format_point,
    points_equal,
    to_complex,
    to_point,
)


class InvalidDomain(DomainError):
    """A parameter tuple violates its admissibility domain."""


def require_admissible(value, name: str = "lambda") -> mpc:
    """Check membership in the base domain (finite, away from 0 and 1)."""
    lam = to_complex(value)
    if close(lam, 0) or close(lam, 1):
        raise InvalidDomain("%s = %s is not admissible (too close to 0 or 1)"
                            % (name, format_point(lam)))
    return lam


def require_admissible_tuple(values, name: str = "lambda") -> list[mpc]:
    """Check a tuple of admissible, pairwise-distinct parameters."""
    out = [require_admissible(v, "%s_%d" % (name, i + 1)) for i, v in enumerate(values)]
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            if close(out[i], out[j]):
                raise InvalidDomain(
                    "%s_%d and %s_%d coincide within tolerance (%s)"
                    % (name, i + 1, name, j + 1, format_point(out[i])))
    return out


def s3_orbit(value) -> list[mpc]:
    """Closure of a parameter under t -> 1/t and t -> 1 - t (2, 3 or 6 values)."""
    lam = require_admissible(value)
    orbit = [lam]
    queue = [lam]
    while queue:
        t = queue.pop()
        for image in (1 / t, 1 - t):
            if not any(close(image, v) for v in orbit):
                orbit.append(image)
                queue.append(image)
    return orbit


def j_invariant(value) -> mpc:
    """256 (1 - t + t^2)^3 / (t^2 (1 - t)^2); constant on each parameter orbit."""
    lam = require_admissible(value)
    num = 256 * (1 - lam + lam * lam) ** 3
    return num / (lam * lam * (1 - lam) ** 2)


def same_curve(l1, l2) -> bool:
    """True when the two parameters describe isomorphic genus-1 curves."""
    l2 = require_admissible(l2)
    return any(close(l2, v) for v in s3_orbit(l1))


def lambda_of_quartic(p1, p2, p3, p4) -> mpc:
    """Normalize four distinct branch points to (inf, 0, 1, t) and return t.

    The result depends on the ordering; callers compare via same_curve so
    the ambiguity is absorbed by the parameter orbit.
    """
    return cross_ratio_lambda(p1, p2, p3, p4)


@dataclass
class PairingResult:
    """Outcome of pairing a branch set under an involution."""

    pairs: list[tuple] = field(default_factory=list)
    offender: object = None

    @property
    def ok(self) -> bool:
        return self.offender is None

    def __bool__(self) -> bool:
        return self.ok


def branch_set_pairing(m: MobiusMap, points) -> PairingResult:
    """Pair up a branch set under an involution.

    Returns the induced fixed-point-free pairing when the map permutes the
    set; otherwise a failed result carrying the first offending point (one
    that is fixed, or whose image leaves the set).
    """
    if not m.is_involution():
        raise NotInvolution("map with matrix (%s, %s; %s, %s) is not an involution"
                            % (m.a, m.b, m.c, m.d))
    pts = [to_point(p) for p in points]
    result = PairingResult()
    used = [False] * len(pts)
    for i, p in enumerate(pts):
        if used[i]:
            continue
        image = m.apply(p)
        if points_equal(image, p):
            return PairingResult(pairs=result.pairs, offender=p)
        partner = None
        for j in range(len(pts)):
            if j != i and not used[j] and points_equal(image, pts[j]):
                partner = j
                break
        if partner is None:
            return PairingResult(pairs=result.pairs, offender=p)
        used[i] = used[partner] = True
        result.pairs.append((p, pts[partner]))
    return result
