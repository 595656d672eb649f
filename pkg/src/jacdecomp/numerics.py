"""Complex arithmetic on the Riemann sphere.

Working values are mpmath complex numbers at a configurable binary
precision (default 128 bits of mantissa).  The point at infinity is a
dedicated symbol, never a large float.  All comparisons go through a
single global tolerance, default 1e-9.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from mpmath import isfinite, mp, mpc, mpf, sqrt

DEFAULT_PRECISION_BITS = 128
DEFAULT_EPSILON = "1e-9"

_PRECISION_ENV = "JACDECOMP_PRECISION"


class DomainError(ValueError):
    """Base class for violated preconditions on domain values."""


class CollidingPoints(DomainError):
    """Two sphere points required to be distinct coincide within tolerance."""


class DegenerateLeadingCoefficient(DomainError):
    """Quadratic solver called with |a| below tolerance."""


class NotInvolution(DomainError):
    """A Mobius map required to be an involution is not one."""


def set_precision(bits: int) -> None:
    """Set the working mantissa precision in bits (>= 53)."""
    if bits < 53:
        raise ValueError("precision must be at least 53 bits, got %r" % bits)
    mp.prec = bits


def precision() -> int:
    return mp.prec


def set_epsilon(eps) -> None:
    """Set the global comparison tolerance (> 0)."""
    global _epsilon
    value = mpf(eps)
    if not value > 0:
        raise ValueError("epsilon must be positive, got %r" % eps)
    _epsilon = value


def epsilon() -> mpf:
    return _epsilon


set_precision(int(os.environ.get(_PRECISION_ENV, DEFAULT_PRECISION_BITS)))
_epsilon = mpf(DEFAULT_EPSILON)


class _Infinity:
    """The point at infinity of the Riemann sphere (a unique symbol)."""

    __slots__ = ()

    def __repr__(self):
        return "inf"


INFINITY = _Infinity()

# A sphere point is either INFINITY or a finite mpc value.
SpherePoint = object


def is_infinity(p) -> bool:
    return isinstance(p, _Infinity)


def to_complex(x) -> mpc:
    """Coerce a finite numeric input (number or literal string) to mpc."""
    if isinstance(x, _Infinity):
        raise ValueError("expected a finite value, got the point at infinity")
    z = parse_complex(x) if isinstance(x, str) else mpc(x)
    if not isfinite(z):
        raise ValueError("non-finite value %r not admitted" % x)
    return z


def to_point(x):
    """Coerce an input to a sphere point; strings go through the literal grammar."""
    if isinstance(x, _Infinity):
        return INFINITY
    if isinstance(x, str):
        return parse_point(x)
    return to_complex(x)


def close(a, b) -> bool:
    """Tolerance equality of two finite values."""
    return abs(mpc(a) - mpc(b)) <= _epsilon


def points_equal(p, q) -> bool:
    """Tolerance equality on the sphere."""
    if is_infinity(p) or is_infinity(q):
        return is_infinity(p) and is_infinity(q)
    return close(p, q)


def point_sort_key(p):
    """Deterministic ordering key: infinity first, then by (re, im)."""
    if is_infinity(p):
        return (0, 0.0, 0.0)
    return (1, float(p.real), float(p.imag))


def format_complex(z, digits: int = 17) -> str:
    """Render a finite value in the literal grammar at fixed significant digits."""
    z = mpc(z)
    re_s = _format_real(z.real, digits)
    im = float(z.imag)
    if im == 0.0:
        return re_s
    im_s = _format_real(abs(z.imag), digits)
    sign = "-" if im < 0 else "+"
    if float(z.real) == 0.0:
        return ("-" if im < 0 else "") + im_s + "i"
    return re_s + sign + im_s + "i"


def format_point(p, digits: int = 17) -> str:
    return "inf" if is_infinity(p) else format_complex(p, digits)


def _format_real(x, digits: int) -> str:
    v = float(x)
    if v == 0.0:
        v = 0.0  # fold -0.0 into one rendering
    return "%.*g" % (digits, v)


_REAL = r"[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?|\.[0-9]+(?:[eE][+-]?[0-9]+)?"
_COMPONENT = re.compile(r"^([+-]?)((?:%s)(?:/(?:%s))?)?(i?)$" % (_REAL, _REAL))


def parse_point(text: str):
    """Parse a sphere-point literal: the complex grammar plus the token inf."""
    if text.strip().lower() == "inf":
        return INFINITY
    return parse_complex(text)


def parse_complex(text: str) -> mpc:
    """Parse a complex literal.

    Accepted forms: decimal or rational (p/q) real and imaginary components,
    e.g. "2", "-1.5", "3/4", "2+3i", "1/2-3/4i", "i", "-2i", and a whole
    parenthesized value divided by a real, e.g. "(4+1.4142i)/3".
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s.startswith("("):
        depth, idx = 0, None
        for k, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    idx = k
                    break
        if idx is None:
            raise ValueError("unbalanced parenthesis in %r" % text)
        inner = parse_complex(s[1:idx])
        rest = s[idx + 1:]
        if not rest:
            return inner
        if not rest.startswith("/"):
            raise ValueError("malformed literal %r" % text)
        return inner / _parse_real(rest[1:])
    parts = _split_terms(s)
    real = mpf(0)
    imag = mpf(0)
    seen_imag = False
    seen_real = False
    for part in parts:
        m = _COMPONENT.match(part)
        if not m:
            raise ValueError("malformed complex literal %r" % text)
        sign, body, unit = m.groups()
        if body is None and not unit:
            raise ValueError("malformed complex literal %r" % text)
        value = _parse_real(body) if body else mpf(1)
        if sign == "-":
            value = -value
        if unit:
            if seen_imag:
                raise ValueError("repeated imaginary part in %r" % text)
            imag = value
            seen_imag = True
        else:
            if seen_real:
                raise ValueError("repeated real part in %r" % text)
            real = value
            seen_real = True
    return mpc(real, imag)


def _split_terms(s: str) -> list[str]:
    terms = []
    start = 0
    for k in range(1, len(s)):
        if s[k] in "+-" and s[k - 1] not in "eE+-/":
            terms.append(s[start:k])
            start = k
    terms.append(s[start:])
    if not 1 <= len(terms) <= 2:
        raise ValueError("malformed complex literal %r" % s)
    return terms


def _parse_real(token: str) -> mpf:
    if "/" in token:
        num, den = token.split("/", 1)
        d = mpf(den)
        if d == 0:
            raise ValueError("zero denominator in %r" % token)
        return mpf(num) / d
    return mpf(token)


@dataclass(frozen=True)
class MobiusMap:
    """The map z -> (a z + b) / (c z + d) with nonzero determinant."""

    a: mpc
    b: mpc
    c: mpc
    d: mpc

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, to_complex(getattr(self, name)))
        if abs(self.determinant()) <= _epsilon:
            raise ValueError("Mobius map is singular: |ad - bc| <= epsilon")

    def determinant(self) -> mpc:
        return self.a * self.d - self.b * self.c

    def apply(self, p):
        """Evaluate on a sphere point, with projective pole conventions."""
        if is_infinity(p):
            if abs(self.c) <= _epsilon:
                return INFINITY
            return self.a / self.c
        z = to_complex(p)
        den = self.c * z + self.d
        if abs(den) <= _epsilon:
            return INFINITY
        return (self.a * z + self.b) / den

    def __call__(self, p):
        return self.apply(p)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """Return the map z -> self(other(z))."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def is_involution(self) -> bool:
        """True when the map composed with itself is the identity (within tolerance)."""
        m2 = self.compose(self)
        scale = max(abs(m2.a), abs(m2.b), abs(m2.c), abs(m2.d))
        return (
            abs(m2.b) <= _epsilon * scale
            and abs(m2.c) <= _epsilon * scale
            and abs(m2.a - m2.d) <= _epsilon * scale
        )


def identity_map() -> MobiusMap:
    return MobiusMap(1, 0, 0, 1)


def mobius_apply(m: MobiusMap, p):
    """Projective action of a Mobius map on a sphere point."""
    return m.apply(p)


def _require_distinct(points) -> None:
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if points_equal(pts[i], pts[j]):
                raise CollidingPoints(
                    "points %s and %s coincide within tolerance"
                    % (format_point(pts[i]), format_point(pts[j]))
                )


def mobius_to_standard(p1, p2, p3) -> MobiusMap:
    """The unique Mobius map sending (p1, p2, p3) to (inf, 0, 1)."""
    _require_distinct([p1, p2, p3])
    if is_infinity(p1):
        z2, z3 = to_complex(p2), to_complex(p3)
        return MobiusMap(1, -z2, 0, z3 - z2)
    if is_infinity(p2):
        z1, z3 = to_complex(p1), to_complex(p3)
        return MobiusMap(0, z3 - z1, 1, -z1)
    if is_infinity(p3):
        z1, z2 = to_complex(p1), to_complex(p2)
        return MobiusMap(1, -z2, 1, -z1)
    z1, z2, z3 = to_complex(p1), to_complex(p2), to_complex(p3)
    return MobiusMap(z3 - z1, -z2 * (z3 - z1), z3 - z2, -z1 * (z3 - z2))


def cross_ratio_lambda(p1, p2, p3, p4) -> mpc:
    """The value t with some Mobius map sending (p1, p2, p3, p4) to (inf, 0, 1, t).

    The four points must be pairwise distinct, so the result is finite and
    avoids 0 and 1.
    """
    _require_distinct([p1, p2, p3, p4])
    value = mobius_to_standard(p1, p2, p3).apply(p4)
    if is_infinity(value):
        raise CollidingPoints("fourth point collides with the first within tolerance")
    return value


def solve_quadratic(a, b, c) -> tuple[mpc, mpc]:
    """Both roots of a*x^2 + b*x + c = 0, in a deterministic order.

    The root with non-negative imaginary part comes first; ties are broken
    by descending real part.
    """
    a, b, c = to_complex(a), to_complex(b), to_complex(c)
    if abs(a) <= _epsilon:
        raise DegenerateLeadingCoefficient("leading coefficient is zero within tolerance")
    disc = b * b - 4 * a * c
    root = sqrt(disc)
    r1 = (-b + root) / (2 * a)
    r2 = (-b - root) / (2 * a)

    def key(r):
        return (0 if r.imag >= 0 else 1, -float(r.real), -float(r.imag))

    r1, r2 = sorted((r1, r2), key=key)
    return r1, r2
