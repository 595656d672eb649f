"""Rank-n binary branched covers of the sphere with GF(2) monodromy.

A cover is described by its deck rank n and a list of branch points, each
carrying a nonzero monodromy vector in GF(2)^n (encoded as an int bitmask,
bit j-1 for the j-th standard generator).  Everything else, component
counts, genera, fixed points, quotients and the full index-two
decomposition, is derived from this data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, NamedTuple

from mpmath import mpc

from .numerics import (
    DomainError,
    format_point,
    is_infinity,
    point_sort_key,
    points_equal,
    to_point,
)


class Disconnected(DomainError):
    """Operation requires a connected cover."""


class ZeroElement(DomainError):
    """The zero vector is not a deck-group element with fixed points."""


class DependentBasis(DomainError):
    """A subgroup basis contains GF(2)-dependent vectors."""


# GF(2) linear algebra on int bitmasks

def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank of a set of bit vectors over GF(2)."""
    pivots: dict[int, int] = {}
    rank = 0
    for v in vectors:
        v = _reduce(v, pivots)
        if v:
            pivots[v.bit_length() - 1] = v
            rank += 1
    return rank


def _reduce(v: int, pivots: dict[int, int]) -> int:
    while v:
        head = v.bit_length() - 1
        if head not in pivots:
            return v
        v ^= pivots[head]
    return 0


def gf2_in_span(v: int, vectors: Iterable[int]) -> bool:
    pivots: dict[int, int] = {}
    for u in vectors:
        u = _reduce(u, pivots)
        if u:
            pivots[u.bit_length() - 1] = u
    return _reduce(v, pivots) == 0


def pairing(functional: int, vector: int) -> int:
    """The GF(2) pairing <functional, vector> in {0, 1}."""
    return (functional & vector).bit_count() & 1


def functional_kernel_basis(functional: int, rank: int) -> list[int]:
    """A basis of the kernel of a nonzero functional on GF(2)^rank."""
    if functional == 0:
        raise ZeroElement("functional must be nonzero")
    if functional >> rank:
        raise ValueError("functional %s exceeds rank %d" % (bin(functional), rank))
    pivot = functional & -functional
    basis = []
    for j in range(rank):
        e = 1 << j
        if e == pivot:
            continue
        basis.append(e ^ pivot if pairing(functional, e) else e)
    return basis


class BranchDatum(NamedTuple):
    point: object
    vector: int


@dataclass(frozen=True)
class CoverModel:
    """Deck rank plus branch data; the XOR of all vectors must vanish."""

    rank: int
    branch: tuple

    def __init__(self, rank: int, branch):
        object.__setattr__(self, "rank", int(rank))
        data = tuple(BranchDatum(to_point(p), int(v)) for p, v in branch)
        object.__setattr__(self, "branch", data)
        self._validate()

    def _validate(self):
        if self.rank < 1:
            raise ValueError("deck rank must be positive")
        total = 0
        for point, vector in self.branch:
            if vector == 0:
                raise ValueError("branch point %s carries the zero vector"
                                 % format_point(point))
            if vector >> self.rank:
                raise ValueError("branch vector %s exceeds rank %d" % (bin(vector), self.rank))
            total ^= vector
        if total:
            raise ValueError("branch vectors do not XOR to zero (no sphere cover)")
        pts = [p for p, _ in self.branch]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if points_equal(pts[i], pts[j]):
                    raise ValueError("branch points coincide within tolerance: %s"
                                     % format_point(pts[i]))

    @property
    def vectors(self) -> list[int]:
        return [v for _, v in self.branch]

    @property
    def points(self) -> list:
        return [p for p, _ in self.branch]


@dataclass(frozen=True)
class FactorCurve:
    """A hyperelliptic equation y^2 = leading * prod (x - root).

    The root list is the branch set of the double cover; when it contains
    the point at infinity the corresponding linear factor is deleted from
    the equation (odd degree), which the genus count accounts for.
    """

    leading: mpc
    roots: tuple
    genus: int

    @property
    def finite_roots(self) -> list:
        return [r for r in self.roots if not is_infinity(r)]

    @property
    def deleted_infinity(self) -> bool:
        return any(is_infinity(r) for r in self.roots)


def factor_curve_from_branch_set(points, leading=1) -> FactorCurve:
    """Build the monic-by-default factor curve branched over the given set."""
    pts = sorted((to_point(p) for p in points), key=point_sort_key)
    if len(pts) % 2:
        raise ValueError("a double cover of the sphere needs an even branch count")
    genus = len(pts) // 2 - 1
    return FactorCurve(leading=mpc(leading), roots=tuple(pts), genus=genus)


@dataclass(frozen=True)
class DecompositionReport:
    total_genus: int
    factors: tuple  # of (functional, FactorCurve), functionals ascending
    genus_sum: int
    kani_rosen_ok: bool


def component_count(c: CoverModel) -> int:
    """Number of connected components: 2^(rank - rank of the monodromy span)."""
    return 1 << (c.rank - gf2_rank(c.vectors))


def total_genus(c: CoverModel) -> int:
    """Genus of a connected cover via Riemann-Hurwitz over the sphere."""
    if component_count(c) != 1:
        raise Disconnected("cover has %d components" % component_count(c))
    n, b = c.rank, len(c.branch)
    quarter, rem = divmod(b << n, 4)
    if rem:
        raise ValueError("inconsistent branch data for total genus")
    return 1 - (1 << n) + quarter


def component_genus(c: CoverModel) -> int:
    """Genus of one connected component (handles disconnected covers).

    A component is the connected cover with deck group the span V of the
    monodromy vectors, so its genus is 1 - |V| + B |V| / 4.
    """
    size = 1 << gf2_rank(c.vectors)
    b = len(c.branch)
    quarter, rem = divmod(b * size, 4)
    if rem:
        raise ValueError("inconsistent branch data for component genus")
    return 1 - size + quarter


def fixed_point_count(c: CoverModel, element: int) -> int:
    """Number of fixed points of a nonzero deck element on a connected cover."""
    if element == 0:
        raise ZeroElement("the identity fixes everything; element must be nonzero")
    if component_count(c) != 1:
        raise Disconnected("fixed-point counting requires a connected cover")
    hits = sum(1 for v in c.vectors if v == element)
    return hits * (1 << (c.rank - 1))


def _normalize_subgroup(c: CoverModel, subgroup) -> list[int]:
    """Accept an index-two functional (int) or an explicit basis (iterable)."""
    if isinstance(subgroup, int):
        return functional_kernel_basis(subgroup, c.rank)
    basis = [int(v) for v in subgroup]
    if gf2_rank(basis) != len(basis):
        raise DependentBasis("subgroup basis is GF(2)-dependent: %s"
                             % [bin(v) for v in basis])
    return basis


def quotient_genus(c: CoverModel, subgroup) -> int:
    """Genus of the quotient of a connected cover by a deck subgroup.

    With m the index of the subgroup and B the number of branch vectors
    outside it, the quotient genus is 1 - m + m B / 4.
    """
    if component_count(c) != 1:
        raise Disconnected("quotient genus requires a connected cover")
    basis = _normalize_subgroup(c, subgroup)
    index = 1 << (c.rank - gf2_rank(basis))
    outside = sum(1 for v in c.vectors if not gf2_in_span(v, basis))
    quarter, rem = divmod(index * outside, 4)
    if rem:
        raise ValueError("inconsistent ramification parity in quotient")
    return 1 - index + quarter


def quotient_equation(c: CoverModel, functional: int) -> FactorCurve:
    """Hyperelliptic equation of the quotient by the kernel of a functional.

    The branch set consists of the points whose monodromy vector pairs to 1
    with the functional.
    """
    if component_count(c) != 1:
        raise Disconnected("quotient equation requires a connected cover")
    if functional == 0:
        raise ZeroElement("functional must be nonzero")
    branch = [p for p, v in c.branch if pairing(functional, v)]
    return factor_curve_from_branch_set(branch)


def decompose(c: CoverModel) -> DecompositionReport:
    """Enumerate all index-two quotients and collect the positive-genus factors.

    Factors are listed by ascending functional bitmask.  The report is
    marked consistent when the factor genera sum to the total genus and the
    pairwise joins of the factor subgroups exhaust the deck group, which for
    kernels of distinct nonzero functionals is automatic (two distinct
    hyperplanes of GF(2)^n always span everything).
    """
    g_total = total_genus(c)
    factors = []
    genus_sum = 0
    vectors = c.vectors
    for functional in range(1, 1 << c.rank):
        outside = sum(1 for v in vectors if pairing(functional, v))
        genus = outside // 2 - 1
        if genus < 1:
            continue
        branch = [p for p, v in c.branch if pairing(functional, v)]
        factors.append((functional, factor_curve_from_branch_set(branch)))
        genus_sum += genus
    joins_full = len({f for f, _ in factors}) == len(factors)
    ok = joins_full and genus_sum == g_total
    return DecompositionReport(
        total_genus=g_total,
        factors=tuple(factors),
        genus_sum=genus_sum,
        kani_rosen_ok=ok,
    )


@dataclass
class KaniRosenDiagnostics:
    """Per-condition outcome of the decomposition criterion."""

    commuting_ok: bool
    join_failures: list = field(default_factory=list)  # ((i, j), genus) with genus > 0
    genus_sum: int = 0
    total_genus: int = 0

    @property
    def joins_ok(self) -> bool:
        return not self.join_failures

    @property
    def sum_ok(self) -> bool:
        return self.genus_sum == self.total_genus

    @property
    def ok(self) -> bool:
        return self.commuting_ok and self.joins_ok and self.sum_ok

    def __bool__(self) -> bool:
        return self.ok


def kani_rosen_criterion(c: CoverModel, subgroups) -> KaniRosenDiagnostics:
    """Check the decomposition hypotheses for an explicit list of subgroups.

    (1) all pairs commute, automatic in an abelian deck group once each
    entry is a genuine subgroup (independent basis); (2) the quotient by
    the join of each pair has genus zero; (3) the quotient genera sum to
    the total genus.  Failures are reported, not raised.
    """
    bases = [_normalize_subgroup(c, s) for s in subgroups]
    diag = KaniRosenDiagnostics(commuting_ok=True, total_genus=total_genus(c))
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            join_genus = quotient_genus(c, _independent(bases[i] + bases[j]))
            if join_genus != 0:
                diag.join_failures.append(((i, j), join_genus))
    diag.genus_sum = sum(quotient_genus(c, basis) for basis in bases)
    return diag


def _independent(vectors: list[int]) -> list[int]:
    pivots: dict[int, int] = {}
    out = []
    for v in vectors:
        v = _reduce(v, pivots)
        if v:
            pivots[v.bit_length() - 1] = v
            out.append(v)
    return out


# Exact genus-sum identities behind the two families

def reducible_genus_sum_identity(s: int) -> tuple[int, int]:
    """Sum of (k-1) over even k-subsets of s indices versus 1 + 2^(s-2)(s-2).

    This is the bookkeeping that the index-two quotient genera of the
    two-component fiber-product family add up to its total genus.
    """
    if s < 3:
        raise ValueError("need s >= 3")
    lhs = sum(comb(s, k) * (k - 1) for k in range(2, s + 1) if k % 2 == 0)
    rhs = 1 + (1 << (s - 2)) * (s - 2)
    return lhs, rhs


def irreducible_genus_sum_identity(r: int) -> tuple[int, int]:
    """Odd subsets contribute (k+1)/2, even subsets of size >= 4 contribute
    (k-2)/2; together they match 1 + 2^(r-2)(r-1), the genus of the
    irreducible fiber-product family.
    """
    if r < 3:
        raise ValueError("need r >= 3")
    lhs = sum(comb(r, k) * (k + 1) // 2 for k in range(1, r + 1, 2))
    lhs += sum(comb(r, k) * (k - 2) // 2 for k in range(4, r + 1, 2))
    rhs = 1 + (1 << (r - 2)) * (r - 1)
    return lhs, rhs
