"""Builders and solvers for the decomposable-Jacobian families.

Three cover families are constructed from tuples of genus-1 parameters:
the rank-2 genus-2 cover, the two-component fiber product of s curves
sharing branch values (modelled directly on one component, deck rank s-1),
and the irreducible fiber product of r curves branched over a common
(inf, 0, 1) triple (deck rank r).  Solvers pick the auxiliary parameters
that force prescribed genus-1 factors, with every choice certified by
independent cross-ratio oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from mpmath import mpc, mpf, sqrt

from .cover import CoverModel, FactorCurve, decompose
from .legendre import (
    InvalidDomain,
    PairingResult,
    branch_set_pairing,
    lambda_of_quartic,
    require_admissible_tuple,
    same_curve,
)
from .numerics import (
    INFINITY,
    DomainError,
    MobiusMap,
    close,
    epsilon,
    format_point,
    solve_quadratic,
    to_complex,
)


class DegenerateParameter(DomainError):
    """Derived parameters collide or a required denominator vanishes."""


class NoValidRoot(DomainError):
    """Neither quadratic root satisfies the domain and oracle conditions."""


class ConstraintViolated(DomainError):
    """The defining polynomial constraint of a family is not satisfied."""

    def __init__(self, message: str, residual):
        super().__init__(message)
        self.residual = residual


class OutOfRange(DomainError):
    """Argument outside the range covered by a closed-form bound."""


# ---------------------------------------------------------------------------
# Genus two


@dataclass(frozen=True)
class Genus2Equation:
    """The curve y^2 = (x^2 - 1)(x^2 - eta1)(x^2 - eta2)."""

    eta1: mpc
    eta2: mpc

    def __post_init__(self):
        object.__setattr__(self, "eta1", to_complex(self.eta1))
        object.__setattr__(self, "eta2", to_complex(self.eta2))
        pts = [mpc(1), mpc(-1)]
        for eta in (self.eta1, self.eta2):
            root = sqrt(eta)
            pts.extend([root, -root])
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if close(pts[i], pts[j]):
                    raise InvalidDomain("genus-2 branch points collide: %s"
                                        % format_point(pts[i]))

    def normalizing_map(self) -> MobiusMap:
        """The map sending (1, eta1, eta2) to (1, inf, 0).

        Applied to the squared-coordinate branch values it recovers the two
        defining parameters: inf goes to the first, 0 to the second.
        """
        one = mpc(1)
        return MobiusMap(
            one - self.eta1,
            -(one - self.eta1) * self.eta2,
            one - self.eta2,
            -(one - self.eta2) * self.eta1,
        )


def build_genus2(l1, l2) -> tuple[Genus2Equation, CoverModel]:
    """Genus-2 curve whose Jacobian splits into the two given genus-1 factors.

    Returns the even hyperelliptic model together with the rank-2 cover
    branched over (inf, 0, 1, l1, l2); the deck quotients by the two
    coordinate involutions are the prescribed curves.
    """
    l1, l2 = require_admissible_tuple([l1, l2])
    eta1 = (l1 - 1) / (l2 - 1)
    eta2 = l2 * (l1 - 1) / (l1 * (l2 - 1))
    equation = Genus2Equation(eta1, eta2)
    model = CoverModel(2, [
        (INFINITY, 0b11),
        (mpc(0), 0b11),
        (mpc(1), 0b11),
        (l1, 0b01),
        (l2, 0b10),
    ])
    return equation, model


# ---------------------------------------------------------------------------
# The two-component fiber product family (deck rank s - 1)


@dataclass(frozen=True)
class ReducibleParams:
    """One base parameter plus (s-2) pairs; the full tuple must be
    pairwise distinct and avoid 0 and 1."""

    lam: mpc
    mu: tuple  # ((mu_1_1, mu_1_2), ..., (mu_{s-2}_1, mu_{s-2}_2))

    def __init__(self, lam, mu):
        pairs = tuple((to_complex(a), to_complex(b)) for a, b in mu)
        if not pairs:
            raise InvalidDomain("need at least one parameter pair (s >= 3)")
        object.__setattr__(self, "lam", to_complex(lam))
        object.__setattr__(self, "mu", pairs)
        require_admissible_tuple(self.flat(), name="p")

    @property
    def s(self) -> int:
        return len(self.mu) + 2

    def flat(self) -> list[mpc]:
        out = [self.lam]
        for a, b in self.mu:
            out.extend([a, b])
        return out


def build_reducible(params: ReducibleParams) -> CoverModel:
    """One component of the fiber product of s curves sharing branch values.

    Deck rank s-1 with standard generators; the last pair of branch points
    carries the product of all generators, so the total monodromy vanishes.
    """
    s = params.s
    full = (1 << (s - 1)) - 1
    branch = [
        (INFINITY, 0b1),
        (mpc(0), 0b1),
        (mpc(1), 0b10),
        (params.lam, 0b10),
    ]
    for k in range(1, s - 2):
        vec = 1 << (k + 1)
        branch.append((params.mu[k - 1][0], vec))
        branch.append((params.mu[k - 1][1], vec))
    branch.append((params.mu[s - 3][0], full))
    branch.append((params.mu[s - 3][1], full))
    return CoverModel(s - 1, branch)


def build_raw_fiber_product(params: ReducibleParams) -> CoverModel:
    """The full fiber product of the s curves, deck rank s, two components.

    Each branch value is shared by exactly two of the curves, so its
    monodromy is the sum of the two corresponding coordinate generators.
    """
    s = params.s
    branch = [
        (INFINITY, 0b1 | (1 << (s - 1))),
        (mpc(0), 0b1 | (1 << (s - 1))),
        (mpc(1), 0b11),
        (params.lam, 0b11),
    ]
    for k in range(1, s - 1):
        vec = (1 << k) | (1 << (k + 1))
        branch.append((params.mu[k - 1][0], vec))
        branch.append((params.mu[k - 1][1], vec))
    return CoverModel(s, branch)


# ---------------------------------------------------------------------------
# Explicit equations for the two-component family


class CurveEquation(NamedTuple):
    """One defining equation w^2 = constant * prod (z - root)^exponent."""

    alpha: tuple
    constant: mpc
    factors: tuple  # of (root, exponent)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def evaluate(self, z) -> mpc:
        value = self.constant
        z = to_complex(z)
        for root, exponent in self.factors:
            value *= (z - root) ** exponent
        return value


def alpha_to_functional(alpha) -> int:
    functional = 0
    for j, bit in enumerate(alpha[:-1]):
        if bit:
            functional |= 1 << j
    return functional


def functional_to_alpha(functional: int, s: int) -> tuple:
    bits = [(functional >> j) & 1 for j in range(s - 1)]
    bits.append(sum(bits) & 1)
    return tuple(bits)


def _coordinate_forms(params: ReducibleParams):
    """Linear forms (constant, coefficient) grouped by deck coordinate.

    Eliminating the ambient quadric variables against the last parameter
    row leaves each squared coordinate as a linear polynomial in z; the
    group with index j collects the forms that the j-th deck coordinate
    contributes to an equation.
    """
    s = params.s
    pivot = params.mu[s - 3][1]
    groups: list[list[tuple[mpc, mpc]]] = []
    groups.append([(mpc(0), mpc(1)), (mpc(-1), -pivot)])
    groups.append([(mpc(1), pivot - 1), (mpc(1), pivot - params.lam)])
    for k in range(1, s - 2):
        a, b = params.mu[k - 1]
        groups.append([(mpc(1), pivot - a), (mpc(1), pivot - b)])
    groups.append([(mpc(1), pivot - params.mu[s - 3][0])])
    return groups


def derive_equations_reducible(params: ReducibleParams) -> list[CurveEquation]:
    """Expand the eliminated linear forms into the explicit equation system.

    One equation per even-weight nonzero exponent pattern alpha, ordered by
    ascending functional bitmask; the constant is the product of the form
    leading coefficients and the roots are the form zeros.
    """
    s = params.s
    groups = _coordinate_forms(params)
    for group in groups:
        for _, coeff in group:
            if abs(coeff) <= epsilon():
                raise DegenerateParameter("vanishing linear-form coefficient")
    equations = []
    for functional in range(1, 1 << (s - 1)):
        alpha = functional_to_alpha(functional, s)
        constant = mpc(1)
        factors = []
        for j, bit in enumerate(alpha):
            if not bit:
                continue
            for const, coeff in groups[j]:
                constant *= coeff
                factors.append((-const / coeff, 1))
        equations.append(CurveEquation(alpha=alpha, constant=constant,
                                       factors=tuple(factors)))
    return equations


def form_product_value(params: ReducibleParams, alpha, z) -> mpc:
    """Product of the raw (unexpanded) linear forms selected by alpha at z."""
    groups = _coordinate_forms(params)
    z = to_complex(z)
    value = mpc(1)
    for j, bit in enumerate(alpha):
        if not bit:
            continue
        for const, coeff in groups[j]:
            value *= const + coeff * z
    return value


# ---------------------------------------------------------------------------
# Parameter solvers


def solve_mu_genus3(l1, l2, l3) -> mpc:
    """Auxiliary parameter making the s=3 construction split into the three
    prescribed genus-1 factors.

    Returns a root mu of the defining quadratic such that (l1, mu, l3*mu)
    is admissible and the two branch-set cross-ratio oracles match l2 and
    l3 up to parameter equivalence.
    """
    l1, l2, l3 = require_admissible_tuple([l1, l2, l3])
    a = l2 * l3
    b = -(l1 * l2 + l2 * l3 + l1 * l3 - l1 - l3 + 1)
    c = l1 * l2
    failures = []
    for mu in solve_quadratic(a, b, c):
        try:
            ReducibleParams(l1, ((mu, l3 * mu),))
        except InvalidDomain as exc:
            failures.append(str(exc))
            continue
        if not same_curve(l2, lambda_of_quartic(1, l1, mu, l3 * mu)):
            failures.append("orbit oracle for second factor failed at mu=%s"
                            % format_point(mu))
            continue
        if not same_curve(l3, lambda_of_quartic(INFINITY, 0, mu, l3 * mu)):
            failures.append("orbit oracle for third factor failed at mu=%s"
                            % format_point(mu))
            continue
        return mu
    raise NoValidRoot("no quadratic root passes the domain and oracle checks: %s"
                      % "; ".join(failures))


def genus9_parameters(lam, mu) -> ReducibleParams:
    """Parameters of the s=4 family whose Jacobian splits into nine
    genus-1 factors.

    The two derived pairs are matched so that x -> lam/x and
    x -> lam(x-1)/(x-lam) both permute the eight branch points without
    fixed points, which is also verified here.
    """
    lam, mu = require_admissible_tuple([lam, mu])
    m11 = mu
    m12 = lam / mu
    m21 = lam * (mu - 1) / (mu - lam)
    m22 = (mu - lam) / (mu - 1)
    try:
        params = ReducibleParams(lam, ((m11, m12), (m21, m22)))
    except InvalidDomain as exc:
        raise DegenerateParameter("derived parameters collide: %s" % exc) from exc
    points = [INFINITY, mpc(0), mpc(1), lam, m11, m12, m21, m22]
    for m in (MobiusMap(0, lam, 1, 0), MobiusMap(lam, -lam, 1, -lam)):
        if not branch_set_pairing(m, points):
            raise DegenerateParameter(
                "branch-set involution fails to pair the eight points")
    return params


def genus_upper_bound(r: int) -> int:
    """Smallest constructed genus carrying r prescribed genus-1 factors."""
    if r < 4:
        raise OutOfRange("bound is stated for r >= 4, got %r" % r)
    if r % 2 == 0:
        return 1 + (1 << ((r - 2) // 2)) * r
    return 1 + (1 << ((r - 3) // 2)) * (r - 1)


def solve_mu_chain(lambdas) -> ReducibleParams:
    """Chain of quadratic solves realizing r = 2s-3 prescribed genus-1
    factors inside the two-component family.

    For each pair index j the second entry is lambda_{j+1} times the first,
    which pins the (inf, 0) branch-set factor, and the quadratic pins the
    (1, lam) branch-set factor to lambda_{s-1+j}.  Both roots are tried in
    a deterministic order and every acceptance is certified by the
    cross-ratio oracles and by admissibility of the accumulated tuple.
    """
    values = require_admissible_tuple(lambdas)
    r = len(values)
    if r < 3 or r % 2 == 0:
        raise InvalidDomain("need an odd number r >= 3 of parameters, got %d" % r)
    s = (r + 3) // 2
    lam = values[0]
    accumulated = [lam]
    pairs = []
    for j in range(1, s - 1):
        ratio = values[j]
        target = values[s - 2 + j]
        a = ratio * (1 - target)
        b = target - ratio - lam + lam * ratio * target
        c = lam * (1 - target)
        failures = []
        chosen = None
        for mu1 in solve_quadratic(a, b, c):
            mu2 = ratio * mu1
            try:
                require_admissible_tuple(accumulated + [mu1, mu2], name="p")
            except InvalidDomain as exc:
                failures.append(str(exc))
                continue
            if not same_curve(ratio, lambda_of_quartic(INFINITY, 0, mu1, mu2)):
                failures.append("ratio oracle failed at pair %d" % j)
                continue
            if not same_curve(target, lambda_of_quartic(1, lam, mu1, mu2)):
                failures.append("target oracle failed at pair %d" % j)
                continue
            chosen = (mu1, mu2)
            break
        if chosen is None:
            raise NoValidRoot("pair %d: no root passes the checks: %s"
                              % (j, "; ".join(failures)))
        accumulated.extend(chosen)
        pairs.append(chosen)
    return ReducibleParams(lam, tuple(pairs))


def chain_with_auxiliary(lambdas) -> list[mpc]:
    """Pad an even-length parameter list with one auxiliary value.

    The auxiliary curve starts at -1 and steps by -1/4 until it clears the
    existing parameters, making the even case a deterministic instance of
    the odd chain.
    """
    values = require_admissible_tuple(lambdas)
    if len(values) % 2 == 1:
        return values
    aux = mpf(-1)
    while any(close(aux, v) for v in values):
        aux -= mpf(1) / 4
    return values + [mpc(aux)]


# ---------------------------------------------------------------------------
# The irreducible fiber product family (deck rank r)


def build_irreducible(lambdas) -> CoverModel:
    """Fiber product of r curves all branched over (inf, 0, 1, lambda_j).

    Deck rank r; each lambda_j carries the j-th generator and the three
    shared branch points carry the product of all generators.
    """
    values = require_admissible_tuple(lambdas)
    r = len(values)
    if r < 3:
        raise InvalidDomain("need at least three parameters, got %d" % r)
    full = (1 << r) - 1
    branch = [(INFINITY, full), (mpc(0), full), (mpc(1), full)]
    for j, lam in enumerate(values):
        branch.append((lam, 1 << j))
    return CoverModel(r, branch)


@dataclass
class Genus5Report:
    """Outcome of the genus-5 completely-split family check."""

    lambdas: tuple
    factor_genera: tuple
    pairing: PairingResult
    elliptic_count: int

    @property
    def ok(self) -> bool:
        return bool(self.pairing) and self.elliptic_count == 5


def check_genus5_family(l1, l2) -> Genus5Report:
    """Verify that the r=3 product with third parameter l1/l2 splits
    completely: three genus-1 quotients plus a genus-2 quotient whose
    branch set is paired by x -> l1/x."""
    l1, l2 = require_admissible_tuple([l1, l2])
    l3 = l1 / l2
    values = require_admissible_tuple([l1, l2, l3])
    model = build_irreducible(values)
    report = decompose(model)
    genera = tuple(curve.genus for _, curve in report.factors)
    genus2 = [curve for _, curve in report.factors if curve.genus == 2]
    if len(genus2) != 1:
        raise InvalidDomain("expected exactly one genus-2 factor, got %d" % len(genus2))
    pairing = branch_set_pairing(MobiusMap(0, l1, 1, 0), genus2[0].roots)
    count = sum(1 for g in genera if g == 1) + (2 if pairing else 0)
    return Genus5Report(lambdas=(l1, l2, l3), factor_genera=genera,
                        pairing=pairing, elliptic_count=count)


@dataclass
class Genus13Report:
    """Outcome of the genus-13 completely-split family check."""

    lambdas: tuple
    residual: mpc
    factor_genera: tuple
    pairings: dict
    elliptic_count: int

    @property
    def ok(self) -> bool:
        return all(bool(p) for p in self.pairings.values()) and self.elliptic_count == 13


def check_genus13_family(l1, l2) -> Genus13Report:
    """Verify the one-parameter genus-13 family.

    The third and fourth parameters are derived from the first two; the
    split requires the defining quadratic constraint on (l1, l2) to hold,
    after which four involutions pair the branch sets of the four genus-2
    quotients.
    """
    l1, l2 = require_admissible_tuple([l1, l2])
    if close(l2, l1):
        raise InvalidDomain("the two parameters must differ")
    l3 = l1 / l2
    l4 = l1 * (l2 - 1) / (l2 - l1)
    values = require_admissible_tuple([l1, l2, l3, l4])
    residual = l2 * l2 * (1 + l1) - 4 * l1 * l2 + l1 * (1 + l1)
    if abs(residual) > epsilon():
        raise ConstraintViolated(
            "constraint residual %s exceeds tolerance" % format_point(residual),
            residual)
    model = build_irreducible(values)
    report = decompose(model)
    genera = tuple(curve.genus for _, curve in report.factors)
    curves = {functional: curve for functional, curve in report.factors}
    maps = {
        0b0111: MobiusMap(0, l1, 1, 0),
        0b1011: MobiusMap(l1, -l1, 1, -l1),
        0b1101: MobiusMap(1, -l1, 1, -1),
        0b1110: MobiusMap(l2, -l2 * l3, 1, -l2),
    }
    pairings = {}
    split = 0
    for functional, mob in sorted(maps.items()):
        pairing = branch_set_pairing(mob, curves[functional].roots)
        pairings[functional] = pairing
        if pairing:
            split += 2
    elliptic = sum(1 for g in genera if g == 1) + split
    return Genus13Report(lambdas=tuple(values), residual=residual,
                         factor_genera=genera, pairings=pairings,
                         elliptic_count=elliptic)


def factor_lambda_invariant(curve: FactorCurve) -> mpc:
    """Normalized parameter of a genus-1 factor (compare via same_curve)."""
    if curve.genus != 1:
        raise ValueError("lambda invariant requires a genus-1 factor")
    p1, p2, p3, p4 = curve.roots
    return lambda_of_quartic(p1, p2, p3, p4)


# ---------------------------------------------------------------------------
# Closed-form cross-checks of the derived equation systems


def closed_form_constant(params: ReducibleParams, alpha) -> mpc:
    """The published product formula for an equation constant.

    Recomputed directly from the parameter tuple rather than from the
    elimination pipeline, for cross-checking.
    """
    s = params.s
    pivot = params.mu[s - 3][1]
    value = mpc(1)
    if alpha[0]:
        value *= -pivot
    if alpha[1]:
        value *= (pivot - 1) * (pivot - params.lam)
    for k in range(1, s - 2):
        if alpha[k + 1]:
            a, b = params.mu[k - 1]
            value *= (pivot - a) * (pivot - b)
    if alpha[s - 1]:
        value *= pivot - params.mu[s - 3][0]
    return value


def reference_system_s3(l1, l3, mu) -> dict:
    """Expected s=3 equation system for the substitution (l1, mu, l3*mu).

    Closed forms in (l1, l3, mu), obtained independently from the quotient
    branch-set bookkeeping: each exponent pattern selects the branch values
    pairing nontrivially with it, transported to the z coordinate.
    """
    l1, l3, mu = to_complex(l1), to_complex(l3), to_complex(mu)
    e0 = -1 / (l3 * mu)
    e1 = 1 / (1 - l3 * mu)
    e2 = 1 / (l1 - l3 * mu)
    e3 = 1 / (mu * (1 - l3))
    return {
        (0, 1, 1): (mu * (l3 * mu - 1) * (l3 * mu - l1) * (l3 - 1), [e1, e2, e3]),
        (1, 0, 1): (-l3 * mu * mu * (l3 - 1), [mpc(0), e0, e3]),
        (1, 1, 0): (-l3 * mu * (l3 * mu - 1) * (l3 * mu - l1), [mpc(0), e0, e1, e2]),
    }


def reference_system_s4(lam, m11, m12, m21, m22) -> dict:
    """Expected s=4 equation system in closed form, including the composite
    last equation (the all-ones pattern is the product of the (0,1,1,0)
    and (1,0,0,1) equations)."""
    lam, m11, m12, m21, m22 = (to_complex(v) for v in (lam, m11, m12, m21, m22))
    e0 = -1 / m22
    e1 = 1 / (1 - m22)
    e2 = 1 / (lam - m22)
    e11 = 1 / (m11 - m22)
    e12 = 1 / (m12 - m22)
    e3 = 1 / (m21 - m22)
    k3 = (m22 - 1) * (m22 - lam) * (m22 - m11) * (m22 - m12)
    k4 = -m22 * (m22 - m21)
    return {
        (0, 0, 1, 1): ((m22 - m11) * (m22 - m12) * (m22 - m21), [e11, e12, e3]),
        (0, 1, 0, 1): ((m22 - 1) * (m22 - lam) * (m22 - m21), [e1, e2, e3]),
        (0, 1, 1, 0): (k3, [e1, e2, e11, e12]),
        (1, 0, 0, 1): (k4, [mpc(0), e0, e3]),
        (1, 0, 1, 0): (-m22 * (m22 - m11) * (m22 - m12), [mpc(0), e0, e11, e12]),
        (1, 1, 0, 0): (-m22 * (m22 - 1) * (m22 - lam), [mpc(0), e0, e1, e2]),
        (1, 1, 1, 1): (k3 * k4, [e1, e2, e11, e12, mpc(0), e0, e3]),
    }


class EquationComparison(NamedTuple):
    alpha: tuple
    constant_error: float
    roots_matched: bool
    max_root_error: float

    @property
    def ok(self) -> bool:
        return self.roots_matched and self.constant_error <= 1e-9 \
            and self.max_root_error <= 1e-9


def compare_with_reference(equations, reference) -> list[EquationComparison]:
    """Match each derived equation against a closed-form reference system.

    Constants are compared relatively; roots are matched as multisets with
    the relative matching error reported.
    """
    by_alpha = {eq.alpha: eq for eq in equations}
    out = []
    for alpha, (constant, roots) in sorted(reference.items()):
        eq = by_alpha[alpha]
        c_err = float(abs(eq.constant - constant) / (1 + abs(constant)))
        derived = [root for root, exp in eq.factors for _ in range(exp)]
        matched = True
        max_err = 0.0
        remaining = list(derived)
        for want in roots:
            best_idx, best = None, None
            for idx, have in enumerate(remaining):
                err = float(abs(have - want) / (1 + abs(want)))
                if best is None or err < best:
                    best_idx, best = idx, err
            if best_idx is None or best > 1e-6:
                matched = False
                max_err = float("inf") if best is None else max(max_err, best)
                continue
            max_err = max(max_err, best)
            remaining.pop(best_idx)
        if remaining:
            matched = False
        out.append(EquationComparison(alpha=alpha, constant_error=c_err,
                                      roots_matched=matched, max_root_error=max_err))
    return out


def sampled_identity_errors(params: ReducibleParams, equations, samples) -> list[float]:
    """Relative error between each expanded equation and the raw form
    product at the given sample points."""
    errors = []
    for eq in equations:
        worst = 0.0
        for z in samples:
            expanded = eq.evaluate(z)
            raw = form_product_value(params, eq.alpha, z)
            worst = max(worst, float(abs(expanded - raw) / (1 + abs(raw))))
        errors.append(worst)
    return errors
