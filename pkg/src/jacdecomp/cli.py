"""Command-line front end: construct, decompose and verify the families.

Exit status is 0 when every requested check passes, 1 when a check fails,
and 2 for usage or domain errors.  JSON output is canonical: keys sorted,
all numeric values rendered as literal strings at 17 significant digits,
so parse/re-serialize round-trips are byte identical.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from mpmath import mpc

from . import constructions as cons
from . import cover, legendre, numerics
from .numerics import format_point, parse_point

DIGITS = 17


@dataclass
class RunConfig:
    precision_bits: int = numerics.DEFAULT_PRECISION_BITS
    epsilon: str = numerics.DEFAULT_EPSILON
    output_format: str = "text"
    seed: int = 0


def fmt(value) -> str:
    return format_point(value, DIGITS)


def functional_bits(functional: int, rank: int) -> str:
    """Render a functional as a bit string, coordinate 1 first."""
    return "".join("1" if (functional >> j) & 1 else "0" for j in range(rank))


def render_factor_curve(curve: cover.FactorCurve, var: str = "x") -> str:
    terms = [fmt(curve.leading)]
    for root in curve.finite_roots:
        terms.append("(%s - %s)^1" % (var, fmt(root)))
    return "y^2 = " + " * ".join(terms)


def render_curve_equation(eq: cons.CurveEquation) -> str:
    name = "w_" + "".join(str(b) for b in eq.alpha)
    terms = [fmt(eq.constant)]
    for root, exponent in eq.factors:
        terms.append("(z - %s)^%d" % (fmt(root), exponent))
    return "%s^2 = %s" % (name, " * ".join(terms))


def branch_table(model: cover.CoverModel) -> list[dict]:
    return [
        {"point": fmt(point), "vector": functional_bits(vector, model.rank)}
        for point, vector in model.branch
    ]


# ---------------------------------------------------------------------------
# Construction selectors shared by `construct` and `decompose`


def _parse_values(text: str) -> list:
    return [parse_point(tok) for tok in text.split(",") if tok.strip()]


def build_from_args(args) -> dict:
    """Resolve a construction subcommand into model, params and metadata."""
    kind = args.construction
    if kind == "genus2":
        l1, l2 = parse_point(args.l1), parse_point(args.l2)
        equation, model = cons.build_genus2(l1, l2)
        return {
            "type": "genus2",
            "model": model,
            "candidates": [l1, l2],
            "construction": {
                "type": "genus2",
                "l1": fmt(l1),
                "l2": fmt(l2),
                "eta1": fmt(equation.eta1),
                "eta2": fmt(equation.eta2),
            },
            "equations": ["y^2 = (x^2 - 1) * (x^2 - %s) * (x^2 - %s)"
                          % (fmt(equation.eta1), fmt(equation.eta2))],
        }
    if kind == "reducible":
        if args.chain:
            chain = cons.chain_with_auxiliary(_parse_values(args.chain))
            params = cons.solve_mu_chain(chain)
            candidates = list(chain)
            extra = {"chain": [fmt(v) for v in chain]}
        else:
            if args.lam is None or args.mu is None:
                raise legendre.InvalidDomain(
                    "reducible needs either --chain or both --lambda and --mu")
            mus = _parse_values(args.mu)
            if len(mus) < 2 or len(mus) % 2:
                raise legendre.InvalidDomain(
                    "--mu needs an even number (>= 2) of values")
            pairs = tuple((mus[i], mus[i + 1]) for i in range(0, len(mus), 2))
            params = cons.ReducibleParams(parse_point(args.lam), pairs)
            candidates = params.flat()
            extra = {}
        model = cons.build_reducible(params)
        equations = cons.derive_equations_reducible(params)
        info = {
            "type": "reducible",
            "s": params.s,
            "lambda": fmt(params.lam),
            "mu": [[fmt(a), fmt(b)] for a, b in params.mu],
        }
        info.update(extra)
        return {
            "type": "reducible",
            "model": model,
            "candidates": candidates,
            "construction": info,
            "equations": [render_curve_equation(eq) for eq in equations],
        }
    if kind == "irreducible":
        values = _parse_values(args.lambdas)
        model = cons.build_irreducible(values)
        eqs = ["y_%d^2 = (x - 0)^1 * (x - 1)^1 * (x - %s)^1" % (j + 1, fmt(v))
               for j, v in enumerate(values)]
        return {
            "type": "irreducible",
            "model": model,
            "candidates": values,
            "construction": {
                "type": "irreducible",
                "r": len(values),
                "lambdas": [fmt(v) for v in values],
            },
            "equations": eqs,
        }
    if kind == "genus9":
        lam, mu = parse_point(args.lam), parse_point(args.mu)
        params = cons.genus9_parameters(lam, mu)
        model = cons.build_reducible(params)
        equations = cons.derive_equations_reducible(params)
        return {
            "type": "genus9",
            "model": model,
            "candidates": params.flat(),
            "construction": {
                "type": "genus9",
                "lambda": fmt(lam),
                "mu": fmt(mu),
                "derived_mu": [[fmt(a), fmt(b)] for a, b in params.mu],
            },
            "equations": [render_curve_equation(eq) for eq in equations],
        }
    raise legendre.InvalidDomain("unknown construction %r" % kind)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--precision", type=int, default=None,
                        help="working precision in bits (>= 53)")
    common.add_argument("--epsilon", default=None,
                        help="comparison tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized cross-checks")
    return common


def _add_construction_parsers(sub, common) -> None:
    g2 = sub.add_parser("genus2", parents=[common],
                        help="rank-2 cover with two genus-1 factors")
    g2.add_argument("--l1", required=True)
    g2.add_argument("--l2", required=True)
    red = sub.add_parser("reducible", parents=[common],
                         help="two-component fiber product family")
    red.add_argument("--lambda", dest="lam")
    red.add_argument("--mu", help="comma-separated pairs m11,m12[,m21,m22,...]")
    red.add_argument("--chain", help="comma-separated target parameters (solver picks mu)")
    irr = sub.add_parser("irreducible", parents=[common],
                         help="irreducible fiber product family")
    irr.add_argument("--lambdas", required=True)
    g9 = sub.add_parser("genus9", parents=[common],
                        help="genus-9 completely split family")
    g9.add_argument("--lambda", dest="lam", required=True)
    g9.add_argument("--mu", required=True)


# ---------------------------------------------------------------------------
# Commands


def cmd_construct(args, config: RunConfig) -> tuple[dict, int]:
    built = build_from_args(args)
    model = built["model"]
    payload = {
        "construction": built["construction"],
        "genus": cover.total_genus(model),
        "equations": built["equations"],
        "branch": branch_table(model),
        "checks": {},
    }
    return payload, 0


def cmd_decompose(args, config: RunConfig) -> tuple[dict, int]:
    built = build_from_args(args)
    model = built["model"]
    report = cover.decompose(model)
    factors = []
    for functional, curve in report.factors:
        entry = {
            "functional": functional_bits(functional, model.rank),
            "genus": curve.genus,
            "equation": render_factor_curve(curve),
            "deleted_infinity": curve.deleted_infinity,
            "orbit_of": None,
        }
        if curve.genus == 1:
            invariant = cons.factor_lambda_invariant(curve)
            entry["orbit_of"] = fmt(invariant)
            for candidate in built["candidates"]:
                if legendre.same_curve(candidate, invariant):
                    entry["orbit_of"] = fmt(candidate)
                    break
        factors.append(entry)
    payload = {
        "construction": built["construction"],
        "genus": report.total_genus,
        "factors": factors,
        "genus_sum": report.genus_sum,
        "kani_rosen_ok": report.kani_rosen_ok,
        "checks": {},
    }
    return payload, 0 if report.kani_rosen_ok else 1


def cmd_verify(args, config: RunConfig) -> tuple[dict, int]:
    checks: dict[str, dict] = {}
    if args.verification == "identities":
        for s in range(3, args.max + 1):
            lhs, rhs = cover.reducible_genus_sum_identity(s)
            checks["reducible_s%d" % s] = {"pass": lhs == rhs, "lhs": lhs, "rhs": rhs}
            lhs, rhs = cover.irreducible_genus_sum_identity(s)
            checks["irreducible_r%d" % s] = {"pass": lhs == rhs, "lhs": lhs, "rhs": rhs}
    elif args.verification == "g5":
        report = cons.check_genus5_family(parse_point(args.l1), parse_point(args.l2))
        checks["pairing"] = {
            "pass": bool(report.pairing),
            "pairs": [[fmt(a), fmt(b)] for a, b in report.pairing.pairs],
        }
        checks["elliptic_count"] = {
            "pass": report.elliptic_count == 5,
            "count": report.elliptic_count,
        }
        checks["factor_genera"] = {
            "pass": sorted(report.factor_genera) == [1, 1, 1, 2],
            "genera": sorted(report.factor_genera),
        }
    elif args.verification == "g13":
        try:
            report = cons.check_genus13_family(parse_point(args.l1), parse_point(args.l2))
        except cons.ConstraintViolated as exc:
            checks["constraint"] = {"pass": False, "residual": fmt(exc.residual)}
            return {"checks": checks, "ok": False}, 1
        checks["constraint"] = {"pass": True, "residual": fmt(report.residual)}
        checks["derived_parameters"] = {
            "pass": True,
            "l3": fmt(report.lambdas[2]),
            "l4": fmt(report.lambdas[3]),
        }
        for functional, pairing in sorted(report.pairings.items()):
            checks["pairing_%s" % functional_bits(functional, 4)] = {
                "pass": bool(pairing),
                "pairs": [[fmt(a), fmt(b)] for a, b in pairing.pairs],
            }
        checks["elliptic_count"] = {
            "pass": report.elliptic_count == 13,
            "count": report.elliptic_count,
        }
    elif args.verification == "bound":
        value = cons.genus_upper_bound(args.r)
        s = (args.r + 4) // 2 if args.r % 2 == 0 else (args.r + 3) // 2
        via_chain = 1 + (1 << (s - 2)) * (s - 2)
        checks["bound_r%d" % args.r] = {
            "pass": value == via_chain,
            "bound": value,
            "construction_genus": via_chain,
        }
    elif args.verification == "crosscheck":
        checks.update(_crosscheck(args.s, config.seed))
    ok = all(entry["pass"] for entry in checks.values())
    return {"checks": checks, "ok": ok}, 0 if ok else 1


def _random_admissible(rng: random.Random, count: int) -> list[mpc]:
    values: list[mpc] = []
    while len(values) < count:
        z = mpc(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(z) < 0.1 or abs(z - 1) < 0.1:
            continue
        if any(abs(z - v) < 0.1 for v in values):
            continue
        values.append(z)
    return values


def _crosscheck(s: int, seed: int) -> dict:
    """Derived equation system versus closed forms and raw form products."""
    if s < 3:
        raise legendre.InvalidDomain("crosscheck needs s >= 3")
    rng = random.Random(seed)
    checks: dict[str, dict] = {}
    if s == 3:
        l1, l2, l3 = _random_admissible(rng, 3)
        mu = cons.solve_mu_genus3(l1, l2, l3)
        params = cons.ReducibleParams(l1, ((mu, l3 * mu),))
        reference = cons.reference_system_s3(l1, l3, mu)
    else:
        draw = _random_admissible(rng, 2 * s - 3)
        params = cons.ReducibleParams(
            draw[0],
            tuple((draw[1 + 2 * k], draw[2 + 2 * k]) for k in range(s - 2)))
        reference = None
        if s == 4:
            reference = cons.reference_system_s4(
                params.lam, params.mu[0][0], params.mu[0][1],
                params.mu[1][0], params.mu[1][1])
    equations = cons.derive_equations_reducible(params)
    if reference is not None:
        for comp in cons.compare_with_reference(equations, reference):
            name = "closed_form_w_" + "".join(str(b) for b in comp.alpha)
            checks[name] = {
                "pass": comp.ok,
                "constant_error": "%.3g" % comp.constant_error,
                "max_root_error": "%.3g" % comp.max_root_error,
            }
    samples = [mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(20)]
    errors = cons.sampled_identity_errors(params, equations, samples)
    checks["sampled_identity"] = {
        "pass": max(errors) <= 1e-9,
        "max_error": "%.3g" % max(errors),
        "equations": len(equations),
    }
    constant_ok = all(
        abs(cons.closed_form_constant(params, eq.alpha) - eq.constant)
        <= 1e-9 * (1 + abs(eq.constant))
        for eq in equations)
    checks["closed_form_constants"] = {"pass": constant_ok}
    return checks


# ---------------------------------------------------------------------------
# Output and entry point


def emit(payload: dict, config: RunConfig) -> None:
    if config.output_format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return
    _emit_text(payload)


def _emit_text(payload: dict, indent: str = "") -> None:
    for key in payload:
        value = payload[key]
        if isinstance(value, dict):
            print("%s%s:" % (indent, key))
            _emit_text(value, indent + "  ")
        elif isinstance(value, list):
            print("%s%s:" % (indent, key))
            for item in value:
                if isinstance(item, dict):
                    parts = ("%s=%s" % (k, v) for k, v in item.items())
                    print("%s  - %s" % (indent, ", ".join(parts)))
                else:
                    print("%s  - %s" % (indent, item))
        else:
            print("%s%s = %s" % (indent, key, value))


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacdecomp",
        description="Construct, decompose and verify families of curves "
                    "with decomposable Jacobians.")
    common = _common_options()
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="emit a family instance")
    _add_construction_parsers(
        construct.add_subparsers(dest="construction", required=True), common)

    decomp = commands.add_parser("decompose", help="factor an instance's Jacobian")
    _add_construction_parsers(
        decomp.add_subparsers(dest="construction", required=True), common)

    verify = commands.add_parser("verify", help="run verification checks")
    checks = verify.add_subparsers(dest="verification", required=True)
    ident = checks.add_parser("identities", parents=[common],
                              help="exact genus-sum identities")
    ident.add_argument("--max", type=int, default=24)
    g5 = checks.add_parser("g5", parents=[common], help="genus-5 split family")
    g5.add_argument("--l1", required=True)
    g5.add_argument("--l2", required=True)
    g13 = checks.add_parser("g13", parents=[common], help="genus-13 split family")
    g13.add_argument("--l1", required=True)
    g13.add_argument("--l2", required=True)
    bound = checks.add_parser("bound", parents=[common],
                              help="minimal-genus upper bound")
    bound.add_argument("--r", type=int, required=True)
    cross = checks.add_parser("crosscheck", parents=[common],
                              help="equation-system cross-checks")
    cross.add_argument("--s", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    config = RunConfig(output_format=args.format, seed=args.seed)
    try:
        if args.precision is not None:
            numerics.set_precision(args.precision)
            config.precision_bits = args.precision
        if args.epsilon is not None:
            numerics.set_epsilon(args.epsilon)
            config.epsilon = args.epsilon
        handler = {
            "construct": cmd_construct,
            "decompose": cmd_decompose,
            "verify": cmd_verify,
        }[args.command]
        payload, status = handler(args, config)
    except (numerics.DomainError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    emit(payload, config)
    return status


if __name__ == "__main__":
    sys.exit(main())
