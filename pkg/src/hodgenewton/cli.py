"""Command-line entry point: ``hodgenewton <subcommand> [options]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .cache import SumCache
from .errors import HodgeNewtonError, InvalidPolytopeError, ValidationError
from .expsums import set_threads
from .fields import DEFAULT_TORUS_BUDGET, require_prime
from .hodge import hodge_numbers, polygon_from_hodge
from .laurent import format_laurent, parse_laurent
from .lfunction import deligne_check, l_polynomial, newton_polygon, newton_polytope, nondegeneracy_witness_search
from .ordinarity import DeligneGeometry, counterexample_driver, deligne_polytope, facial_diagnosis, gnp_sample, necessary_condition, sample_family
from .polygon import LowerConvexPolygon, polygon_compare, polygon_to_csv, polygon_to_json
from .polytope import IntegralPolytope, hull, hull_from_normals

log = logging.getLogger("hodgenewton")

# large prime used to read coefficients when only the support of f matters
SUPPORT_PRIME = 2**31 - 1


def emit_polygon(poly: LowerConvexPolygon, fmt: str) -> str:
    if fmt == "csv":
        return polygon_to_csv(poly)
    if fmt == "json":
        return json.dumps(polygon_to_json(poly))
    return str(poly)


def _frac(x) -> Fraction:
    if isinstance(x, list):
        return Fraction(x[0], x[1])
    return Fraction(x)


def load_polytope(path: str) -> IntegralPolytope:
    """Read {"dim", "vertices", "facets": [{"normal": [[num, den], ...], "contains_origin"}]}."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read polytope file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    try:
        verts = [tuple(int(x) for x in v) for v in data["vertices"]]
        dim = int(data.get("dim", len(verts[0])))
        if "facets" in data:
            normals = [([_frac(x) for x in f["normal"]], bool(f.get("contains_origin", False))) for f in data["facets"]]
            return hull_from_normals(dim, verts, normals)
    except (KeyError, IndexError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, HodgeNewtonError):
            raise
        raise InvalidPolytopeError(f"{path}: malformed polytope description ({exc})") from exc
    return hull(verts, dim)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise ValidationError(f"{args.command} needs " + ", ".join("--" + n for n in missing))


def _poly(args, p: int | None = None):
    p = args.p if p is None else p
    return parse_laurent(args.poly, p)


def _family(args) -> bool:
    return args.n is not None or args.d is not None


def _target_polytope(args) -> tuple[IntegralPolytope, object]:
    """Polytope from --poly, --polytope-file or the Deligne family --n/--d, plus a support hint."""
    if args.poly is not None:
        f = _poly(args, args.p or SUPPORT_PRIME)
        f.require_nonzero()
        return newton_polytope(f), f
    if args.polytope_file is not None:
        return load_polytope(args.polytope_file), None
    if _family(args):
        _require(args, "n", "d")
        geom = deligne_polytope(args.n, args.d)
        return geom.Delta, geom
    raise ValidationError(f"{args.command} needs --poly, --polytope-file or --n/--d")


def _cache(args):
    return SumCache(args.cache_dir) if args.cache_dir else None


def _family_member(args):
    _require(args, "n", "d", "p")
    f = sample_family(args.n, args.d, args.p, 1, args.seed)[0]
    log.info("sampled family member %s", f)
    return f


# -- subcommands ---------------------------------------------------------------------------

def cmd_hodge(args) -> tuple[dict, str, str]:
    polytope, _ = _target_polytope(args)
    data = hodge_numbers(polytope)
    poly = polygon_from_hodge(data)
    out = {
        "D": data.D,
        "volume": data.volume,
        "W": {str(k): data.W[k] for k in range(data.n * data.D + 1)},
        "H": {str(k): data.H[k] for k in range(data.n * data.D + 1)},
        "warnings": data.warnings,
        "hodge_polygon": polygon_to_json(poly),
    }
    text = "\n".join([f"D = {data.D}", f"n!V = {data.volume}",
                      "H = " + " ".join(f"{k}:{data.H[k]}" for k in range(data.n * data.D + 1)),
                      f"HP = {poly}"] + [f"warning: {w}" for w in data.warnings])
    return out, text, polygon_to_csv(poly)


def _lpoly(args):
    if args.poly is not None:
        _require(args, "p")
        f = _poly(args)
    else:
        f = _family_member(args)
    set_threads(args.threads)
    L = l_polynomial(f, args.q_degree, budget=args.budget, cache=_cache(args))
    return f, L


def cmd_newton(args):
    f, L = _lpoly(args)
    np_ = newton_polygon(L)
    out = {"f": str(f), "L": L.to_json(), "newton_polygon": polygon_to_json(np_)}
    if not L.integral:
        out["warning"] = "non-integral coefficients: f is probably degenerate"
    text = f"f = {f}\nN = {L.degree}\nintegral = {L.integral}\nNP = {np_}"
    return out, text, polygon_to_csv(np_)


def cmd_compare(args):
    f, L = _lpoly(args)
    np_ = newton_polygon(L)
    hp = polygon_from_hodge(hodge_numbers(newton_polytope(f)))
    rep = polygon_compare(np_, hp)
    out = {"f": str(f), "newton_polygon": polygon_to_json(np_), "hodge_polygon": polygon_to_json(hp),
           "comparison": rep.to_dict(), "ordinary": np_ == hp}
    if args.max_k:
        out["nondegeneracy"] = nondegeneracy_witness_search(f, args.max_k, args.q_degree, args.budget).to_dict()
    text = (f"f = {f}\nNP = {np_}\nHP = {hp}\nNP above HP: {rep.lies_above}\n"
            f"same endpoints: {rep.endpoints_equal}\nordinary: {np_ == hp}")
    if not rep.equal and rep.first_divergence is not None:
        text += f"\nfirst divergence at x = {rep.first_divergence}"
    csv = "polygon,x,y,approx\n" + "\n".join(
        f"{name},{row}" for name, poly in (("NP", np_), ("HP", hp)) for row in polygon_to_csv(poly).splitlines())
    return out, text, csv


def cmd_diagnose(args):
    _require(args, "p")
    require_prime(args.p)
    polytope, hint = _target_polytope(args)
    if isinstance(hint, DeligneGeometry):
        diag = facial_diagnosis(polytope, args.p, hint.family_support())
    else:
        diag = facial_diagnosis(hint if hint is not None else polytope, args.p)
    out = diag.to_dict()
    out["necessary_condition"] = necessary_condition(args.p, polytope)
    lines = []
    for f in diag.facets:
        lines.append(f"facet {[list(v) for v in f.vertices]}: D = {f.D}, p mod D = {f.p_mod_D}, "
                     f"{'stable' if f.stable else 'unstable'}")
    lines.append(f"verdict: {diag.verdict}")
    csv = "facet,D,p_mod_D,stable\n" + "\n".join(
        f"\"{[list(v) for v in f.vertices]}\",{f.D},{f.p_mod_D},{f.stable}" for f in diag.facets)
    return out, "\n".join(lines), csv


def cmd_deligne(args):
    if args.poly is not None:
        _require(args, "p")
        rep = deligne_check(_poly(args), max(args.max_k or 1, 1))
        out = rep.to_dict()
        return out, f"Deligne: {rep.is_deligne} ({rep.method}: {rep.detail})", f"{rep.is_deligne},{rep.method}"
    _require(args, "d", "p")
    rep = counterexample_driver(args.d, args.p, args.n if args.n is not None else 2)
    out = rep.to_dict()
    sols = rep.tau.report.solutions
    lines = [
        f"D(Delta_{rep.d}) = {rep.D}; p = {rep.p} = {rep.p % rep.D} mod D ({'holds' if rep.congruent else 'fails'})",
        f"tau = {[list(v) for v in rep.tau.vertices]}, M = {sols.M}, det M = {rep.det}",
        "solutions: " + ", ".join(f"({r[0]}, {r[1]})" for r in sols.solutions),
        "weights: " + ", ".join(str(w) for w in sols.weights),
    ]
    for o in rep.tau.report.unstable_orbits():
        lines.append("unstable orbit: " + " -> ".join(f"({sols.solutions[i][0]}, {sols.solutions[i][1]})" for i in o.members)
                     + " weights " + ", ".join(str(w) for w in o.weights))
    lines.append(f"unstable k: {rep.unstable_k}; half-shift k: {rep.half_shift_k}")
    lines.append(f"verdict: {rep.verdict}")
    csv = "k,r1,r2,weight,image_weight\n" + "\n".join(
        f"{c['k']},{sols.solutions[c['k']][0]},{sols.solutions[c['k']][1]},{Fraction(*c['weight_lp'])},{Fraction(*c['image_weight'])}"
        for c in out["weight_checks"])
    return out, "\n".join(lines), csv


def cmd_gnp_sample(args):
    _require(args, "p")
    set_threads(args.threads)
    if args.poly is not None or args.polytope_file is not None:
        target, _ = _target_polytope(args)
    else:
        _require(args, "n", "d")
        target = (args.n, args.d)
    res = gnp_sample(target, args.p, args.trials, args.seed, args.budget, _cache(args),
                     q_degree=args.q_degree, witness_degree=max(args.max_k or 1, 1))
    out = res.to_dict()
    text = f"{res.label}\ninfimum = {res.infimum}"
    if res.hodge is not None:
        text += f"\nHP = {res.hodge}\nequals HP: {res.infimum == res.hodge}"
    return out, text, polygon_to_csv(res.infimum)


def cmd_parse_check(args):
    _require(args, "poly", "p")
    f = _poly(args)
    out = {"canonical": format_laurent(f), "key": f.key(), "n_vars": f.n_vars,
           "terms": [[list(e), c] for e, c in sorted(f.terms.items())], "zero": f.is_zero}
    csv = "\n".join(",".join(map(str, list(e) + [c])) for e, c in sorted(f.terms.items()))
    return out, out["canonical"] if not f.is_zero else "0", csv


COMMANDS = {
    "hodge": (cmd_hodge, "Hodge numbers and Hodge polygon of a Newton polytope"),
    "newton": (cmd_newton, "L-polynomial and Newton polygon by brute-force exponential sums"),
    "compare": (cmd_compare, "Newton polygon against Hodge polygon"),
    "diagnose": (cmd_diagnose, "per-facet congruence and p-stability report"),
    "deligne": (cmd_deligne, "instability certificate for the Deligne polytope, or a Deligne check of --poly"),
    "gnp-sample": (cmd_gnp_sample, "pointwise minimum of sampled Newton polygons (upper bound for GNP)"),
    "parse-check": (cmd_parse_check, "parse and print a Laurent polynomial in canonical form"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="prime characteristic")
    common.add_argument("--q-degree", type=int, default=1, help="q = p^a (default a = 1)")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--poly", help='Laurent polynomial, e.g. "x1*x2^3 + x1^3*x2 + x1*x2"')
    src.add_argument("--polytope-file", help="JSON polytope description")
    common.add_argument("--n", type=int, help="Deligne family: number of variables of h")
    common.add_argument("--d", type=int, help="Deligne family: degree of h")
    common.add_argument("--max-k", type=int, help="extension degree limit for witness searches")
    common.add_argument("--budget", type=int, default=DEFAULT_TORUS_BUDGET, help="max torus points per sum")
    common.add_argument("--cache-dir", help="directory for cached exponential sums")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10)
    common.add_argument("--threads", type=int, help="worker threads for the sum kernel")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hodgenewton", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        out, text, csv = COMMANDS[args.command][0](args)
    except HodgeNewtonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except AssertionError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 4
    if args.format == "json":
        print(json.dumps(out, indent=2))
    elif args.format == "csv":
        print(csv)
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
