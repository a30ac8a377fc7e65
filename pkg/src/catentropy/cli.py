"""``cat-entropy`` command line front end."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Callable

from . import entropy_engine as ee
from . import orbifold_line as ol
from .errors import (
    CatEntropyError,
    GeneratorError,
    InputError,
    PreconditionError,
    TheoremViolation,
)
from .euler_lattice import LatticeEndo, is_isometry, numerical_quotient, radical
from .exact_linalg import DEFAULT_TOL, IntMatrix, spectral_radius
from .quiver import (
    DynkinType,
    coxeter_matrix,
    coxeter_number,
    euler_matrix,
    extended_dynkin_quiver,
    parse_dynkin,
)
from .quiver import serre_matrix as quiver_serre_matrix
from .sl2z import SL2Matrix, positive_factorize, word_product

SAFE_INT = 2**53

STANDARD_WEIGHTS = [
    (2, 3, 5), (2, 3, 7), (2, 2, 2, 3), (1, 2, 2), (3, 3, 4),
    (2, 2, 2, 2), (3, 3, 3), (2, 4, 4), (2, 3, 6),
]
TUBULAR_WEIGHTS = [(2, 2, 2, 2), (3, 3, 3), (2, 4, 4), (2, 3, 6)]


# ---------------------------------------------------------------------------
# JSON encoding


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_int(x: int):
    return x if -SAFE_INT < x < SAFE_INT else str(x)


def fmt_matrix(m: IntMatrix) -> list[list]:
    return [[fmt_int(x) for x in row] for row in m.entries]


def parse_rational(s, what="value") -> Fraction:
    if isinstance(s, bool):
        raise InputError(f"{what}: expected a rational, got {s!r}")
    try:
        if isinstance(s, float):
            return Fraction(repr(s))
        return Fraction(s)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: cannot read {s!r} as a rational") from exc


def parse_int(s, what="value") -> int:
    if isinstance(s, bool):
        raise InputError(f"{what}: expected an integer, got {s!r}")
    if isinstance(s, int):
        return s
    if isinstance(s, str):
        try:
            return int(s.strip())
        except ValueError:
            pass
    raise InputError(f"{what}: expected an integer, got {s!r}")


def parse_int_matrix(rows, what="matrix") -> IntMatrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{what}: expected a nonempty list of rows")
    return IntMatrix([[parse_int(x, what) for x in row] for row in rows])


def parse_weight_data(obj: dict) -> ol.WeightData:
    if "weights" not in obj:
        raise InputError("missing 'weights'")
    weights = obj["weights"]
    if not isinstance(weights, list):
        raise InputError("'weights' must be a list of integers")
    points = obj.get("points", obj.get("lambda"))
    return ol.WeightData([parse_int(a, "weight") for a in weights], points)


def parse_context(obj: dict):
    if "dynkin" in obj:
        d = parse_dynkin(str(obj["dynkin"]))
        if "orientation" in obj:
            d = DynkinType(d.family, d.rank, tuple(tuple(a) for a in obj["orientation"]))
        return d
    return parse_weight_data(obj)


def parse_generator(ctx, item):
    """One word letter: "serre", {"shift": k}, {"twist": {"l", "p"}}, {"auto": {"sigma", "g"}},
    {"perm": [...]} (Dynkin only) or {"generic": matrix}."""
    if isinstance(item, str):
        item = {item: {}}
    if not isinstance(item, dict) or len(item) != 1:
        raise InputError(f"cannot read generator {item!r}")
    ((key, val),) = item.items()
    key = key.lower()
    if key == "serre":
        return ol.Serre()
    if key == "shift":
        return ol.Shift(1 if val in ({}, None) else parse_int(val, "shift"))
    if key == "generic":
        return ol.Generic(parse_int_matrix(val, "generic"))
    if isinstance(ctx, DynkinType):
        if key == "perm":
            return ee.DiagramAuto(tuple(parse_int(x, "perm") for x in val))
        raise InputError(f"generator {key!r} is not available on a Dynkin quiver")
    if key == "twist":
        if not isinstance(val, dict):
            raise InputError("twist expects {'l': int, 'p': [..]}")
        p = val.get("p", [0] * ctx.r)
        return ol.Twist(ol.element(ctx, parse_int(val.get("l", 0), "l"), [parse_int(x, "p") for x in p]))
    if key == "auto":
        if not isinstance(val, dict) or "sigma" not in val:
            raise InputError("auto expects {'sigma': [...], 'g': [[a, b], [c, d]]}")
        sigma = tuple(parse_int(x, "sigma") for x in val["sigma"])
        if "g" in val:
            (a, b), (c, d) = val["g"]
            g = ol.Mobius(*(parse_rational(x, "g") for x in (a, b, c, d)))
        else:
            g = ol.mobius_through(ctx.points[:3], [ctx.points[s] for s in sigma[:3]])
        return ol.Auto(sigma, g)
    raise InputError(f"unknown generator {key!r}")


def parse_word(ctx, items) -> ee.AuteqWord:
    if items is None:
        items = []
    if not isinstance(items, list):
        raise InputError("'word' must be a list")
    return ee.AuteqWord(ctx, [parse_generator(ctx, it) for it in items])


# ---------------------------------------------------------------------------
# commands


def extended_dynkin_symbol(weights) -> str | None:
    """Extended Dynkin diagram of a chi > 0 weight datum (weights 1 dropped).

    The symbol's vertex count always equals mu, so (2, 2, n) gives D~{n+2}.
    """
    ws = sorted(a for a in weights if a > 1)
    if len(ws) <= 2:
        p, q = ([1, 1] + ws)[-2:]
        return f"A~{p},{q}"
    if len(ws) == 3:
        if ws[:2] == [2, 2]:
            return f"D~{ws[2] + 2}"
        if ws[:2] == [2, 3] and ws[2] in (3, 4, 5):
            return f"E{ws[2] + 3}~"
    return None


def cmd_invariants(obj: dict, args) -> dict:
    w = parse_weight_data(obj)
    out = {"a": w.a, "mu": w.mu, "chi": fmt_rational(w.chi)}
    if w.chi > 0:
        sym = extended_dynkin_symbol(w.weights)
        if sym:
            out["dynkin"] = sym
    return out


def report_json(rep: ee.EntropyReport) -> dict:
    out = {
        "h": rep.h,
        "h_closed_form": rep.closed_form(),
        "rho": [fmt_rational(rep.rho.lower), fmt_rational(rep.rho.upper)],
        "method": rep.method,
        "matrix": fmt_matrix(rep.matrix),
        "char_poly": [fmt_int(c) for c in rep.char_poly.coeffs],
        "char_poly_text": str(rep.char_poly),
    }
    if rep.phi is not None:
        out["phi"] = rep.phi.rows()
        t, disc = rep.quadratic
        out["certificate"] = {"trace": fmt_int(t), "discriminant": fmt_int(disc)}
    return out


def cmd_entropy(obj: dict, args) -> dict:
    ctx = parse_context(obj)
    word = parse_word(ctx, obj.get("word"))
    return report_json(ee.entropy(word, args.tol))


def cmd_factorize(obj, args) -> dict:
    rows = obj.get("matrix") if isinstance(obj, dict) else obj
    m = parse_int_matrix(rows, "matrix")
    if m.shape != (2, 2):
        raise InputError(f"expected a 2x2 matrix, got {m.shape}")
    try:
        s = SL2Matrix.from_rows(m.tolist())
    except PreconditionError as exc:
        raise PreconditionError(f"not in SL(2,Z): {exc}") from exc
    pw = positive_factorize(s)
    return {
        "m": list(pw.m),
        "P": "identity" if pw.conjugator.is_identity() else pw.conjugator.rows(),
        "sign": pw.sign,
        "verified": pw.verify(s),
    }


# ---------------------------------------------------------------------------
# verify suites; each returns a list of failure strings


def _suite_gram(n_max) -> list[str]:
    bad = []
    for ws in STANDARD_WEIGHTS:
        w = ol.WeightData(ws)
        lat = ol.euler_gram(w)
        if abs(lat.gram.det()) != 1:
            bad.append(f"{ws}: det(gram) = {lat.gram.det()}")
        if radical(lat) or numerical_quotient(lat) != lat:
            bad.append(f"{ws}: nonzero radical")
        # diagonal of an exceptional basis element is 1
        if lat.gram[0, 0] != 1:
            bad.append(f"{ws}: chi(O, O) = {lat.gram[0, 0]}")
    return bad


def _suite_twists(n_max) -> list[str]:
    bad = []
    for ws in STANDARD_WEIGHTS:
        w = ol.WeightData(ws)
        gens = [ol.c_vec(w)] + [ol.x_vec(w, i) for i in range(w.r)]
        ident = IntMatrix.identity(w.mu)
        for x in gens:
            t = ol.twist_matrix(w, x)
            if not is_isometry(t):
                bad.append(f"{ws}: twist by {x} is not an isometry")
            # quasi-unipotent: (M^a - I)^mu = 0
            if not ((t.matrix ** w.a - ident) ** w.mu).entries == IntMatrix.zeros(w.mu).entries:
                bad.append(f"{ws}: twist by {x} is not quasi-unipotent")
            for y in gens:
                lhs = ol.twist_matrix(w, ol.l_add(w, x, y)).matrix
                if lhs != t.matrix @ ol.twist_matrix(w, y).matrix:
                    bad.append(f"{ws}: twist({x} + {y}) != twist({x}) twist({y})")
        if ((ol.twist_matrix(w, ol.c_vec(w)).matrix - ident) ** 2).entries != IntMatrix.zeros(w.mu).entries:
            bad.append(f"{ws}: twist by c is not unipotent")
    return bad


def _quivers():
    out = []
    for fam, ranks in (("A", range(1, 9)), ("D", range(4, 9)), ("E", (6, 7, 8))):
        out += [(f"{fam}{n}", DynkinType(fam, n).quiver, DynkinType(fam, n)) for n in ranks]
    for p in range(1, 8):
        for q in range(p, 9 - p):
            out.append((f"A~{p},{q}", extended_dynkin_quiver("A", p, q), None))
    out += [(f"D~{n}", extended_dynkin_quiver("D", n), None) for n in range(4, 9)]
    out += [(f"E{n}~", extended_dynkin_quiver("E", n), None) for n in (6, 7, 8)]
    return out


def _suite_serre(n_max) -> list[str]:
    bad = []
    for ws in STANDARD_WEIGHTS:
        w = ol.WeightData(ws)
        g = ol.euler_gram(w).gram
        if g @ ol.serre_matrix(w).matrix != g.T:
            bad.append(f"{ws}: gram N(S) != gram^T")
    for name, q, _ in _quivers():
        e = euler_matrix(q)
        if e @ quiver_serre_matrix(q) != e.T:
            bad.append(f"{name}: E N(S) != E^T")
    return bad


def _suite_riemann_roch(n_max) -> list[str]:
    bad = []
    for ws in TUBULAR_WEIGHTS:
        w = ol.WeightData(ws)
        basis = [tuple(int(i == k) for i in range(w.mu)) for k in range(w.mu)]
        for u in basis:
            for v in basis:
                if not ol.riemann_roch_check(w, u, v):
                    bad.append(f"{ws}: Riemann-Roch fails on {u}, {v}")
    return bad


def hyperbolic_lifts(w: ol.WeightData, count: int, seed: int = 0, max_len: int = 6):
    """Random products of the L- and U-lifts (and inverses) whose phi has trace > 2."""
    rng = random.Random(seed)
    lift_l, lift_u = ol.sl2_lifts(w)
    letters = [lift_l.matrix, lift_u.matrix, lift_l.matrix ** -1, lift_u.matrix ** -1]
    out, seen = [], set()
    while len(out) < count:
        m = IntMatrix.identity(w.mu)
        for _ in range(rng.randint(2, max_len)):
            m = m @ rng.choice(letters)
        phi = ol.phi_map(w, LatticeEndo(lift_l.lattice, m))
        if abs(phi.trace) > 2 and m not in seen:
            seen.add(m)
            out.append(m)
    return out


def gy_tail_ok(curve, log_rho: float, tol: float = 1e-6) -> bool:
    """No s_n certifies more than log rho + tol, or the tail converges monotonically."""
    if all(s <= log_rho + tol for s in curve.values):
        return True
    tail = curve.values[(3 * len(curve)) // 4:]
    down = all(b <= a + 1e-15 for a, b in zip(tail, tail[1:]))
    up = all(b >= a - 1e-15 for a, b in zip(tail, tail[1:]))
    return down or up


def _suite_gy(n_max) -> list[str]:
    bad = []
    for ws in TUBULAR_WEIGHTS:
        w = ol.WeightData(ws)
        for m in hyperbolic_lifts(w, 5, seed=sum(ws)):
            rep = ee.gy_consistency(ee.AuteqWord(w, [ol.Generic(m)]), n_max)
            if rep.degenerate or not gy_tail_ok(rep.curve, rep.log_rho):
                bad.append(f"{ws}: growth curve overshoots log rho = {rep.log_rho}")
    return bad


def _suite_dynkin(n_max) -> list[str]:
    bad = []
    for name, q, d in _quivers():
        rho = spectral_radius(coxeter_matrix(q), DEFAULT_TOL)
        if not rho.contains(1) or rho.width > DEFAULT_TOL:
            bad.append(f"{name}: rho(Phi) in [{rho.lower}, {rho.upper}]")
        if d is not None and not (coxeter_matrix(q) ** coxeter_number(d)).is_identity():
            bad.append(f"{name}: Phi^h != I")
    return bad


def random_hyperbolic(rng: random.Random, bound: int = 10**6) -> SL2Matrix:
    while True:
        n = rng.randint(1, 3)
        seq = [rng.randint(1, 6) for _ in range(2 * n)]
        # a random conjugator from a short word
        p = SL2Matrix.identity()
        for _ in range(rng.randint(0, 5)):
            p = p @ rng.choice([SL2Matrix(1, 1, 0, 1), SL2Matrix(1, 0, 1, 1),
                                SL2Matrix(1, -1, 0, 1), SL2Matrix(1, 0, -1, 1), SL2Matrix(0, -1, 1, 0)])
        m = p @ word_product(seq) @ p.inverse()
        if rng.random() < 0.2:
            m = -m
        if max(abs(x) for x in (m.a, m.b, m.c, m.d)) <= bound:
            return m


def _suite_factorize(n_max) -> list[str]:
    bad = []
    rng = random.Random(20)
    for _ in range(50):
        m = random_hyperbolic(rng)
        pw = positive_factorize(m)
        if not pw.verify(m):
            bad.append(f"{m.rows()}: factorization does not verify")
    return bad


SUITES: dict[str, Callable[[int], list[str]]] = {
    "gram": _suite_gram,
    "twists": _suite_twists,
    "serre": _suite_serre,
    "riemann-roch": _suite_riemann_roch,
    "gy": _suite_gy,
    "dynkin": _suite_dynkin,
    "factorize": _suite_factorize,
}


def run_verify(suite: str, n_max: int = 200) -> dict:
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise InputError(f"unknown suite {suite!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    results = {name: SUITES[name](n_max) for name in names}
    return {
        "suite": suite,
        "passed": not any(results.values()),
        "failures": {k: v for k, v in results.items() if v},
        "ran": names,
    }


# ---------------------------------------------------------------------------


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, TheoremViolation):
        return 5
    if isinstance(exc, PreconditionError):
        return 4
    if isinstance(exc, GeneratorError):
        return 3
    if isinstance(exc, (InputError, json.JSONDecodeError)):
        return 2
    if isinstance(exc, CatEntropyError):
        return exc.exit_code
    return 1


def _tolerance(s: str) -> Fraction:
    try:
        tol = parse_rational(s, "--tol")
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if tol <= 0:
        raise argparse.ArgumentTypeError("--tol must be positive")
    return tol


def _positive(s: str) -> int:
    try:
        n = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("--n-max must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="FILE", help="JSON input file (default: stdin)")
    common.add_argument("--json", metavar="TEXT", help="inline JSON input")
    common.add_argument("--tol", type=_tolerance, default=DEFAULT_TOL, help="enclosure width, e.g. 1/1000000000")
    common.add_argument("--n-max", type=_positive, default=200, help="growth-curve length")
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="cat-entropy",
        description="Entropy of auto-equivalences through their action on Euler lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("invariants", parents=[common], help="a, mu, chi and the Dynkin type of a weight datum")
    sub.add_parser("entropy", parents=[common], help="entropy report of a word")
    sub.add_parser("factorize", parents=[common], help="positive L/U word of a hyperbolic SL(2,Z) matrix")
    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("suite", help=", ".join(list(SUITES) + ["all"]))
    return parser


def _read_input(args) -> Any:
    if args.json is not None:
        text = args.json
    elif args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from exc
    else:
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc


COMMANDS = {"invariants": cmd_invariants, "entropy": cmd_entropy, "factorize": cmd_factorize}


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "verify":
            result = run_verify(args.suite, args.n_max)
            _emit(result, args)
            return 0 if result["passed"] else 5
        obj = _read_input(args)
        if args.command != "factorize" and not isinstance(obj, dict):
            raise InputError("expected a JSON object")
        _emit(COMMANDS[args.command](obj, args), args)
        return 0
    except (CatEntropyError, ValueError, ArithmeticError) as exc:
        code = exit_code_for(exc)
        if code == 1 and isinstance(exc, ValueError):
            code = 2
        print(f"cat-entropy: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
