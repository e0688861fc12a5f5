"""Command line entry point ``rt-invariants``.

Exit codes: 0 ok, 2 input error, 3 precondition or unsupported case,
4 cost guard refusal, 5 self-test or check residual above tolerance.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import asymptotics, gauss, invariants, lie
from .errors import CostGuardExceeded, InvalidInput, PreconditionError
from .modular import SL2Matrix, dedekind_symbol
from .sl2rep import make_context, rep_entry

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_COST = 4
EXIT_RESIDUAL = 5

THREADS_ENV = "RT_INVARIANTS_THREADS"
DEFAULT_TOLERANCE = 1e-9

_LENS_FIELDS = {"kind", "p", "q"}
_SEIFERT_FIELDS = {"kind", "epsilon", "genus", "b", "fibers", "normalized", "indicator_table"}


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str
    space: object  # LensSpace or SeifertPresentation
    indicator_table: dict = None


@dataclass(frozen=True)
class RunConfig:
    family: str
    rank: int
    kappa: int
    method: str = "default"
    tolerance: float = DEFAULT_TOLERANCE
    deterministic: bool = False
    threads: int = 1
    output: str = "json"


def _int_field(doc, name):
    v = doc[name]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidInput(f"field {name!r} must be an integer")
    return v


def _parse_indicator(table):
    if not isinstance(table, dict):
        raise InvalidInput("field 'indicator_table' must be an object mapping 'c1,c2,...' to +1 or -1")
    out = {}
    for key, val in table.items():
        try:
            coords = tuple(int(x) for x in key.split(","))
        except ValueError:
            raise InvalidInput(f"indicator_table key {key!r} is not a comma separated weight") from None
        if val not in (1, -1):
            raise InvalidInput(f"indicator_table value for {key!r} must be +1 or -1")
        out[coords] = val
    return out


def parse_manifold(text):
    """Validate a JSON manifold description; unknown fields are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidInput("manifold description must be a JSON object")
    kind = doc.get("kind")
    if kind == "lens":
        allowed = _LENS_FIELDS
    elif kind == "seifert":
        allowed = _SEIFERT_FIELDS
    else:
        raise InvalidInput(f"field 'kind' must be 'lens' or 'seifert', got {kind!r}")
    extra = sorted(set(doc) - allowed)
    if extra:
        raise InvalidInput(f"unknown field {extra[0]!r} for kind {kind!r}")
    required = {"p", "q"} if kind == "lens" else {"epsilon", "genus", "fibers"}
    missing = sorted(required - set(doc))
    if missing:
        raise InvalidInput(f"missing field {missing[0]!r}")
    if kind == "lens":
        return ManifoldSpec("lens", invariants.LensSpace(_int_field(doc, "p"), _int_field(doc, "q")))
    normalized = doc.get("normalized", True)
    if not isinstance(normalized, bool):
        raise InvalidInput("field 'normalized' must be a boolean")
    if normalized and "b" not in doc:
        raise InvalidInput("missing field 'b'")
    b = _int_field(doc, "b") if normalized else doc.get("b")
    if not isinstance(doc["fibers"], list) or not all(
        isinstance(f, list) and len(f) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in f)
        for f in doc["fibers"]
    ):
        raise InvalidInput("field 'fibers' must be a list of [alpha, beta] integer pairs")
    if not isinstance(doc["epsilon"], str):
        raise InvalidInput("field 'epsilon' must be 'o' or 'n'")
    M = invariants.SeifertPresentation(doc["epsilon"], _int_field(doc, "genus"), b, doc["fibers"], normalized)
    table = _parse_indicator(doc["indicator_table"]) if "indicator_table" in doc else None
    return ManifoldSpec("seifert", M, table)


def _num(x):
    """15 significant digits."""
    return float(format(float(x), ".15g"))


def _complex(z):
    z = complex(z)
    return {"re": _num(z.real), "im": _num(z.imag)}


def _rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_output(result, config):
    """JSON document for an InvariantResult (or a list of them as CSV rows)."""
    if config.output == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kappa", "re", "im", "method"])
        for r in result if isinstance(result, list) else [result]:
            z = complex(r.value)
            w.writerow([r.kappa, repr(_num(z.real)), repr(_num(z.imag)), r.method])
        return buf.getvalue()
    doc = {
        "value": _complex(result.value),
        "kappa": result.kappa,
        "r": result.r,
        "method": result.method,
        "terms": int(result.term_count),
        "runtime_ms": 0.0 if config.deterministic else _num(result.runtime * 1000),
    }
    if result.algebra:
        doc["algebra"] = result.algebra
    if result.details:
        doc["details"] = _jsonable(result.details)
    return json.dumps(doc, sort_keys=False)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return _rational(x)
    if isinstance(x, complex):
        return _complex(x)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    try:
        return _num(x)
    except (TypeError, ValueError):
        return str(x)


def _threads(args):
    if getattr(args, "deterministic", False):
        return 1
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidInput(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return 1


def _config(args, method="default"):
    return RunConfig(
        family=getattr(args, "family", ""),
        rank=getattr(args, "rank", 0),
        kappa=getattr(args, "kappa", 0),
        method=getattr(args, "method", method) or method,
        tolerance=args.tolerance,
        deterministic=args.deterministic,
        threads=_threads(args),
        output=args.output,
    )


def _algebra(args):
    return lie.build_algebra(args.family.upper(), args.rank)


def _context_for(args):
    alg = _algebra(args)
    if args.kappa < alg.dual_coxeter:
        raise PreconditionError(f"kappa = {args.kappa} is below h^vee = {alg.dual_coxeter} for {alg.name}")
    return make_context(alg, args.kappa)


def _emit(text, out):
    out.write(text if text.endswith("\n") else text + "\n")


def _cmd_algebra_info(args, out):
    alg = _algebra(args)
    doc = {
        "algebra": alg.name,
        "rank": alg.rank,
        "cartan": [list(r) for r in alg.cartan],
        "dual_coxeter": alg.dual_coxeter,
        "lacing": alg.lacing,
        "dim": alg.dim_g,
        "positive_roots": alg.n_positive,
        "weyl_order": alg.weyl_order,
        "rho": list(alg.rho.coords),
        "rho_norm": _rational(alg.rho_norm),
        "integer_D": alg.integer_D,
        "vol_coroot": _num(alg.vol_coroot),
    }
    if args.kappa is not None:
        ctx = _context_for(args)
        consts = invariants.tqft_constants(ctx)
        doc.update(
            kappa=ctx.kappa,
            r=ctx.r,
            alcove_size=len(ctx.index_set),
            rank_D=_num(consts.rank_D),
            omega=_complex(consts.omega),
        )
    _emit(json.dumps(doc), out)
    return EXIT_OK


def _cmd_rep_entry(args, out):
    ctx = _context_for(args)
    U = SL2Matrix(*args.matrix)
    lam, mu = lie.weight(*args.lam), lie.weight(*args.mu)
    for v in (lam, mu):
        if len(v.coords) != ctx.alg.rank:
            raise InvalidInput(f"weight {v.coords} needs {ctx.alg.rank} coordinates")
    t0 = time.perf_counter()
    value = rep_entry(ctx, U, lam, mu, args.method)
    res = invariants.InvariantResult(
        value, f"rep-{args.method}", ctx.kappa, ctx.r, 1, time.perf_counter() - t0, ctx.alg.name
    )
    _emit(format_output(res, _config(args)), out)
    return EXIT_OK


_LENS_METHODS = ("sine", "rep", "seifert", "coprime")


def _lens_value(ctx, method, p, q):
    if method == "sine":
        return invariants.tau_lens(ctx, p, q)
    if method == "rep":
        return invariants.tau_lens_rep(ctx, p, q)
    if method == "seifert":
        return invariants.tau_seifert_general(ctx, invariants.lens_as_seifert(p, q))
    if method == "coprime":
        return invariants.tau_lens_coprime(ctx, p, q)
    raise InvalidInput(f"unknown lens method {method!r}")


def _lens_result(ctx, space, method):
    p, q = space.p, space.q
    if method != "all":
        return _lens_value(ctx, method, p, q)
    t0 = time.perf_counter()
    results = {}
    for m in _LENS_METHODS:
        if m == "coprime" and (p == 0 or gcd(ctx.r, p) != 1):
            continue
        results[m] = _lens_value(ctx, m, p, q)
    vals = [r.value for r in results.values()]
    gap = max((abs(a - b) for a in vals for b in vals), default=0.0)
    main = results["sine"]
    out = invariants.InvariantResult(
        main.value, "all", ctx.kappa, ctx.r, sum(r.term_count for r in results.values()),
        time.perf_counter() - t0, ctx.alg.name,
    )
    out.details["methods"] = {m: r.value for m, r in results.items()}
    out.details["max_pairwise_residual"] = gap
    return out


def _read_manifold(args):
    with open(args.file, encoding="utf-8") as fh:
        return parse_manifold(fh.read())


def _cmd_lens(args, out):
    if args.file:
        spec = _read_manifold(args)
        if spec.kind != "lens":
            raise InvalidInput("the lens command needs a manifold of kind 'lens'")
        space = spec.space
    else:
        if args.p is None or args.q is None:
            raise InvalidInput("lens needs -p and -q (or --file)")
        space = invariants.LensSpace(args.p, args.q)
    ctx = _context_for(args)
    res = _lens_result(ctx, space, args.method)
    _emit(format_output(res, _config(args)), out)
    if args.method == "all" and res.details["max_pairwise_residual"] > args.tolerance:
        return EXIT_RESIDUAL
    return EXIT_OK


_SEIFERT_METHODS = ("general", "compact", "coprime")


def _seifert_value(ctx, method, M, table, max_terms):
    if method == "general":
        return invariants.tau_seifert_general(ctx, M, table, max_terms=max_terms)
    if method == "compact":
        return invariants.tau_seifert_compact(ctx, M, table)
    if method == "coprime":
        return invariants.tau_seifert_coprime(ctx, M, table)
    raise InvalidInput(f"unknown Seifert method {method!r}")


def _parse_fiber(text):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise InvalidInput(f"fiber {text!r} must look like alpha,beta") from None
    return a, b


def _cmd_seifert(args, out):
    if args.file:
        spec = _read_manifold(args)
        if spec.kind != "seifert":
            raise InvalidInput("the seifert command needs a manifold of kind 'seifert'")
        M, table = spec.space, spec.indicator_table
    else:
        if args.genus is None:
            raise InvalidInput("seifert needs --genus (or --file)")
        fibers = [_parse_fiber(f) for f in args.fiber or []]
        normalized = not args.unnormalized
        if normalized and args.b is None:
            raise InvalidInput("a normalized presentation needs -b")
        M = invariants.SeifertPresentation(args.epsilon, args.genus, args.b if normalized else None, fibers, normalized)
        table = None
    ctx = _context_for(args)
    if args.method != "all":
        res = _seifert_value(ctx, args.method, M, table, args.max_terms)
        _emit(format_output(res, _config(args)), out)
        return EXIT_OK
    t0 = time.perf_counter()
    results = {}
    for m in _SEIFERT_METHODS:
        try:
            results[m] = _seifert_value(ctx, m, M, table, args.max_terms)
        except PreconditionError:
            if m != "coprime":
                raise
    vals = [r.value for r in results.values()]
    gap = max(abs(a - b) for a in vals for b in vals)
    res = invariants.InvariantResult(
        results["general"].value, "all", ctx.kappa, ctx.r, sum(r.term_count for r in results.values()),
        time.perf_counter() - t0, ctx.alg.name,
    )
    res.details["methods"] = {m: r.value for m, r in results.items()}
    res.details["max_pairwise_residual"] = gap
    _emit(format_output(res, _config(args)), out)
    return EXIT_RESIDUAL if gap > args.tolerance else EXIT_OK


def _cmd_gauss(args, out):
    alg = _algebra(args)
    if args.psi is not None:
        if len(args.psi) != alg.rank:
            raise InvalidInput(f"psi needs {alg.rank} coordinates")
        psis = [tuple(Fraction(x) for x in args.psi)]
    elif args.unchecked:
        psis = [tuple(Fraction(0) for _ in range(alg.rank))]
    else:
        psis = gauss.admissible_psi(alg, args.r, args.f)
        if not psis:
            failed = gauss.assumption_failures(alg, args.r, args.f, tuple(Fraction(0) for _ in range(alg.rank)))
            raise PreconditionError("no admissible psi: " + "; ".join(failed))
    worst = 0.0
    t0 = time.perf_counter()
    for psi in psis:
        inst = gauss.GaussInstance(alg, args.r, args.f, psi, checked=not args.unchecked)
        worst = max(worst, gauss.reciprocity_residual(inst))
    doc = {
        "algebra": alg.name,
        "r": args.r,
        "f": args.f,
        "instances": len(psis),
        "residual": _num(worst),
        "tolerance": args.tolerance,
        "checked": not args.unchecked,
        "runtime_ms": 0.0 if args.deterministic else _num((time.perf_counter() - t0) * 1000),
    }
    _emit(json.dumps(doc), out)
    return EXIT_OK if worst <= args.tolerance else EXIT_RESIDUAL


def _asymp_row(alg, kappa, p, q):
    ctx = make_context(alg, kappa)
    t0 = time.perf_counter()
    tau = invariants.tau_lens(ctx, p, q)
    lead = asymptotics.leading_term(alg, kappa, p, q)
    elapsed = time.perf_counter() - t0
    ratio = tau.value / lead if lead != 0 else complex("nan")
    return kappa, tau, lead, ratio, elapsed


def _cmd_asymp(args, out):
    alg = _algebra(args)
    invariants.LensSpace(args.p, args.q)
    if args.p == 0:
        raise InvalidInput("p must be nonzero")
    for k in args.kappas:
        if k < alg.dual_coxeter:
            raise PreconditionError(f"kappa = {k} is below h^vee = {alg.dual_coxeter}")
    threads = _threads(args)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda k: _asymp_row(alg, k, args.p, args.q), args.kappas))
    if args.output == "csv":
        results = []
        for k, tau, lead, ratio, elapsed in rows:
            r = alg.lacing * k
            results.append(invariants.InvariantResult(tau.value, "tau", k, r, tau.term_count, elapsed))
            results.append(invariants.InvariantResult(lead, "leading", k, r, 0, elapsed))
            results.append(invariants.InvariantResult(ratio, "ratio", k, r, 0, elapsed))
        _emit(format_output(results, _config(args)), out)
        return EXIT_OK
    strat = asymptotics.partition_levels(alg, args.p)
    cs = asymptotics.cs_values(alg, args.p, args.q)
    doc = {
        "algebra": alg.name,
        "p": args.p,
        "q": args.q,
        "strata_sizes": [len(m) for m in strat.levels],
        "cs_values": [_rational(x) for x in cs.values],
        "cs_sign_ambiguous": cs.sign_ambiguous,
        "dedekind_symbol": _rational(dedekind_symbol(args.q, args.p)),
        "sweep": [
            {
                "kappa": k,
                "tau": _complex(tau.value),
                "leading": _complex(lead),
                "ratio": _complex(ratio),
                "resum_residual": _num(asymptotics.resum_check(make_context(alg, k), args.p, args.q)),
            }
            for k, tau, lead, ratio, _ in rows
        ],
    }
    _emit(json.dumps(doc), out)
    return EXIT_OK


def _cmd_selftest(args, out):
    from . import selftest

    t0 = time.perf_counter()
    report = selftest.run_grid(quick=args.quick, threads=_threads(args))
    worst = float(max(report.values())) if report else 0.0
    doc = {
        "max_residuals": {k: _num(v) for k, v in report.items()},
        "tolerance": args.tolerance,
        "passed": bool(worst <= args.tolerance),
        "runtime_ms": 0.0 if args.deterministic else _num((time.perf_counter() - t0) * 1000),
    }
    _emit(json.dumps(doc), out)
    return EXIT_OK if worst <= args.tolerance else EXIT_RESIDUAL


def _add_common(p):
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--deterministic", action="store_true", help="single thread, runtime reported as 0")
    p.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")


def _add_algebra(p, kappa_required=True):
    p.add_argument("--family", required=True, choices=list("ABCDEFGabcdefg"))
    p.add_argument("--rank", type=int, required=True)
    if kappa_required:
        p.add_argument("--kappa", type=int, required=True)


def build_parser():
    parser = argparse.ArgumentParser(prog="rt-invariants", description="Quantum invariants of lens and Seifert spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    alg_p = sub.add_parser("algebra", help="root system data")
    alg_sub = alg_p.add_subparsers(dest="action", required=True)
    info = alg_sub.add_parser("info")
    _add_algebra(info, kappa_required=False)
    info.add_argument("--kappa", type=int, default=None)
    _add_common(info)
    info.set_defaults(handler=_cmd_algebra_info)

    rep_p = sub.add_parser("rep", help="entries of the level-kappa SL(2,Z) representation")
    rep_sub = rep_p.add_subparsers(dest="action", required=True)
    entry = rep_sub.add_parser("entry")
    _add_algebra(entry)
    entry.add_argument("--matrix", type=int, nargs=4, required=True, metavar=("A", "B", "C", "D"))
    entry.add_argument("--lam", type=int, nargs="+", required=True)
    entry.add_argument("--mu", type=int, nargs="+", required=True)
    entry.add_argument("--method", choices=("dc", "ac", "ba", "bd"), default="dc")
    _add_common(entry)
    entry.set_defaults(handler=_cmd_rep_entry)

    lens = sub.add_parser("lens", help="invariant of a lens space L(p, q)")
    _add_algebra(lens)
    lens.add_argument("-p", type=int)
    lens.add_argument("-q", type=int)
    lens.add_argument("--file", help="JSON manifold description")
    lens.add_argument("--method", choices=_LENS_METHODS + ("all",), default="sine")
    _add_common(lens)
    lens.set_defaults(handler=_cmd_lens)

    seif = sub.add_parser("seifert", help="invariant of a Seifert fibered space")
    _add_algebra(seif)
    seif.add_argument("--file", help="JSON manifold description")
    seif.add_argument("--epsilon", choices=("o", "n"), default="o")
    seif.add_argument("--genus", type=int)
    seif.add_argument("-b", type=int)
    seif.add_argument("--fiber", action="append", help="alpha,beta (repeatable)")
    seif.add_argument("--unnormalized", action="store_true", help="fibers given as {epsilon; g; (alpha, beta)...}")
    seif.add_argument("--method", choices=_SEIFERT_METHODS + ("all",), default="general")
    seif.add_argument("--max-terms", type=float, default=invariants.DEFAULT_TERM_LIMIT)
    _add_common(seif)
    seif.set_defaults(handler=_cmd_seifert)

    gc = sub.add_parser("gauss-check", help="both sides of Gauss reciprocity with f = n * identity")
    _add_algebra(gc, kappa_required=False)
    gc.add_argument("--r", type=int, required=True)
    gc.add_argument("--f", type=int, required=True)
    gc.add_argument("--psi", type=Fraction, nargs="+", help="weight coordinates of psi (rationals)")
    gc.add_argument("--unchecked", action="store_true", help="skip the integrality assumptions")
    _add_common(gc)
    gc.set_defaults(handler=_cmd_gauss)

    asy = sub.add_parser("asymp", help="large-kappa sweep for a lens space")
    _add_algebra(asy, kappa_required=False)
    asy.add_argument("-p", type=int, required=True)
    asy.add_argument("-q", type=int, required=True)
    asy.add_argument("--kappas", type=int, nargs="+", default=[50, 100, 200, 400])
    _add_common(asy)
    asy.set_defaults(handler=_cmd_asymp)

    st = sub.add_parser("selftest", help="cross-method agreement grid")
    st.add_argument("--quick", action="store_true")
    _add_common(st)
    st.set_defaults(handler=_cmd_selftest)
    return parser


def run_command(argv, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.handler(args, out)
    except CostGuardExceeded as exc:
        err.write(json.dumps({"error": "cost_guard", "message": str(exc), "estimate": _num(exc.estimate)}) + "\n")
        return EXIT_COST
    except PreconditionError as exc:
        err.write(json.dumps({"error": "precondition", "message": str(exc)}) + "\n")
        return EXIT_PRECONDITION
    except (InvalidInput, OSError) as exc:
        err.write(json.dumps({"error": "input", "message": str(exc)}) + "\n")
        return EXIT_INPUT


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))
