"""Command-line entry point: ``rainbowmatch <command> ...``.

Exit status is 0 on success, 1 on a domain error (reported by its error code)
and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import theory
from .coloring import color_stats, format_coloring, mono_pair_count, mu, read_coloring
from .errors import RainbowError
from .exact import (
    SearchBudget,
    count_rainbow_matchings,
    max_partial_rainbow_detailed,
    search_rainbow_matching,
)
from .generators import GENERATORS, gen_adversarial_blocks, generate
from .montecarlo import (
    MODELS,
    estimate_existence,
    estimate_rainbow_given_coloring,
    estimate_rainbow_given_model,
)
from .rng import Seed

SWEEP_COLUMNS = ("n", "s", "k", "mu", "p_hat", "std_err", "lower_bound", "upper_bound",
                 "closed_form", "in_sandwich")
SANDWICH_SIGMAS = 4.0


class UsageError(Exception):
    pass


def _seed_arg(text: str) -> Seed:
    try:
        return Seed.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _budget(args) -> SearchBudget:
    return SearchBudget(args.budget)


def _resolve_seed(args) -> Seed:
    if getattr(args, "seed", None) is None:
        args.seed = Seed.from_entropy()
    return args.seed


def _spec(args, **extra) -> dict:
    """Echo of the resolved invocation; every JSON result carries one."""
    skip = {"func"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        out[key] = str(value) if isinstance(value, (Seed, Path)) else value
    out.update(extra)
    return out


def _emit(args, payload, text: str | None = None) -> None:
    body = text if text is not None else json.dumps(payload, indent=2) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(body, encoding="ascii", newline="")
    else:
        sys.stdout.write(body)


def _model_params(args) -> dict:
    params = {}
    if args.model in ("urm", "rrm") and args.s is None:
        raise UsageError(f"--model {args.model} requires --s")
    if args.model == "blocks":
        if args.k is None:
            raise UsageError("--model blocks requires --k")
        params["k"] = args.k
    if args.model == "capped":
        if args.cap is None:
            raise UsageError("--model capped requires --cap")
        params["cap"] = args.cap
    return params


# --- commands --------------------------------------------------------------------

def cmd_gen(args) -> None:
    seed = _resolve_seed(args)
    params = _model_params(args)
    coloring = generate(args.model, args.n, s=args.s, seed=seed, **params)
    print(f"seed {seed}", file=sys.stderr)
    _emit(args, None, format_coloring(coloring))


def cmd_stats(args) -> None:
    c = read_coloring(args.file)
    stats = color_stats(c)
    payload = {"n": c.n, "s": c.s, "max_multiplicity": stats.max_multiplicity,
               "colors_used": stats.colors_used, "mono_pairs": mono_pair_count(c)}
    if c.n >= 2:
        m = mu(c)
        payload.update(mu=float(m), mu_exact=f"{m.numerator}/{m.denominator}")
    else:
        payload.update(mu=None, mu_exact=None)
    payload["spec"] = _spec(args, command="stats")
    _emit(args, payload)


def cmd_count(args) -> None:
    c = read_coloring(args.file)
    res = count_rainbow_matchings(c, _budget(args))
    prob = res.count / math.factorial(c.n)
    exact = Fraction(res.count, math.factorial(c.n))
    _emit(args, {"count": res.count, "probability": prob,
                 "probability_exact": f"{exact.numerator}/{exact.denominator}",
                 "nodes": res.nodes_visited, "spec": _spec(args, command="count")})


def cmd_find(args) -> None:
    c = read_coloring(args.file)
    res = search_rainbow_matching(c, _budget(args))
    payload = {"found": res.found}
    if res.found:
        payload["matching"] = list(res.matching.sigma)
    payload["nodes"] = res.nodes_visited
    payload["spec"] = _spec(args, command="find")
    _emit(args, payload)


def cmd_partial(args) -> None:
    c = read_coloring(args.file)
    size, nodes = max_partial_rainbow_detailed(c, _budget(args))
    _emit(args, {"max_partial": size, "n": c.n, "nodes": nodes, "spec": _spec(args, command="partial")})


def cmd_estimate(args) -> None:
    seed = _resolve_seed(args)
    if args.file is not None:
        c = read_coloring(args.file)
        est = estimate_rainbow_given_coloring(c, args.trials, seed, args.workers)
        context = dict(model="fixed", n=c.n, s=c.s)
    else:
        if args.model not in MODELS:
            raise UsageError(f"estimate --model must be one of {sorted(MODELS)}")
        if args.n is None or args.s is None:
            raise UsageError("estimate --model requires --n and --s")
        est = estimate_rainbow_given_model(args.model, args.n, args.s, args.trials, seed, args.workers)
        context = dict(model=args.model, n=args.n, s=args.s)
    payload = est.to_dict(**context, seed=str(seed))
    payload["spec"] = _spec(args, command="estimate")
    _emit(args, payload)


def cmd_exist(args) -> None:
    seed = _resolve_seed(args)
    params = _model_params(args)
    est = estimate_existence(args.model, args.n, args.s, args.colorings, seed, _budget(args),
                             args.workers, **params)
    s = args.s
    if s is None:
        s = {"cyclic": args.n, "distinct": args.n * args.n,
             "blocks": (args.k or 0) * args.n}.get(args.model)
    payload = est.to_dict(model=args.model, n=args.n, s=s, seed=str(seed))
    payload["spec"] = _spec(args, command="exist")
    _emit(args, payload)


def cmd_bounds(args) -> None:
    report = theory.sandwich_bounds(args.k, args.mu)
    payload = report.to_dict()
    if args.n is not None:
        if args.n >= 2:
            payload["llll"] = theory.llll_feasibility(args.n, args.k).to_dict()
        if args.s is not None:
            payload["model_mu"] = theory.model_mu(args.n, args.s)
            payload["urm_closed_form"] = theory.urm_closed_form(args.n, args.s)
            if (args.n * args.n) % args.s == 0:
                payload["rrm_closed_form"] = theory.rrm_closed_form(args.n, args.s)
    elif args.s is not None:
        raise UsageError("--s needs --n")
    payload["spec"] = _spec(args, command="bounds")
    _emit(args, payload)


def _load_sweep_spec(path: Path) -> dict:
    try:
        spec = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(spec, dict):
        raise UsageError(f"{path}: sweep spec must be a JSON object")
    return spec


def sweep_points(spec: dict) -> list[dict]:
    """Grid points from ``points`` (explicit list) or the product of ``n`` with ``s``/``k`` lists."""
    model = spec.get("model")
    if model not in ("urm", "rrm", "blocks"):
        raise UsageError("sweep spec 'model' must be 'urm', 'rrm' or 'blocks'")
    other = "k" if model == "blocks" else "s"
    if "points" in spec:
        points = [dict(p) for p in spec["points"]]
    else:
        ns, others = spec.get("n"), spec.get(other)
        if not isinstance(ns, list) or not isinstance(others, list):
            raise UsageError(f"sweep spec needs 'points' or list-valued 'n' and '{other}'")
        points = [{"n": n, other: v} for n in ns for v in others]
    for p in points:
        if not isinstance(p.get("n"), int) or not isinstance(p.get(other), int):
            raise UsageError(f"sweep point {p} needs integer 'n' and '{other}'")
    return points


def run_sweep(spec: dict, workers: int = 1) -> list[dict]:
    model = spec["model"]
    trials = spec.get("trials")
    if not isinstance(trials, int) or trials < 1:
        raise UsageError("sweep spec 'trials' must be a positive integer")
    try:
        seed = Seed.parse(str(spec["seed"]))
    except ValueError as exc:
        raise UsageError(f"sweep spec 'seed': {exc}") from None
    rows = []
    for idx, point in enumerate(sweep_points(spec)):
        point_seed = seed.child(idx)
        n = point["n"]
        if model == "blocks":
            k = point["k"]
            coloring = gen_adversarial_blocks(n, k, point_seed)
            s = coloring.s
            m = float(mu(coloring))
            est = estimate_rainbow_given_coloring(coloring, trials, point_seed.child(0), workers)
            kk = float(k)
            closed = None
        else:
            s = point["s"]
            est = estimate_rainbow_given_model(model, n, s, trials, point_seed, workers)
            kk = s / n
            m = theory.model_mu(n, s)
            closed = (theory.urm_closed_form if model == "urm" else theory.rrm_closed_form)(n, s)
        b = theory.sandwich_bounds(kk, m)
        slack = SANDWICH_SIGMAS * est.std_err
        rows.append({
            "n": n, "s": s, "k": kk, "mu": m, "p_hat": est.p_hat, "std_err": est.std_err,
            "lower_bound": b.lower_bound, "upper_bound": b.upper_bound, "closed_form": closed,
            "in_sandwich": b.lower_bound - slack <= est.p_hat <= b.upper_bound + slack,
        })
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([
            "" if r[c] is None else ("true" if r[c] else "false") if isinstance(r[c], bool) else repr(r[c])
            for c in SWEEP_COLUMNS
        ])
    return buf.getvalue()


def cmd_sweep(args) -> None:
    spec = _load_sweep_spec(args.spec)
    if "seed" not in spec:
        spec["seed"] = str(Seed.from_entropy())
        print(f"seed {spec['seed']}", file=sys.stderr)
    rows = run_sweep(spec, args.workers)
    if args.format == "json":
        _emit(args, {"rows": rows, "spec": dict(spec, command="sweep", workers=args.workers)})
    else:
        _emit(args, None, sweep_csv(rows))


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rainbowmatch",
                                description="Rainbow perfect matchings in edge-colored K_{n,n}.")
    sub = p.add_subparsers(dest="command", required=True)

    def model_flags(sp, choices):
        sp.add_argument("--model", required=True, choices=choices)
        sp.add_argument("--n", required=True, type=_positive_int)
        sp.add_argument("--s", type=_positive_int)
        sp.add_argument("--k", type=_positive_int)
        sp.add_argument("--cap", type=_positive_int)

    def common(sp, budget=False, workers=False, seed=False):
        sp.add_argument("--out", type=Path, help="write output here instead of stdout")
        if budget:
            sp.add_argument("--budget", type=_positive_int, help="maximum search nodes")
        if workers:
            sp.add_argument("--workers", type=_positive_int, default=1)
        if seed:
            sp.add_argument("--seed", type=_seed_arg, help="MASTER[:STREAM]; random if omitted")

    sp = sub.add_parser("gen", help="generate a coloring file")
    model_flags(sp, GENERATORS)
    common(sp, seed=True)
    sp.set_defaults(func=cmd_gen)

    for name, func, help_ in (("stats", cmd_stats, "color statistics and mu"),
                              ("count", cmd_count, "count rainbow perfect matchings"),
                              ("find", cmd_find, "find one rainbow perfect matching"),
                              ("partial", cmd_partial, "largest rainbow partial matching")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", type=Path)
        common(sp, budget=name != "stats")
        sp.set_defaults(func=func)

    sp = sub.add_parser("estimate", help="Monte Carlo Pr(random matching is rainbow)")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", type=Path)
    src.add_argument("--model", choices=sorted(MODELS))
    sp.add_argument("--n", type=_positive_int)
    sp.add_argument("--s", type=_positive_int)
    sp.add_argument("--trials", type=_positive_int, required=True)
    common(sp, workers=True, seed=True)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("exist", help="Monte Carlo Pr(a rainbow perfect matching exists)")
    model_flags(sp, GENERATORS)
    sp.add_argument("--colorings", type=_positive_int, required=True)
    common(sp, budget=True, workers=True, seed=True)
    sp.set_defaults(func=cmd_exist)

    sp = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--n", type=_positive_int)
    sp.add_argument("--s", type=_positive_int)
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("sweep", help="grid of Monte Carlo estimates against the bounds (CSV)")
    sp.add_argument("--spec", type=Path, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    common(sp, workers=True)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except RainbowError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io-error: {exc}", file=sys.stderr)
        return 1
    return 0


run = main

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
