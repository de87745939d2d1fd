"""Command-line front end: graph generation, rate experiments, basis finding.

Every subcommand that produces a report prints JSON (rates as num/den
strings) to stdout or --out, and can mirror the rates to a CSV for plotting.
Enumeration is the default; --sample N switches to seeded Monte Carlo.
"""

import argparse
import csv
import json
import sys
from fractions import Fraction

from .basisfind import ClaimViolation, Constants, PreconditionError, find_basis
from .experiments import (
    connectivity_experiment,
    cyclefree_experiment,
    gen_graph,
    graph_summary,
    instance_label,
    load_graph,
    reweight_then_connectivity,
    sparsify_experiment,
    unique_cut_survival_experiment,
    unique_cycle_survival_experiment,
)
from .matroid import OracleSession
from .samplespace import (
    SupportTooLargeError,
    almost_builder,
    build_almost_kwise,
    build_kwise,
    dump_support,
    exact_builder,
    verify_independence,
    with_marginal,
)


def _parse_params(text):
    """Comma-separated k=v pairs; ':' makes an int list, e.g. lengths=3:4:5."""
    out = {}
    if not text:
        return out
    for part in text.split(","):
        if "=" not in part:
            raise ValueError(f"expected key=value, got {part!r}")
        key, _, raw = part.partition("=")
        key = key.strip()
        raw = raw.strip()
        if ":" in raw:
            out[key] = [int(x) for x in raw.split(":")]
            continue
        try:
            out[key] = int(raw)
        except ValueError:
            try:
                out[key] = float(raw)
            except ValueError:
                out[key] = raw
    return out


def _graph_from_args(args):
    if getattr(args, "graph", None):
        return load_graph(args.graph), f"file:{args.graph}"
    if getattr(args, "family", None):
        params = _parse_params(args.params)
        seed = getattr(args, "gen_seed", 0)
        return gen_graph(args.family, params, seed=seed), instance_label(
            args.family, params, seed
        )
    raise ValueError("need --graph FILE or --family NAME")


def _space_from_args(m, args):
    delta = Fraction(args.delta) if args.delta is not None else Fraction(0)
    L = args.marginal_L
    if L and L > 1:
        builder = exact_builder if delta == 0 else almost_builder
        return with_marginal(builder, m, args.k, delta, L)
    if delta == 0:
        return build_kwise(m, args.k)
    return build_almost_kwise(m, args.k, delta)


def _mode_kwargs(args):
    if args.sample is not None:
        return {"mode": "sample", "trials": args.sample, "seed": args.seed}
    return {"mode": "enumerate"}


def _constants_file(args):
    if getattr(args, "constants", None):
        with open(args.constants) as fh:
            return json.load(fh)
    return {}


def _emit(args, payload: str, rates=None):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        sys.stdout.write(payload + "\n")
    if getattr(args, "csv", None) and rates is not None:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rate", "value"])
            for name in sorted(rates):
                w.writerow([name, rates[name]])


def _emit_report(args, report):
    blob = json.loads(report.to_json())
    _emit(args, json.dumps(blob, sort_keys=True, indent=2), rates=blob["rates"])


# -- subcommand bodies -------------------------------------------------------


def _cmd_gen(args):
    g, label = _graph_from_args(args)
    payload = g.to_json() if args.json else g.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload if payload.endswith("\n") else payload + "\n")
    else:
        sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")
    summary = dict(graph_summary(g), generator=label)
    sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    return 0


def _cmd_connectivity(args):
    g, label = _graph_from_args(args)
    space = _space_from_args(g.m, args)
    report = connectivity_experiment(
        g, space, generator=label, budget=args.budget, **_mode_kwargs(args)
    )
    _emit_report(args, report)
    return 0


def _cmd_cyclefree(args):
    g, label = _graph_from_args(args)
    space = _space_from_args(g.m, args)
    report = cyclefree_experiment(
        g, space, generator=label, budget=args.budget, **_mode_kwargs(args)
    )
    _emit_report(args, report)
    return 0


def _parse_edges(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _cmd_unique_cut(args):
    g, label = _graph_from_args(args)
    space = _space_from_args(g.m, args)
    report = unique_cut_survival_experiment(
        g, _parse_edges(args.edges), space,
        generator=label, budget=args.budget, **_mode_kwargs(args),
    )
    _emit_report(args, report)
    return 0


def _cmd_unique_cycle(args):
    g, label = _graph_from_args(args)
    space = _space_from_args(g.m, args)
    report = unique_cycle_survival_experiment(
        g, _parse_edges(args.edges), space,
        generator=label, budget=args.budget, **_mode_kwargs(args),
    )
    _emit_report(args, report)
    return 0


def _cmd_sparsify(args):
    g, label = _graph_from_args(args)
    knobs = _constants_file(args)
    report = sparsify_experiment(
        g,
        args.k if args.k is not None else int(knobs.get("k", 2)),
        args.epsilon if args.epsilon is not None else float(knobs.get("epsilon", 0.5)),
        float(Fraction(args.delta)) if args.delta is not None else float(knobs.get("delta", 0.25)),
        rate_scale=args.rate_scale if args.rate_scale is not None else float(knobs.get("rate_scale", 1.0)),
        max_level=args.max_level if args.max_level is not None else int(knobs.get("max_level", 20)),
        generator=label,
        budget=args.budget,
        **_mode_kwargs(args),
    )
    _emit_report(args, report)
    return 0


def _cmd_reweight(args):
    g, label = _graph_from_args(args)
    knobs = _constants_file(args)
    report = reweight_then_connectivity(
        g,
        args.k if args.k is not None else int(knobs.get("k", 2)),
        epsilon=args.epsilon if args.epsilon is not None else float(knobs.get("epsilon", 0.5)),
        delta=float(Fraction(args.delta)) if args.delta is not None else float(knobs.get("delta", 0.25)),
        rate_scale=args.rate_scale if args.rate_scale is not None else float(knobs.get("rate_scale", 1.0)),
        max_level=args.max_level if args.max_level is not None else int(knobs.get("max_level", 20)),
        generator=label,
        budget=args.budget,
        **_mode_kwargs(args),
    )
    _emit_report(args, report)
    return 0


def _cmd_find_basis(args):
    g, label = _graph_from_args(args)
    overrides = _constants_file(args)
    base = Constants.desk().to_dict()
    unknown = set(overrides) - set(base)
    if unknown:
        raise ValueError(f"unknown constants: {sorted(unknown)}")
    base.update(overrides)
    constants = Constants(**base)
    session = OracleSession(g, args.kind)
    report = find_basis(
        session,
        constants=constants,
        mode="sample" if args.sample is not None else "enumerate",
        sample_count=args.sample if args.sample is not None else 1024,
        seed=args.seed,
    )
    blob = report.to_dict()
    blob["generator"] = label
    _emit(args, json.dumps(blob, sort_keys=True, indent=2))
    return 0


def _cmd_verify_space(args):
    space = _space_from_args(args.n, args)
    if args.dump:
        sys.stdout.write(dump_support(space, args.budget))
        return 0
    rep = verify_independence(space, k_check=args.k_check, budget=args.budget)
    blob = {
        "descriptor": space.descriptor(),
        "seed_bits": space.seed_bits,
        "max_tv": f"{rep.max_tv.numerator}/{rep.max_tv.denominator}",
        "worst_subset": list(rep.worst_subset),
        "subsets_tested": rep.subsets_tested,
        "certified_delta": f"{space.params.delta.numerator}/{space.params.delta.denominator}",
        "ok": rep.max_tv <= space.params.delta,
    }
    _emit(args, json.dumps(blob, sort_keys=True, indent=2))
    return 0


# -- parser wiring -----------------------------------------------------------


def _add_graph_flags(p):
    p.add_argument("--graph", help="graph file (text or JSON)")
    p.add_argument("--family", help="generator family name")
    p.add_argument("--params", default="", help="k=v,... (':' builds int lists)")
    p.add_argument("--gen-seed", type=int, default=0, help="generator seed")


def _add_space_flags(p):
    p.add_argument("--k", type=int, default=2, help="independence order")
    p.add_argument("--delta", default=None, help="near-uniformity slack, e.g. 1/8")
    p.add_argument("--marginal-L", type=int, default=None, dest="marginal_L",
                   help="AND groups of L bits for marginal 2^-L")


def _add_run_flags(p):
    p.add_argument("--sample", type=int, default=None, metavar="N",
                   help="Monte Carlo with N seeded draws instead of enumeration")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="support size cap")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.add_argument("--csv", default=None, help="also write rates as CSV")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="edgewise", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph and print it")
    _add_graph_flags(p)
    p.add_argument("--json", action="store_true", help="JSON instead of text")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_gen)

    for name, fn in (("connectivity", _cmd_connectivity), ("cyclefree", _cmd_cyclefree)):
        p = sub.add_parser(name, help=f"{name} rate experiment")
        _add_graph_flags(p)
        _add_space_flags(p)
        _add_run_flags(p)
        p.set_defaults(fn=fn)

    for name, fn in (("unique-cut", _cmd_unique_cut), ("unique-cycle", _cmd_unique_cycle)):
        p = sub.add_parser(name, help=f"{name} survival experiment")
        _add_graph_flags(p)
        _add_space_flags(p)
        _add_run_flags(p)
        p.add_argument("--edges", required=True, help="target edge ids, comma-separated")
        p.set_defaults(fn=fn)

    for name, fn in (("sparsify", _cmd_sparsify), ("reweight", _cmd_reweight)):
        p = sub.add_parser(name, help=f"{name} experiment")
        _add_graph_flags(p)
        _add_run_flags(p)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--delta", default=None, help="failure budget, e.g. 0.25")
        p.add_argument("--epsilon", type=float, default=None)
        p.add_argument("--rate-scale", type=float, default=None, dest="rate_scale")
        p.add_argument("--max-level", type=int, default=None, dest="max_level")
        p.add_argument("--constants", default=None,
                       help="JSON file of default knobs; explicit flags win")
        p.set_defaults(fn=fn)

    p = sub.add_parser("find-basis", help="derandomized basis finding")
    _add_graph_flags(p)
    p.add_argument("--kind", choices=("graphic", "cographic"), required=True)
    p.add_argument("--constants", default=None, help="JSON overrides for the desk profile")
    p.add_argument("--sample", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_find_basis)

    p = sub.add_parser("verify-space", help="measure a space's independence defect")
    p.add_argument("--n", type=int, required=True, help="coordinate count")
    _add_space_flags(p)
    p.add_argument("--k-check", type=int, default=None, dest="k_check")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--dump", action="store_true",
                   help="print support bitstrings instead of verifying")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_verify_space)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, PreconditionError, SupportTooLargeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ClaimViolation as exc:
        # a theorem-level guarantee failed at the scale it was run at
        sys.stderr.write(f"claim violated: {exc}\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
