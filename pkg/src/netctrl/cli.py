"""Command-line front end.

Subcommands map one-to-one onto the library: generate, attack, rectify,
enumerate, enc-check, features, experiment. Graphs travel as edge-list
files; tables come out as versioned CSV. Every randomized command requires
--seed.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .attack import random_attack
from .controllability import EXACT, STRUCTURAL, exact_drivers, structural_drivers
from .edgelist import EdgeListError, emit_edge_list, format_edge_list, load_edge_list
from .enumeration import enumerate_instances, evaluate_catalog, verify_subset_relation
from .experiment import (
    ExperimentConfig,
    ExperimentError,
    budget_label,
    parse_budget,
    run_experiment,
    write_csv,
)
from .generators import MODELS, GeneratorParams, generate
from .graph import IN, OUT
from .metrics import basic_features, degree_distribution
from .rectify import check_enc, rectify


def _add_criterion(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--criterion",
        choices=(STRUCTURAL, EXACT),
        default=STRUCTURAL,
        help="controllability notion used for driver counts",
    )


def _out_dir(args) -> Path | None:
    if args.out_dir is None:
        return None
    path = Path(args.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_generate(args) -> int:
    params = GeneratorParams(
        model=args.model,
        node_count=args.nodes,
        edge_count=args.edges,
        seed=args.seed,
    )
    g = generate(params)
    out = _out_dir(args)
    if out is None:
        sys.stdout.write(format_edge_list(g))
    else:
        path = out / f"{args.model}_{args.nodes}_{args.edges}_{args.seed}.edges"
        emit_edge_list(g, path)
        print(f"wrote {path}")
    return 0


def _cmd_attack(args) -> int:
    g = load_edge_list(args.input).graph
    result = random_attack(g, args.runs, args.seed, args.criterion)
    print(
        f"criterion={args.criterion} runs={result.runs} "
        f"mean_rc={result.score.value!r} std_rc={result.score.std!r}"
    )
    out = _out_dir(args)
    if out is not None:
        n = g.node_count
        rows = [
            [i + 1, Fraction(i + 1, n), m, s]
            for i, (m, s) in enumerate(zip(result.mean_density, result.std_density))
        ]
        path = out / "attack_curve.csv"
        write_csv(path, "attack-curve", ["step", "removed_fraction", "mean_nd", "std_nd"], rows)
        print(f"wrote {path}")
    return 0


def _cmd_rectify(args) -> int:
    g = load_edge_list(args.input).graph
    budget = parse_budget(args.rer_budget)
    fixed, trace = rectify(g, budget, args.seed)
    report = check_enc(fixed)
    print(
        f"budget={budget_label(budget)} rounds={trace.rounds} "
        f"operations={trace.operations_applied} "
        f"reason={trace.reason} enc_satisfied={report.satisfied}"
    )
    out = _out_dir(args)
    if out is None:
        sys.stdout.write(format_edge_list(fixed))
    else:
        path = out / "rectified.edges"
        emit_edge_list(fixed, path)
        print(f"wrote {path}")
    return 0


def _cmd_enumerate(args) -> int:
    catalog = evaluate_catalog(
        enumerate_instances(args.nodes, args.edges), args.criterion
    )
    relation = verify_subset_relation(catalog)
    rows = [
        [
            i,
            catalog.canonical_forms[i].hex(),
            str(catalog.scores[i]),
            str(catalog.deficiency_scores[i]),
            catalog.enc_flags[i],
            catalog.optimal_flags[i],
        ]
        for i in range(len(catalog))
    ]
    out = _out_dir(args)
    if out is not None:
        path = out / f"enumeration_{args.nodes}_{args.edges}.csv"
        write_csv(
            path,
            f"enumeration n={args.nodes} m={args.edges}",
            ["index", "canonical", "mean_rc", "mean_deficiency", "enc", "optimal"],
            rows,
        )
        print(f"wrote {path}")
    else:
        for row in rows:
            print(",".join(str(x) for x in row))
    print(
        f"instances={len(catalog)} enc={relation.enc_count} "
        f"optimal={relation.optimal_count} subset_holds={relation.holds}"
    )
    return 0


def _cmd_enc_check(args) -> int:
    g = load_edge_list(args.input).graph
    report = check_enc(g)
    print(
        f"bounds=[{report.bounds.lower},{report.bounds.upper}] "
        f"violations={len(report.violations)} satisfied={report.satisfied}"
    )
    for v in report.violations[:20]:
        print(f"  node {v.node} {v.side}-degree {v.degree}")
    return 0 if report.satisfied else 1


def _cmd_features(args) -> int:
    doc = load_edge_list(args.input)
    g = doc.graph
    bundle = basic_features(g)
    drivers = (
        structural_drivers(g) if args.criterion == STRUCTURAL else exact_drivers(g)
    )
    print(f"nodes={g.node_count} edges={g.edge_count}")
    print(f"dropped_self_loops={doc.dropped_self_loops} "
          f"dropped_duplicates={doc.dropped_duplicates}")
    print(f"driver_count={drivers.count} criterion={args.criterion}")
    print(f"mean_degree={bundle.mean_degree} ({float(bundle.mean_degree)!r})")
    apl = bundle.average_path_length
    print(f"average_path_length={apl if apl == float('inf') else float(apl)!r}")
    print(f"average_betweenness={bundle.average_betweenness!r}")
    print(f"clustering={float(bundle.clustering)!r}")
    print(f"h_out={float(bundle.h_out)!r} h_in={float(bundle.h_in)!r}")
    for side in (OUT, IN):
        hist = degree_distribution(g, side)
        head = ", ".join(f"{k}:{v}" for k, v in list(hist.items())[:12])
        print(f"{side}_degree_histogram={{{head}}}")
    return 0


def _cmd_experiment(args) -> int:
    budgets: list[int | None] = []
    for chunk in args.rer_budget:
        budgets.extend(parse_budget(tok) for tok in chunk.split(","))
    config = ExperimentConfig(
        seed=args.seed,
        model=args.model,
        input_path=args.input,
        node_count=args.nodes,
        edge_count=args.edges,
        criterion=args.criterion,
        instances=args.instances,
        attack_runs=args.runs,
        rer_budgets=tuple(budgets),
        heterogeneity_runs=args.het_runs,
        disconnection_runs=args.disc_runs,
    )
    result = run_experiment(config, args.out_dir)
    for path in result.files:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netctrl",
        description="controllability robustness toolkit: generate, attack, repair",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a model graph and emit its edge list")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir")
    p.set_defaults(handler=_cmd_generate)

    p = sub.add_parser("attack", help="random-removal robustness of one graph")
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir")
    _add_criterion(p)
    p.set_defaults(handler=_cmd_attack)

    p = sub.add_parser("rectify", help="push degrees into the band by edge moves")
    p.add_argument("--input", required=True)
    p.add_argument("--rer-budget", default="unlimited",
                   help="operation count or 'unlimited'")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir")
    p.set_defaults(handler=_cmd_rectify)

    p = sub.add_parser("enumerate",
                       help="catalog all (N, M) digraph classes and score them")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--out-dir")
    _add_criterion(p)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("enc-check", help="degree-band report; exit 1 on violation")
    p.add_argument("--input", required=True)
    p.set_defaults(handler=_cmd_enc_check)

    p = sub.add_parser("features", help="path/betweenness/clustering summary")
    p.add_argument("--input", required=True)
    _add_criterion(p)
    p.set_defaults(handler=_cmd_features)

    p = sub.add_parser("experiment", help="full grid run writing CSV artifacts")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--model", choices=MODELS)
    group.add_argument("--input")
    p.add_argument("--nodes", type=int)
    p.add_argument("--edges", type=int)
    p.add_argument("--runs", type=int, default=10, help="attack runs per instance")
    p.add_argument("--rer-budget", action="append", default=None,
                   help="repeatable; comma lists allowed; 'unlimited' for no cap")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--instances", type=int, default=1)
    p.add_argument("--het-runs", type=int, default=10)
    p.add_argument("--disc-runs", type=int, default=10)
    p.add_argument("--out-dir", required=True)
    _add_criterion(p)
    p.set_defaults(handler=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "rer_budget", None) is None and args.command == "experiment":
        args.rer_budget = ["0"]
    try:
        return args.handler(args)
    except (ValueError, OSError, EdgeListError, ExperimentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
