"""Experiment orchestration: generate/ingest, repair, attack, serialize.

One root seed drives everything. Instance i derives its own seed, and each
stage (generation, repair, attack, removal curves) draws from a distinct
child stream of that instance seed, so budgets share the same instance
graphs and the same attack permutations. Outputs are flat CSV files with a
versioned "# netctrl-csv v1 <kind>" header line plus a manifest; reruns of
an identical config produce byte-identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import rng as streams
from .attack import random_attack
from .controllability import EXACT, STRUCTURAL
from .edgelist import load_edge_list
from .generators import MODELS, GeneratorParams, generate
from .graph import IN, OUT, DirectedGraph
from .metrics import (
    boxplot,
    degree_distribution,
    disconnection_threshold,
    heterogeneity_curve,
)
from .rectify import check_enc, rectify

CSV_SCHEMA = "netctrl-csv v1"

UNLIMITED = "unlimited"


class ExperimentError(RuntimeError):
    """A pipeline stage failed; the message names the stage."""

    def __init__(self, stage: str, cause: BaseException) -> None:
        super().__init__(f"stage {stage!r}: {cause}")
        self.stage = stage


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment grid.

    Exactly one of model/input_path must be set. rer_budgets entries are
    operation counts, with None meaning unlimited. The seed is mandatory:
    reproducibility is not optional here.
    """

    seed: int
    model: str | None = None
    input_path: str | None = None
    node_count: int | None = None
    edge_count: int | None = None
    criterion: str = STRUCTURAL
    instances: int = 1
    attack_runs: int = 10
    rer_budgets: tuple[int | None, ...] = (0,)
    heterogeneity_runs: int = 10
    disconnection_runs: int = 10

    def __post_init__(self) -> None:
        if (self.model is None) == (self.input_path is None):
            raise ValueError("set exactly one of model or input_path")
        if self.model is not None:
            if self.model not in MODELS:
                raise ValueError(f"unknown model {self.model!r}")
            if self.node_count is None or self.edge_count is None:
                raise ValueError("model experiments need node and edge counts")
        if self.criterion not in (STRUCTURAL, EXACT):
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.instances < 1 or self.attack_runs < 1:
            raise ValueError("instances and attack_runs must be >= 1")
        if self.heterogeneity_runs < 0 or self.disconnection_runs < 0:
            raise ValueError("run counts must be non-negative")
        if not self.rer_budgets:
            raise ValueError("need at least one budget")
        for b in self.rer_budgets:
            if b is not None and b < 0:
                raise ValueError("budgets must be non-negative or None")

    def canonical_dict(self) -> dict:
        return {
            "seed": self.seed,
            "model": self.model,
            "input_path": self.input_path,
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "criterion": self.criterion,
            "instances": self.instances,
            "attack_runs": self.attack_runs,
            "rer_budgets": [budget_label(b) for b in self.rer_budgets],
            "heterogeneity_runs": self.heterogeneity_runs,
            "disconnection_runs": self.disconnection_runs,
        }


@dataclass(frozen=True)
class ExperimentResult:
    out_dir: Path
    files: tuple[Path, ...]
    manifest: dict = field(repr=False)


def budget_label(budget: int | None) -> str:
    return UNLIMITED if budget is None else str(budget)


def parse_budget(text: str) -> int | None:
    if text.strip().lower() in (UNLIMITED, "inf", "none"):
        return None
    value = int(text)
    if value < 0:
        raise ValueError("budget must be non-negative")
    return value


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path: Path, kind: str, columns: list[str], rows: list[list]) -> None:
    lines = [f"# {CSV_SCHEMA} {kind}", ",".join(columns)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _pooled_mean_std(means: list[float], stds: list[float]) -> tuple[float, float]:
    """Combine equally weighted groups via their first two moments."""
    k = len(means)
    mean = math.fsum(means) / k
    second = math.fsum(s * s + m * m for m, s in zip(means, stds)) / k
    return mean, math.sqrt(max(0.0, second - mean * mean))


def _instance_graph(config: ExperimentConfig, instance_seed: int) -> DirectedGraph:
    if config.input_path is not None:
        return load_edge_list(config.input_path).graph
    return generate(
        GeneratorParams(
            model=config.model,
            node_count=config.node_count,
            edge_count=config.edge_count,
            seed=instance_seed,
        )
    )


def run_experiment(config: ExperimentConfig, out_dir: str | Path) -> ExperimentResult:
    """Run the full grid and write CSVs plus a manifest under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    instance_seeds = [
        streams.derive_seed(config.seed, streams.EXPERIMENT, i)
        for i in range(config.instances)
    ]

    try:
        bases = [_instance_graph(config, s) for s in instance_seeds]
    except Exception as exc:
        raise ExperimentError("generate", exc) from exc

    files: list[Path] = []
    rc_rows: list[list] = []
    rectify_rows: list[list] = []
    het_rows: list[list] = []
    disc_rows: list[list] = []
    degree_rows: list[list] = []

    for budget in config.rer_budgets:
        label = budget_label(budget)
        repaired: list[DirectedGraph] = []
        for i, (g, inst_seed) in enumerate(zip(bases, instance_seeds)):
            try:
                fixed, trace = rectify(g, budget, inst_seed)
            except Exception as exc:
                raise ExperimentError("rectify", exc) from exc
            repaired.append(fixed)
            rectify_rows.append(
                [
                    label,
                    i,
                    trace.rounds,
                    trace.operations_applied,
                    trace.reason,
                    check_enc(fixed).satisfied,
                ]
            )

        attack_results = []
        for fixed, inst_seed in zip(repaired, instance_seeds):
            try:
                attack_results.append(
                    random_attack(
                        fixed, config.attack_runs, inst_seed, config.criterion
                    )
                )
            except Exception as exc:
                raise ExperimentError("attack", exc) from exc

        n = repaired[0].node_count
        steps = n - 1
        curve_rows = []
        for step in range(steps):
            mean, std = _pooled_mean_std(
                [r.mean_density[step] for r in attack_results],
                [r.std_density[step] for r in attack_results],
            )
            curve_rows.append([step + 1, Fraction(step + 1, n), mean, std])
        curve_path = out / f"attack_curve_{label}.csv"
        write_csv(
            curve_path,
            f"attack-curve budget={label}",
            ["step", "removed_fraction", "mean_nd", "std_nd"],
            curve_rows,
        )
        files.append(curve_path)

        for i, r in enumerate(attack_results):
            rc_rows.append([label, i, r.score.value, r.score.std, r.runs])
        pooled_rc, pooled_std = _pooled_mean_std(
            [float(r.score.value) for r in attack_results],
            [r.score.std or 0.0 for r in attack_results],
        )
        rc_rows.append([label, "pooled", pooled_rc, pooled_std,
                        config.attack_runs * config.instances])

        try:
            if config.heterogeneity_runs:
                for side in (OUT, IN):
                    curves = [
                        heterogeneity_curve(
                            fixed, inst_seed, config.heterogeneity_runs, side
                        )
                        for fixed, inst_seed in zip(repaired, instance_seeds)
                    ]
                    for step in range(steps):
                        weighted = Fraction(0)
                        defined = 0
                        for c in curves:
                            if c[step].mean is not None:
                                weighted += c[step].mean * c[step].defined_runs
                                defined += c[step].defined_runs
                        het_rows.append(
                            [
                                label,
                                side,
                                step + 1,
                                Fraction(step + 1, n),
                                weighted / defined if defined else "",
                                defined,
                            ]
                        )
            if config.disconnection_runs:
                pooled: list[Fraction] = []
                for fixed, inst_seed in zip(repaired, instance_seeds):
                    report = disconnection_threshold(
                        fixed, inst_seed, config.disconnection_runs
                    )
                    pooled.extend(report.fractions)
                box = boxplot(tuple(pooled))
                disc_rows.append(
                    [
                        label,
                        box.low,
                        box.q1,
                        box.median,
                        box.q3,
                        box.high,
                        ";".join(repr(o) for o in box.outliers),
                    ]
                )
            for side in (OUT, IN):
                totals: dict[int, int] = {}
                for fixed in repaired:
                    for degree, count in degree_distribution(fixed, side).items():
                        totals[degree] = totals.get(degree, 0) + count
                for degree in sorted(totals):
                    degree_rows.append([label, side, degree, totals[degree]])
        except Exception as exc:
            raise ExperimentError("metrics", exc) from exc

    try:
        rc_path = out / "rc_summary.csv"
        write_csv(
            rc_path,
            "rc-summary",
            ["budget", "instance", "mean_rc", "std_rc", "runs"],
            rc_rows,
        )
        files.append(rc_path)

        rectify_path = out / "rectify.csv"
        write_csv(
            rectify_path,
            "rectify-trace",
            ["budget", "instance", "rounds", "operations", "reason", "enc_satisfied"],
            rectify_rows,
        )
        files.append(rectify_path)

        if het_rows:
            het_path = out / "heterogeneity.csv"
            write_csv(
                het_path,
                "heterogeneity-curve",
                ["budget", "side", "step", "removed_fraction", "mean_h",
                 "defined_runs"],
                het_rows,
            )
            files.append(het_path)

        if disc_rows:
            disc_path = out / "disconnection.csv"
            write_csv(
                disc_path,
                "disconnection-boxplot",
                ["budget", "low", "q1", "median", "q3", "high", "outliers"],
                disc_rows,
            )
            files.append(disc_path)

        degree_path = out / "degree_distribution.csv"
        write_csv(
            degree_path,
            "degree-distribution",
            ["budget", "side", "degree", "count"],
            degree_rows,
        )
        files.append(degree_path)

        canonical = config.canonical_dict()
        manifest = {
            "schema": CSV_SCHEMA,
            "config": canonical,
            "config_hash": hashlib.sha256(
                json.dumps(canonical, sort_keys=True).encode()
            ).hexdigest(),
            "instance_seeds": instance_seeds,
            "files": sorted(p.name for p in files) + ["manifest.json"],
        }
        manifest_path = out / "manifest.json"
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        files.append(manifest_path)
    except ExperimentError:
        raise
    except Exception as exc:
        raise ExperimentError("serialize", exc) from exc

    return ExperimentResult(out_dir=out, files=tuple(files), manifest=manifest)
