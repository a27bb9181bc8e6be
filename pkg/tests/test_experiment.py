import json

import pytest

from netctrl.experiment import (
    CSV_SCHEMA,
    ExperimentConfig,
    ExperimentError,
    budget_label,
    parse_budget,
    run_experiment,
)


def tiny_config(**overrides):
    base = dict(
        seed=77,
        model="er",
        node_count=14,
        edge_count=40,
        instances=2,
        attack_runs=3,
        rer_budgets=(0, 2, None),
        heterogeneity_runs=2,
        disconnection_runs=2,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_budget_labels_roundtrip():
    assert budget_label(None) == "unlimited"
    assert budget_label(10) == "10"
    assert parse_budget("unlimited") is None
    assert parse_budget("inf") is None
    assert parse_budget("none") is None
    assert parse_budget("42") == 42
    with pytest.raises(ValueError):
        parse_budget("-1")
    with pytest.raises(ValueError):
        parse_budget("soon")


def test_config_requires_exactly_one_source():
    with pytest.raises(ValueError):
        ExperimentConfig(seed=1)
    with pytest.raises(ValueError):
        ExperimentConfig(seed=1, model="er", input_path="x.edges",
                         node_count=5, edge_count=5)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(seed=1, model="er")  # counts missing
    with pytest.raises(ValueError):
        tiny_config(criterion="spectral")
    with pytest.raises(ValueError):
        tiny_config(instances=0)
    with pytest.raises(ValueError):
        tiny_config(rer_budgets=())
    with pytest.raises(ValueError):
        tiny_config(rer_budgets=(-3,))


def test_run_writes_expected_artifacts(tmp_path):
    result = run_experiment(tiny_config(), tmp_path / "out")
    names = sorted(p.name for p in result.files)
    assert names == [
        "attack_curve_0.csv",
        "attack_curve_2.csv",
        "attack_curve_unlimited.csv",
        "degree_distribution.csv",
        "disconnection.csv",
        "heterogeneity.csv",
        "manifest.json",
        "rc_summary.csv",
        "rectify.csv",
    ]
    for path in result.files:
        assert path.exists()
    curve = (tmp_path / "out" / "attack_curve_0.csv").read_text().splitlines()
    assert curve[0] == f"# {CSV_SCHEMA} attack-curve budget=0"
    assert curve[1] == "step,removed_fraction,mean_nd,std_nd"
    assert len(curve) == 2 + 13  # header rows plus one line per removal step

    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["schema"] == CSV_SCHEMA
    assert manifest["config"]["rer_budgets"] == ["0", "2", "unlimited"]
    assert len(manifest["instance_seeds"]) == 2
    assert manifest["config_hash"]


def test_rerun_is_byte_identical(tmp_path):
    first = run_experiment(tiny_config(), tmp_path / "a")
    second = run_experiment(tiny_config(), tmp_path / "b")
    for p1, p2 in zip(sorted(first.files), sorted(second.files)):
        assert p1.name == p2.name
        assert p1.read_bytes() == p2.read_bytes()


def test_unlimited_budget_reaches_the_band(tmp_path):
    run_experiment(tiny_config(), tmp_path / "out")
    rows = (tmp_path / "out" / "rectify.csv").read_text().splitlines()[2:]
    unlimited = [r for r in rows if r.startswith("unlimited,")]
    assert unlimited
    assert all(r.endswith(",enc-satisfied,True") for r in unlimited)


def test_rc_summary_contains_pooled_rows(tmp_path):
    run_experiment(tiny_config(), tmp_path / "out")
    rows = (tmp_path / "out" / "rc_summary.csv").read_text().splitlines()[2:]
    pooled = [r for r in rows if ",pooled," in r]
    assert len(pooled) == 3  # one per budget


def test_file_input_source(tmp_path):
    from netctrl.edgelist import emit_edge_list
    from netctrl.generators import GeneratorParams, generate

    g = generate(GeneratorParams(model="er", node_count=12, edge_count=30, seed=3))
    src = tmp_path / "input.edges"
    emit_edge_list(g, src)
    config = ExperimentConfig(
        seed=5,
        input_path=str(src),
        attack_runs=2,
        rer_budgets=(0,),
        heterogeneity_runs=1,
        disconnection_runs=1,
    )
    result = run_experiment(config, tmp_path / "out")
    assert any(p.name == "rc_summary.csv" for p in result.files)


def test_missing_input_fails_in_generate_stage(tmp_path):
    config = ExperimentConfig(seed=1, input_path=str(tmp_path / "nope.edges"))
    with pytest.raises(ExperimentError) as err:
        run_experiment(config, tmp_path / "out")
    assert err.value.stage == "generate"
