"""
Tests for the fewgen command line: exit codes, run records, dataset commands and an
end-to-end run from synthetic data to a metric report.
"""

import json

import pytest

from fewgen import __version__
from fewgen.cli import run
from fewgen.cli.config import RunConfig
from fewgen.errors import ConfigError
from fewgen.graphs import read_dataset


def test_synth_is_reproducible(tmp_path):
    """Equal seeds write byte-identical dataset files."""
    # Arrange
    first, second = tmp_path / "a", tmp_path / "b"

    # Act
    codes = [
        run(["synth", "--particles", "4", "--count", "10", "--seed", "3", "--out", str(out)])
        for out in (first, second)
    ]

    # Assert
    assert codes == [0, 0], "Both runs succeed"
    assert (first / "spring-4.txt").read_bytes() == (second / "spring-4.txt").read_bytes()
    assert len(read_dataset(first / "spring-4.txt")) == 10, "Ten graphs written"


def test_run_record_is_written(tmp_path):
    """Every command with an output directory writes config.json and run.json."""
    # Arrange
    out = tmp_path / "synth"

    # Act
    code = run(["synth", "--particles", "3", "--count", "2", "--seed", "5", "--out", str(out)])

    # Assert
    assert code == 0
    record = json.loads((out / "run.json").read_text(encoding="utf-8"))
    assert record["command"] == "synth" and record["seed"] == 5
    assert record["version"] == __version__
    config = json.loads((out / "config.json").read_text(encoding="utf-8"))
    assert config["seed"] == 5 and config["train.lr"] == 0.003, "Resolved configuration"


def test_version_flag(capsys):
    """--version prints the version and exits successfully."""
    # Arrange/Act
    code = run(["--version"])

    # Assert
    assert code == 0
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["synth", "--bogus"],
        ["synth"],
        ["no-such-command"],
    ],
)
def test_usage_errors_exit_one(argv, tmp_path):
    """Unknown options, missing required options and unknown commands are usage errors."""
    # Arrange/Act
    code = run(argv + ["--out", str(tmp_path)])

    # Assert
    assert code == 1


def test_missing_input_exits_one(tmp_path):
    """A dataset path that does not exist is a configuration error."""
    # Arrange/Act
    code = run(["canon", str(tmp_path / "absent.txt"), "--out", str(tmp_path / "out")])

    # Assert
    assert code == 1


def test_malformed_dataset_exits_two(tmp_path):
    """A dataset that fails to parse is a data error."""
    # Arrange
    path = tmp_path / "bad.txt"
    path.write_text("t # 0\nv 0 A\nv 0 B\n", encoding="utf-8")

    # Act
    code = run(["canon", str(path), "--out", str(tmp_path / "out")])

    # Assert
    assert code == 2


@pytest.mark.parametrize("item", ["train.bogus=1", "train.lr=0", "seed"])
def test_bad_set_items_exit_one(item, tmp_path):
    """Unknown keys, invalid values and items without '=' are rejected before any work."""
    # Arrange
    out = tmp_path / "out"

    # Act
    code = run(["synth", "--particles", "3", "--set", item, "--out", str(out)])

    # Assert
    assert code == 1
    assert not (out / "spring-3.txt").exists(), "Nothing generated"


def test_invalid_thread_count_exits_one(spring_files, tmp_path):
    """Zero worker threads is a configuration error."""
    # Arrange/Act
    code = run(
        ["canon", str(spring_files["spring-4"]), "--threads", "0", "--out", str(tmp_path)]
    )

    # Assert
    assert code == 1


def test_canon_writes_code_dump(spring_files, tmp_path):
    """One minimum code per graph, named after the input file."""
    # Arrange
    out = tmp_path / "codes"

    # Act
    code = run(["canon", str(spring_files["spring-5"]), "--out", str(out)])

    # Assert
    assert code == 0
    lines = (out / "spring-5.codes").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 20, "One line per graph"
    assert all(line.startswith("(0,1,") for line in lines), "Codes start at timestamps 0, 1"


def test_split_writes_partitions(spring_files, tmp_path):
    """The three partitions are written with the default fractions."""
    # Arrange
    out = tmp_path / "split"

    # Act
    code = run(["split", str(spring_files["spring-6"]), "--seed", "1", "--out", str(out)])

    # Assert
    assert code == 0
    sizes = [len(read_dataset(out / f"spring-6-{part}.txt")) for part in ("train", "val", "test")]
    assert sizes == [4, 3, 3], "Ten graphs split 2/5, 3/10, 3/10"


def test_split_skips_empty_partitions(spring_files, tmp_path):
    """Empty partitions are not written, so every written file reads back."""
    # Arrange
    out = tmp_path / "split"
    fractions = ["--train-frac", "1", "--val-frac", "0", "--test-frac", "0"]

    # Act
    code = run(["split", str(spring_files["spring-6"]), *fractions, "--out", str(out)])

    # Assert
    assert code == 0
    assert len(read_dataset(out / "spring-6-train.txt")) == 10, "Everything in train"
    assert not (out / "spring-6-val.txt").exists(), "No file for the empty validation part"
    assert not (out / "spring-6-test.txt").exists(), "No file for the empty test part"


def test_stats_prints_summary(spring_files, capsys):
    """stats prints one row per dataset after a header."""
    # Arrange/Act
    code = run(["stats", str(spring_files["spring-4"]), str(spring_files["spring-6"])])

    # Assert
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("dataset\tgraphs\tnode_labels"), "Header"
    assert lines[1].split("\t")[:2] == ["spring-4", "20"]
    assert lines[2].split("\t")[:2] == ["spring-6", "10"]


def test_run_config_layers():
    """Overrides replace defaults, None values are ignored and unknown keys fail."""
    # Arrange
    cfg = RunConfig()

    # Act
    cfg.update({"seed": 4, "train.lr": 0.01, "train.batch_size": None})

    # Assert
    assert cfg.train().lr == 0.01 and cfg.train().batch_size == 32
    assert cfg.train().seed == cfg.meta().seed == cfg.split().seed == 4, "One seed everywhere"
    assert cfg.selfpaced().train == cfg.train(), "Fine-tuning reads the train section"
    with pytest.raises(ConfigError):
        cfg.update({"train.momentum": 0.5})


def test_run_config_file(tmp_path):
    """A JSON file of dotted keys overrides defaults."""
    # Arrange
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"generate.repair": "lenient", "meta.epsilon": 0.5}))

    # Act
    cfg = RunConfig.load(path)

    # Assert
    assert cfg.generation().repair.value == "lenient"
    assert cfg.meta().epsilon == 0.5
    assert json.loads(cfg.to_json())["meta.epsilon"] == 0.5


@pytest.mark.slow
def test_end_to_end(spring_files, tmp_path):
    """Meta-train, fine-tune, generate and evaluate with tiny settings."""
    # Arrange
    small = ["--embed-dim", "4", "--hidden-dim", "4", "--head-dim", "4", "--epochs", "2"]
    aux = [str(spring_files["spring-4"]), str(spring_files["spring-5"])]
    target = str(spring_files["spring-6"])
    meta, tuned, gen, ev = (tmp_path / d for d in ("meta", "ft", "gen", "eval"))

    # Act
    codes = [
        run(
            ["meta-train", "--aux", *aux, "--target", target, *small, "--meta-iterations", "3",
             "--inner-steps", "2", "--out", str(meta)]
        ),
        run(
            ["fine-tune", "--target", target, "--init", str(meta / "model.ckpt"),
             "--epochs", "2", "--out", str(tuned)]
        ),
        run(
            ["generate", "--checkpoint", str(tuned / "model.ckpt"), "--count", "3",
             "--repair", "lenient", "--out", str(gen)]
        ),
    ]
    report = dict(
        line.split("\t") for line in (gen / "generation_report.tsv").read_text().splitlines()
    )
    code = run(
        ["evaluate", "--generated", str(gen / "generated.txt"), "--test", str(tuned / "test.txt"),
         "--train", str(tuned / "train.txt"), "--out", str(ev)]
    )

    # Assert
    assert codes == [0, 0, 0], "Training and generation succeed"
    assert (meta / "meta_log.tsv").read_text().count("\n") == 4, "Header and three iterations"
    assert report["requested"] == "3"
    if report["emitted"] == "0":
        assert code == 2, "An empty generation cannot be evaluated"
        return
    assert code == 0, "Generated graphs are evaluated"
    metrics = json.loads((ev / "metrics.json").read_text(encoding="utf-8"))
    assert metrics["degree_mmd"] >= 0.0 and 0.0 <= metrics["novelty_pct"] <= 100.0
    assert metrics["edge_label_mmd"] == "N/A", "Spring graphs have unlabeled edges"
