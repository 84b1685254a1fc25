"""
Tests for sample selection, the pace schedule and self-paced fine-tuning.

Self-paced steps are compared bit for bit against vanilla steps on the selected codes.
"""

import numpy as np
import pytest

from fewgen.canon import canonize_dataset
from fewgen.errors import ConfigError
from fewgen.finetune import (
    SelfPacedConfig,
    fine_tune,
    initial_threshold,
    pace_threshold,
    select_samples,
    self_paced_batch_step,
    vanilla_batch_step,
    vanilla_fine_tune,
)
from fewgen.model import AdamState, TrainConfig, batch_losses


@pytest.fixture
def codes(small_dataset):
    """Minimum codes of the three small graphs."""
    # Arrange
    return list(canonize_dataset(small_dataset).codes)


def test_selection_uses_strict_threshold():
    """Losses (0.5, 2.0, 1.0) with lambda 1.1 select the first and the last code."""
    # Arrange
    losses = np.array([0.5, 2.0, 1.0])

    # Act
    beta = select_samples(losses, 1.1)

    # Assert
    assert beta.tolist() == [True, False, True], "Codes below lambda are selected"
    assert not select_samples(losses, 0.0).any(), "lambda 0 selects nothing"
    assert select_samples(losses, 1e9).all(), "A huge lambda selects everything"
    assert not select_samples(losses, 0.5)[0], "Equality is not selection"


def test_selection_is_monotone_in_lambda():
    """Raising lambda never deselects a code."""
    # Arrange
    losses = np.random.default_rng(1).exponential(size=50)
    lams = np.linspace(0.0, 5.0, 40)

    # Act
    counts = [int(select_samples(losses, lam).sum()) for lam in lams]

    # Assert
    assert counts == sorted(counts), "Selected count must not decrease"


def test_pace_threshold_grows_geometrically():
    """lambda0 2 and growth 1.5 give 4.5 at batch 2."""
    # Arrange, Act and Assert
    assert pace_threshold(2.0, 1.5, 2) == pytest.approx(4.5)
    assert pace_threshold(2.0, 1.5, 0) == 2.0, "Batch 0 uses lambda0"


def test_initial_threshold_is_a_loss_quantile(codes, small_model):
    """The default threshold is the quantile of the initial per-code losses."""
    # Arrange
    losses = batch_losses(small_model, codes)

    # Act
    lam = initial_threshold(small_model, codes, quantile=0.5)

    # Assert
    assert lam == pytest.approx(float(np.median(losses))), "Median of three losses"


def test_all_selected_equals_vanilla_step(codes, small_model):
    """With every code under lambda the step is the vanilla step, bit for bit."""
    # Arrange
    cfg = TrainConfig()
    state = AdamState.create(small_model)

    # Act
    paced = self_paced_batch_step(
        small_model, codes, 1e9, state, cfg, np.random.default_rng(0)
    )
    vanilla = vanilla_batch_step(small_model, codes, state, cfg, np.random.default_rng(0))

    # Assert
    assert paced.params.bit_equal(vanilla.params), "Parameters differ"
    assert paced.selected == len(codes), "Every code selected"
    assert paced.state.step == vanilla.state.step == 1, "One optimizer step each"


def test_nothing_selected_is_a_no_op(codes, small_model):
    """lambda 0 leaves parameters and optimizer state untouched."""
    # Arrange
    state = AdamState.create(small_model)

    # Act
    step = self_paced_batch_step(
        small_model, codes, 0.0, state, TrainConfig(), np.random.default_rng(0)
    )

    # Assert
    assert step.params.bit_equal(small_model), "Parameters moved"
    assert step.state is state and step.selected == 0, "State must be unchanged"


def test_partial_selection_steps_on_selected_codes(codes, small_model):
    """A step on a partly selected batch equals a vanilla step on just the selected codes."""
    # Arrange
    cfg = TrainConfig(dropout=0.0)
    state = AdamState.create(small_model)
    losses = batch_losses(small_model, codes)
    ranked = np.sort(losses)
    lam = float(ranked[0] + ranked[1]) / 2.0
    easiest = [codes[int(np.argmin(losses))]]

    # Act
    paced = self_paced_batch_step(small_model, codes, lam, state, cfg, np.random.default_rng(0))
    vanilla = vanilla_batch_step(small_model, easiest, state, cfg, np.random.default_rng(0))

    # Assert
    assert paced.selected == 1, "Only the easiest code is selected"
    assert paced.params.bit_equal(vanilla.params), "Update must use the selected code alone"


def test_tiny_threshold_never_updates(codes, small_model):
    """With growth 1 and a threshold below every loss, fine-tuning never moves."""
    # Arrange
    spc = SelfPacedConfig(lambda0=1e-12, growth=1.0, train=TrainConfig(max_epochs=3))

    # Act
    result = fine_tune(small_model, codes, spc)

    # Assert
    assert result.params.bit_equal(small_model), "Parameters moved"
    assert result.steps == 0, "No optimizer steps"
    assert all(entry.selected == 0 for entry in result.batches), "Nothing selected"


def test_huge_threshold_matches_vanilla_fine_tuning(codes, small_model):
    """A threshold above every loss reproduces vanilla fine-tuning exactly."""
    # Arrange
    cfg = TrainConfig(batch_size=2, max_epochs=3, patience=5, seed=4)
    spc = SelfPacedConfig(lambda0=1e6, growth=10.0, train=cfg)

    # Act
    paced = fine_tune(small_model, codes, spc)
    vanilla = vanilla_fine_tune(small_model, codes, cfg)

    # Assert
    assert paced.params.bit_equal(vanilla.params), "Self-paced run diverged from vanilla"
    assert paced.history == vanilla.history, "Epoch histories must match"


def test_zero_epochs_return_input(codes, small_model):
    """A zero epoch budget returns the starting parameters."""
    # Arrange
    spc = SelfPacedConfig(lambda0=1.0, train=TrainConfig(max_epochs=0))

    # Act
    result = fine_tune(small_model, codes, spc)

    # Assert
    assert result.params.bit_equal(small_model), "Parameters moved"
    assert result.history == [] and result.batches == [], "Nothing logged"


def test_batch_log_tsv(codes, small_model):
    """The batch log has a header and one line per minibatch."""
    # Arrange
    spc = SelfPacedConfig(lambda0=50.0, train=TrainConfig(batch_size=2, max_epochs=1))

    # Act
    lines = fine_tune(small_model, codes, spc).log_tsv().splitlines()

    # Assert
    assert lines[0] == "epoch\tbatch\tlambda\tselected\tbatch_size\tbatch_loss", "Header"
    assert len(lines) == 3, "Three codes in batches of two"
    assert lines[1].split("\t")[4] == "2", "First batch holds two codes"


@pytest.mark.parametrize("kwargs", [{"lambda0": 0.0}, {"growth": 0.5}, {"lambda_quantile": 2}])
def test_self_paced_config_validation(kwargs):
    """Non-positive thresholds, shrinking schedules and bad quantiles are rejected."""
    # Arrange, Act and Assert
    with pytest.raises(ConfigError):
        SelfPacedConfig(**kwargs)
