"""Tests for the inner loop, the interpolation update and meta-training."""

import numpy as np
import pytest

from fewgen.canon import CodeCorpus, canonize_dataset
from fewgen.errors import ConfigError
from fewgen.meta import MetaConfig, inner_loop, meta_train, reptile_update
from fewgen.model import (
    ModelConfig,
    ModelParams,
    TrainConfig,
    batch_gradient,
    batch_losses,
    build_vocabulary,
    mean_loss,
)


def _vector(params: ModelParams, values) -> ModelParams:
    """Single-tensor parameter set sharing the config and vocabulary of `params`."""
    return ModelParams(params.config, params.vocab, {"w": np.asarray(values, dtype=float)})


@pytest.fixture
def corpora(small_dataset):
    """Two named corpora over the small vocabulary."""
    # Arrange
    codes = canonize_dataset(small_dataset).codes
    return [CodeCorpus("first", codes), CodeCorpus("second", codes[1:])]


def test_interpolation_toy_case(small_model):
    """theta=(0,0,0), theta_K=(1,2,-1) and epsilon 0.8 give (0.8,1.6,-0.8)."""
    # Arrange
    theta = _vector(small_model, [0.0, 0.0, 0.0])
    theta_k = _vector(small_model, [1.0, 2.0, -1.0])

    # Act
    updated = reptile_update(theta, theta_k, 0.8)

    # Assert
    np.testing.assert_allclose(updated["w"], [0.8, 1.6, -0.8], rtol=0, atol=1e-15)


def test_interpolation_end_points(small_model):
    """epsilon 0 keeps theta and epsilon 1 takes theta_K, bit for bit."""
    # Arrange
    theta_k = small_model.map(lambda t: t * 3.0 + 1.0)

    # Act
    at_zero = reptile_update(small_model, theta_k, 0.0)
    at_one = reptile_update(small_model, theta_k, 1.0)

    # Assert
    assert at_zero.bit_equal(small_model), "epsilon 0 must not move"
    assert at_one.bit_equal(theta_k), "epsilon 1 must land on the adapted parameters"


def test_interpolation_rejects_shape_mismatch(small_model):
    """Parameter sets of different shapes cannot be combined."""
    # Arrange
    theta = _vector(small_model, [0.0, 0.0])
    theta_k = _vector(small_model, [0.0, 0.0, 0.0])

    # Act and Assert
    with pytest.raises(ValueError):
        reptile_update(theta, theta_k, 0.5)


def test_single_inner_step_is_plain_gradient_descent(corpora, small_model):
    """K=1 with a batch covering the corpus equals theta - lr * grad exactly."""
    # Arrange
    codes = corpora[0].codes
    losses, grad = batch_gradient(small_model, list(codes), reduction="mean")
    expected = small_model.combine(grad, lambda w, g: w - 0.01 * g)

    # Act
    result = inner_loop(small_model, codes, k=1, lr=0.01, batch_size=len(codes), seed=0)

    # Assert
    assert result.params.bit_equal(expected), "One step must be exact gradient descent"
    assert result.start_loss == float(losses.mean()), "Loss before the step"
    assert result.end_loss == float(batch_losses(expected, list(codes)).mean()), "Loss after"


def test_single_step_meta_update_scales_the_gradient(corpora, small_model):
    """Interpolating toward one inner step gives theta - epsilon * lr * grad."""
    # Arrange
    codes = corpora[0].codes
    _, grad = batch_gradient(small_model, list(codes), reduction="mean")
    expected = small_model.combine(grad, lambda w, g: w - 0.8 * 0.01 * g)

    # Act
    inner = inner_loop(small_model, codes, k=1, lr=0.01, batch_size=len(codes), seed=0)
    updated = reptile_update(small_model, inner.params, 0.8)

    # Assert
    np.testing.assert_allclose(updated.flat(), expected.flat(), rtol=1e-12, atol=1e-14)


def test_two_inner_steps_match_hand_applied_steps(corpora, small_model):
    """K=2 on the full corpus equals two gradient steps applied one after the other."""
    # Arrange
    codes = list(corpora[0].codes)
    _, grad = batch_gradient(small_model, codes, reduction="mean")
    first = small_model.combine(grad, lambda w, g: w - 0.05 * g)
    _, grad = batch_gradient(first, codes, reduction="mean")
    second = first.combine(grad, lambda w, g: w - 0.05 * g)

    # Act
    result = inner_loop(small_model, codes, k=2, lr=0.05, batch_size=len(codes), seed=4)

    # Assert
    assert result.params.bit_equal(second), "Two steps must compose exactly"
    assert not result.params.bit_equal(first), "The second step moved the parameters"


def test_inner_loop_does_not_modify_theta(corpora, small_model):
    """The starting parameters are left alone."""
    # Arrange
    original = small_model.copy()

    # Act
    inner_loop(small_model, corpora[0].codes, k=3, lr=0.01, batch_size=2, seed=5)

    # Assert
    assert small_model.bit_equal(original), "theta was modified in place"


def test_zero_iterations_return_initialization(corpora, small_model):
    """Without meta-iterations the initial parameters come back."""
    # Arrange
    mc = MetaConfig(max_iterations=0)

    # Act
    result = meta_train(corpora, mc, TrainConfig(), None, small_model)

    # Assert
    assert result.params.bit_equal(small_model), "Parameters must be unchanged"
    assert result.log == [], "Nothing logged"


def test_log_records_every_iteration(corpora, small_model):
    """One log line per iteration; validation loss at the configured cadence."""
    # Arrange
    mc = MetaConfig(inner_steps=2, max_iterations=4, validate_every=2, patience=10)
    tc = TrainConfig(batch_size=2, dropout=0.0)

    # Act
    result = meta_train(corpora, mc, tc, [corpora[0]], small_model)

    # Assert
    assert len(result.log) == 4, "Four iterations"
    assert [e.val_loss is not None for e in result.log] == [False, True, False, True]
    assert {e.dataset for e in result.log} <= {"first", "second"}, "Sampled corpus names"
    header = result.log_tsv().splitlines()[0]
    assert header == "iteration\tdataset\tinner_start_loss\tinner_end_loss\tval_loss"


def test_meta_training_is_deterministic(corpora, small_model):
    """Equal seeds give bit-identical meta-parameters."""
    # Arrange
    mc = MetaConfig(inner_steps=2, max_iterations=3, seed=8)
    tc = TrainConfig(batch_size=2)

    # Act
    first = meta_train(corpora, mc, tc, None, small_model)
    second = meta_train(corpora, mc, tc, None, small_model)

    # Assert
    assert first.params.bit_equal(second.params), "Meta-training must be deterministic"
    assert not first.params.bit_equal(small_model), "Parameters moved"


def test_meta_training_needs_a_corpus(small_model):
    """Only empty corpora is an error."""
    # Arrange
    empty = [CodeCorpus("empty", ())]

    # Act and Assert
    with pytest.raises(ValueError):
        meta_train(empty, MetaConfig(), TrainConfig(), None, small_model)


@pytest.mark.parametrize(
    "kwargs",
    [{"inner_steps": 0}, {"epsilon": 1.5}, {"inner_lr": 0.0}, {"validate_every": 0}],
)
def test_meta_config_validation(kwargs):
    """Out-of-range meta settings are configuration errors."""
    # Arrange, Act and Assert
    with pytest.raises(ConfigError):
        MetaConfig(**kwargs)


@pytest.mark.slow
def test_meta_training_helps_an_unseen_spring_size(spring4, spring5, spring6):
    """Meta-training on 4- and 6-body springs lowers the loss on held-out 5-body springs."""
    # Arrange
    vocab = build_vocabulary([spring4, spring5, spring6])
    corpora = [canonize_dataset(vocab.adopt(d)) for d in (spring4, spring6)]
    held_out = canonize_dataset(vocab.adopt(spring5)).codes
    init = ModelParams.initialize(ModelConfig(16, 16, 16, 1), vocab, seed=0)
    mc = MetaConfig(inner_steps=5, max_iterations=200, seed=0)

    # Act
    result = meta_train(corpora, mc, TrainConfig(batch_size=8, dropout=0.0), None, init)

    # Assert
    random_loss = mean_loss(init, held_out)
    meta_loss = mean_loss(result.params, held_out)
    assert meta_loss < random_loss, f"Meta loss {meta_loss} not below random {random_loss}"
