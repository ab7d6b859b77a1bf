import math

import numpy as np
import pytest

import bandit_combiner as bc


def test_alphabound_sup_closed_form():
    A, B, a = 2.0, 0.5, 0.5
    expected = a ** (a / (1 - a)) * (1 - a) * A ** (1 / (1 - a)) / B ** (a / (1 - a))
    assert bc.alphabound_sup(A, B, a) == pytest.approx(expected)


def test_eta_targets_are_feasible():
    bounds = [bc.PutativeBound(1.0, 0.5), bc.PutativeBound(2.0, 0.6)]
    targets = bc.target_regrets_from_eta(bounds, [0.1, 0.2], 10000, 0.05)
    assert len(targets) == 2
    assert bc.check_target_regret_conditions(bounds, targets, 10000, 0.05)


def test_experiment_targets():
    bounds = [bc.PutativeBound(2.0, 0.5), bc.PutativeBound(0.5, 0.5)]
    assert bc.target_regrets_experiment(bounds, 400) == pytest.approx([120.0, 45.0])


def test_presets_round_trip():
    assert set(bc.preset_names()) >= {"misspecified", "modelselection"}
    cfg = bc.preset("misspecified", 1.0)
    assert cfg["environment"]["alpha_mix"] == 1.0
    assert len(bc.config_hash(cfg)) == 16


def test_small_run_is_deterministic(tmp_path):
    cfg = bc.preset("misspecified", 0.0)
    cfg.update(horizon=300, replications=2, calibration_replications=1)
    regrets, meta = bc.run(cfg)
    again, _ = bc.run(cfg)
    assert set(regrets) == {"combiner", "ucb", "linucb"}
    for name, arr in regrets.items():
        assert arr.shape == (2, 300)
        assert np.all(np.diff(arr, axis=1) >= -1e-12)
        np.testing.assert_array_equal(arr, again[name])
    assert meta["seed"] == cfg["seed"]
    bc.run_to_dir(cfg, tmp_path)
    assert (tmp_path / "summary.csv").exists()
    assert (tmp_path / "metadata.json").exists()


def test_bad_config_raises():
    with pytest.raises(bc.ConfigError):
        bc.run({"horizon": 10, "bogus": 1})
    with pytest.raises(ValueError):
        bc.preset("misspecified", 0.5)
