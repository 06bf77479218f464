import numpy as np
import pandas as pd
import pytest
from scipy.special import expit, logit

from ckspace.config import EngagementConfig
from ckspace.engagement import (
    EngagementEstimate,
    EngagementModel,
    ErpModel,
    GaussianHmm,
    SplitFeatures,
    cv_folds,
    engagement_columns,
    erp_dataset,
    estimate_engagement,
    extract_engagement_features,
    fit_engagement,
    fit_erp,
    predict_erp,
    timescale_split,
)
from ckspace.errors import ValidationError
from ckspace.events import Event, EventKind, Session


def word_answer(t, word, correct, sid="a"):
    return Event(sid, None, t, EventKind.answer_submitted, {"correct": correct, "time_ms": 3000, "target": word})


class TestFeatures:
    def test_input_rate(self):
        events = [Event("a", None, 0, EventKind.task_shown, {"target": "Haus"})]
        events += [Event("a", None, 6000 * (i + 1), EventKind.key_input, {"char": "x"}) for i in range(10)]
        events.append(word_answer(60000, "Haus", True))

        features = extract_engagement_features(events)

        assert len(features) == 1
        assert features["input_rate"].iloc[0] == pytest.approx(10.0)
        assert features["help_rate"].iloc[0] == 0.0
        assert features["input_rate_variance"].iloc[0] == pytest.approx(0.0)

    def test_repetition(self):
        events = [
            word_answer(0, "Haus", False),
            word_answer(40000, "Ball", True),
            word_answer(80000, "Hund", True),
            word_answer(120000, "Haus", True),
        ]

        features = extract_engagement_features(events)
        last = features.iloc[-1]

        assert last["inputs_between_repetitions"] == 2
        assert last["time_between_repetitions"] == pytest.approx(120.0)
        assert np.isnan(features["time_between_repetitions"].iloc[0])

    def test_minor_error_uses_past_only(self):
        events = [
            word_answer(0, "Haus", False),
            word_answer(1000, "Haus", True),
            word_answer(2000, "Ball", True),
        ]

        minor = extract_engagement_features(events)["minor_error"]

        assert np.isnan(minor.iloc[0])
        assert np.isnan(minor.iloc[1])
        assert minor.iloc[2] == 1.0

    def test_no_answers(self):
        events = [Event("a", None, 0, EventKind.key_input, {"char": "x"})]
        features = extract_engagement_features(events)

        assert features.empty
        assert list(features.columns) == ["t", "task", *engagement_columns]


class TestTimescaleSplit:
    def test_constant(self):
        split = timescale_split(pd.Series([3.0] * 20, name="x"))

        np.testing.assert_allclose(split.trend["x"], 3.0)
        np.testing.assert_allclose(split.local["x"], 0.0)

    def test_impulse(self):
        values = np.ones(30)
        values[15] = 11.0

        split = timescale_split(pd.Series(values, name="x"), slow_alpha=0.05)

        assert split.local["x"].iloc[15] == pytest.approx(9.5)
        assert split.trend["x"].iloc[15] == pytest.approx(1.5)

    def test_lossless(self, rng):
        frame = pd.DataFrame(rng.normal(size=(50, 3)), columns=["a", "b", "c"])
        frame.iloc[4, 1] = np.nan

        split = timescale_split(frame)

        np.testing.assert_allclose((split.trend + split.local).to_numpy(), frame.to_numpy())
        assert list(split.frame().columns) == ["a_trend", "b_trend", "c_trend", "a_local", "b_local", "c_local"]

    def test_empty(self):
        with pytest.raises(ValidationError):
            timescale_split(pd.DataFrame(columns=["a"]))


def planted_logistic(rng, n=2000, decoys=50):
    X = rng.normal(size=(n, 3 + decoys))
    y = rng.random(n) < expit(-0.5 + 1.5 * X[:, 0] - 1.0 * X[:, 1] + 0.8 * X[:, 2])

    return X, y.astype(int)


class TestErp:
    def test_support_recovery(self, rng):
        (X, y) = planted_logistic(rng)
        model = fit_erp(X, y)

        assert model.weights[0] > 0
        assert model.weights[1] < 0
        assert model.weights[2] > 0
        assert np.count_nonzero(model.weights[3:] == 0.0) >= 40

    def test_orderings(self, rng):
        n = 3000
        x = rng.normal(size=n)
        receptive = rng.random(n) < 0.7
        p_receptive = np.clip(np.where(receptive, 0.85, 0.15) + rng.normal(0, 0.05, n), 0, 1)
        p_focused = rng.random(n)
        decay = rng.uniform(0, 300, n)
        interference = rng.integers(0, 10, n).astype(float)

        score = -1.5 + 0.5 * x + 1.0 * (~receptive) + 0.006 * decay
        y = (rng.random(n) < expit(score)).astype(int)

        X = np.column_stack([x, p_focused, p_receptive, decay, interference])
        model = fit_erp(X[:2000], y[:2000], feature_names=["x", "p_focused", "p_receptive", "decay", "interference"])

        held = np.arange(2000, n)
        forgetting = np.mean([predict_erp(model, [x[i]], [p_focused[i], p_receptive[i]], [250.0, interference[i]]) for i in held])
        fresh = np.mean([predict_erp(model, [x[i]], [p_focused[i], p_receptive[i]], [10.0, interference[i]]) for i in held])
        absent = np.mean([predict_erp(model, [x[i]], [p_focused[i], 0.1], [decay[i], interference[i]]) for i in held])
        present = np.mean([predict_erp(model, [x[i]], [p_focused[i], 0.9], [decay[i], interference[i]]) for i in held])

        assert forgetting > fresh
        assert absent > present

    def test_infinite_penalty(self, rng):
        (X, y) = planted_logistic(rng, n=400, decoys=5)
        config = EngagementConfig(min_penalty=1e6, max_penalty=1e6, penalties=1)

        model = fit_erp(X, y, config=config)

        assert not model.weights.any()
        assert model.intercept == pytest.approx(logit(y.mean()), abs=1e-8)
        assert predict_erp(model, np.zeros(8)) == pytest.approx(y.mean())

    def test_deterministic(self, rng):
        (X, y) = planted_logistic(rng, n=400, decoys=5)
        groups = np.repeat(np.arange(40), 10)

        a = fit_erp(X, y, groups=groups, seed=3)
        b = fit_erp(X, y, groups=groups, seed=3)

        np.testing.assert_array_equal(a.weights, b.weights)
        assert a.penalty == b.penalty

    def test_single_class(self):
        with pytest.raises(ValidationError):
            fit_erp(np.ones((10, 2)), np.zeros(10))

    def test_dimension_mismatch(self):
        model = ErpModel(["a", "b"], [1.0, 0.0], 0.0, 1.0)

        with pytest.raises(ValidationError):
            predict_erp(model, [1.0, 2.0], [0.5])

    def test_missing_input_uses_fill(self):
        model = ErpModel(["a"], [2.0], -1.0, 1.0, fill=[0.5])
        assert predict_erp(model, [np.nan]) == pytest.approx(0.5)

    def test_save_load(self, tmp_path):
        model = ErpModel(["a", "b"], [0.25, 0.0], -0.5, 3.0)
        model.save(tmp_path / "erp.json")

        loaded = ErpModel.load(tmp_path / "erp.json")

        assert loaded.feature_names == ["a", "b"]
        np.testing.assert_array_equal(loaded.weights, model.weights)
        assert loaded.penalty == 3.0


class TestFolds:
    def test_partition(self, rng):
        y = rng.random(200) < 0.3
        folds = cv_folds(y, folds=10, seed=1)

        assert len(folds) == 10
        np.testing.assert_array_equal(np.sort(np.concatenate(folds)), np.arange(200))

    def test_groups_stay_together(self, rng):
        y = (rng.random(300) < 0.4).astype(int)
        groups = np.repeat(np.arange(30), 10)

        for fold in cv_folds(y, groups, 10):
            inside = set(groups[fold])
            outside = set(groups[np.setdiff1d(np.arange(300), fold)])
            assert not inside & outside

    def test_too_few(self):
        with pytest.raises(ValidationError):
            cv_folds([0, 0, 0, 1])


class TestErpDataset:
    def test_labels(self):
        events = [
            word_answer(0, "Haus", False),
            word_answer(1000, "Ball", False),
            word_answer(2000, "Haus", False),
            word_answer(3000, "Ball", True),
            word_answer(4000, "Hund", False),
        ]

        data = erp_dataset([Session("a#0", events)])

        assert list(data["label"]) == [1, 0]
        assert list(data["student_id"]) == ["a", "a"]
        assert list(data["interference"]) == [1, 1]
        assert list(data.columns[-2:]) == ["decay", "interference"]

    def test_with_estimates(self):
        events = [word_answer(0, "Haus", False), word_answer(1000, "Haus", True)]

        data = erp_dataset([Session("a#0", events)], estimates=estimate_engagement)

        assert data["p_focused"].iloc[0] == pytest.approx(0.5)
        assert 0.0 <= data["p_receptive"].iloc[0] <= 1.0


def planted_chain(rng, n, stay=0.95):
    states = np.zeros(n, dtype=int)
    for t in range(1, n):
        states[t] = states[t - 1] if rng.random() < stay else 1 - states[t - 1]

    return states


class TestStates:
    def test_identical_emissions(self):
        hmm = GaussianHmm([0.5, 0.5], [[0.8, 0.2], [0.2, 0.8]], [[0.0, 1.0], [0.0, 1.0]], [[1.0, 2.0], [1.0, 2.0]])
        X = np.random.default_rng(1).normal(size=(40, 2))

        np.testing.assert_allclose(hmm.posteriors(X), 0.5)

    def test_missing_observations(self):
        hmm = GaussianHmm([0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]], [[0.0], [4.0]], [[1.0], [1.0]])
        posteriors = hmm.posteriors([[np.nan], [0.0]])

        np.testing.assert_allclose(posteriors[0], 0.5)
        assert posteriors[1, 0] > 0.99

    def test_recovery(self, rng):
        states = planted_chain(rng, 500)
        means = np.array([[0.0, 0.0], [3.0, -3.0]])
        X = means[states] + rng.normal(size=(500, 2))

        hmm = GaussianHmm.initial([X]).fit([X])
        guess = hmm.posteriors(X).argmax(axis=1)
        agreement = max(np.mean(guess == states), np.mean(guess != states))

        assert agreement >= 0.9

    def test_engagement_recovery(self, rng):
        n = 600
        focused = planted_chain(rng, n) == 0
        receptive = planted_chain(rng, n) == 0

        local = pd.DataFrame(0.0, index=range(n), columns=engagement_columns)
        local["input_rate_variance"] = np.where(focused, -2.0, 2.0) + rng.normal(size=n)
        local["minor_error"] = np.where(focused, -0.5, 0.5) + rng.normal(0, 0.3, n)
        local["help_rate"] = np.where(receptive, -1.0, 1.0) + rng.normal(0, 0.5, n)
        local["correct"] = np.where(receptive, 0.4, -0.4) + rng.normal(0, 0.2, n)

        split = SplitFeatures(pd.DataFrame(0.0, index=local.index, columns=local.columns), local)
        model = fit_engagement([split])
        estimates = estimate_engagement(split, model)

        assert np.mean([(e.p_focused > 0.5) == f for (e, f) in zip(estimates, focused)]) >= 0.9
        assert np.mean([(e.p_receptive > 0.5) == r for (e, r) in zip(estimates, receptive)]) >= 0.9

        for e in estimates:
            assert e.joint.sum() == pytest.approx(1.0)
            assert e.p_focused == pytest.approx(e.joint[0, 0] + e.joint[0, 1])

        restored = EngagementModel.from_dict(model.to_dict())
        np.testing.assert_allclose(restored.lift, model.lift)

    def test_short_series(self):
        local = pd.DataFrame([[0.0] * len(engagement_columns)], columns=engagement_columns)
        estimates = estimate_engagement(SplitFeatures(local, local))

        assert len(estimates) == 1
        np.testing.assert_allclose(estimates[0].joint, 0.25)

    def test_estimate_normalizes(self):
        estimate = EngagementEstimate([[2.0, 1.0], [1.0, 0.0]])

        assert estimate.p_focused == pytest.approx(0.75)
        assert estimate.p_receptive == pytest.approx(0.75)

    def test_fit_needs_steps(self):
        local = pd.DataFrame([[0.0] * len(engagement_columns)], columns=engagement_columns)

        with pytest.raises(ValidationError):
            fit_engagement([SplitFeatures(local, local)])
