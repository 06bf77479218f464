import json

import numpy as np
import pandas as pd
import pytest

from ckspace.config import ScreenerConfig
from ckspace.errors import ParseError, ValidationError
from ckspace.events import Event, EventKind, sessionize
from ckspace.screener import (
    FeatureKind,
    ScreenFeature,
    ScreenLabel,
    ScreenerModel,
    evaluate,
    extract_screen_features,
    fit_screener,
    load_feature_bank,
    screen,
    select_features,
)
from ckspace.simulation import sample_screening

from conftest import make_net


@pytest.fixture(scope="module")
def training():
    return sample_screening(n=1000, seed=11)


@pytest.fixture(scope="module")
def held_out():
    return sample_screening(n=1000, seed=12)


@pytest.fixture(scope="module")
def selected(training):
    return select_features(training.features, training.labels, ScreenerConfig(alpha=0.05), load_feature_bank())


@pytest.fixture(scope="module")
def model(training, selected):
    return fit_screener(training.features, training.labels, selected)


def answer(t, skill, correct, game, time_ms=2000, **extra):
    data = {"skill": skill, "correct": correct, "time_ms": time_ms, "game": game, **extra}
    return Event("s0", "s0-0", t, EventKind.answer_submitted, data)


def toy_model(prior=0.5):
    features = [ScreenFeature.from_id(f"P/g{i}", 1.0) for i in range(3)]
    means = [[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]]

    return ScreenerModel(features, means, np.ones((3, 2)), prior)


class TestFeatures:
    def test_parse(self):
        feature = ScreenFeature.from_id("TM/counting@number-race:R10", 1.5, "number-race:R10")

        assert feature.kind is FeatureKind.typical_mistake
        assert feature.name == "counting"
        assert feature.games == {"number-race"}
        assert feature.ranges == {"R10"}
        assert feature.time_min == 1.5

    def test_game_features(self):
        assert ScreenFeature.from_id("P/landing@R100").games == {"landing"}
        assert ScreenFeature.from_id("AT/all").games == frozenset()

    @pytest.mark.parametrize("id", ["X/landing", "P", "P/", "P/landing@R10::R100"])
    def test_invalid_ids(self, id):
        with pytest.raises(ParseError):
            ScreenFeature.from_id(id)

    def test_values(self):
        net = make_net(["A"])
        events = [
            answer(0, "A", True, "landing", 1000, strategy="counting"),
            answer(10, "A", False, "landing", 100000, mistake="counting", strategy="retrieval"),
            answer(20, "A", True, "digits", 1000),
        ]

        assert ScreenFeature.from_id("P/landing").value(events, net) == 0.5
        assert ScreenFeature.from_id("AT/landing").value(events, net) == pytest.approx(1.0)
        assert ScreenFeature.from_id("TM/counting").value(events, net) == pytest.approx(1 / 3)
        assert ScreenFeature.from_id("SN/counting@landing:R10").value(events, net) == 0.5
        assert np.isnan(ScreenFeature.from_id("P/calculator").value(events, net))

    def test_ranges_need_a_net(self):
        feature = ScreenFeature.from_id("P/landing@R10")

        assert np.isnan(feature.value([answer(0, "A", True, "landing")]))

    def test_shipped_bank(self):
        bank = load_feature_bank()

        assert len(bank) == 63
        assert len({f.hint for f in bank}) == 21
        assert all(f.time_min > 0 for f in bank)

    def test_bank_errors(self, tmp_path):
        path = tmp_path / "bank.json"

        for document in (
            [{"id": "P/landing", "kind": "AT"}],
            [{"id": "P/landing"}, {"id": "P/landing"}],
            [{"id": "P/landing", "time_min": -1}],
            [{"kind": "P"}],
            {"id": "P/landing"},
        ):
            path.write_text(json.dumps(document))

            with pytest.raises(ParseError):
                load_feature_bank(path)

    def test_extract(self):
        net = make_net(["A"])
        sessions = sessionize([answer(0, "A", True, "landing"), answer(10, "A", False, "landing")])
        bank = [ScreenFeature.from_id("P/landing"), ScreenFeature.from_id("P/digits")]

        frame = extract_screen_features(sessions, bank, net)

        assert list(frame.index) == ["s0"]
        assert frame.loc["s0", "P/landing"] == 0.5
        assert np.isnan(frame.loc["s0", "P/digits"])

    def test_extract_empty_bank(self):
        with pytest.raises(ValidationError):
            extract_screen_features([], [])


class TestSelection:
    def test_one_per_signal_group(self, selected):
        assert len(selected) == 17
        assert len({f.hint for f in selected}) == 17
        assert not {f.hint for f in selected} & {"tool-shed:R1000", "welcome:R10", "welcome:R100", "welcome:R1000"}

    def test_sorted_by_p_value(self, selected):
        keys = [(f.p_value, f.id) for f in selected]

        assert keys == sorted(keys)
        assert all(f.group is not None for f in selected)

    def test_keeps_every_group_without_alpha(self, training):
        features = select_features(training.features, training.labels)

        assert len(features) == 21

    def test_column_order_does_not_matter(self, training, selected):
        shuffled = training.features[training.features.columns[::-1]]

        assert select_features(shuffled, training.labels, ScreenerConfig(alpha=0.05), load_feature_bank()) == selected

    def test_constant_features_are_dropped(self, training):
        frame = training.features.iloc[:, :3].assign(constant=1.0)
        features = select_features(frame, training.labels)

        assert "constant" not in [f.id for f in features]

    def test_needs_both_classes(self, training):
        with pytest.raises(ValidationError):
            select_features(training.features, np.zeros(len(training.features)))


class TestScreen:
    def test_prior_only(self):
        result = screen([], toy_model(0.3))

        assert result.posterior == pytest.approx(0.3)
        assert result.label is ScreenLabel.not_at_risk
        assert result.trace == [0.3]

    def test_evidence(self):
        result = screen({"P/g0": 0.0, "P/g1": 0.0, "P/g2": 0.0}, toy_model())

        assert result.label is ScreenLabel.at_risk
        assert result.posterior == pytest.approx(1 / (1 + np.exp(-1.5)))
        assert len(result.trace) == 4

    def test_missing_values_are_skipped(self):
        result = screen({"P/g0": 0.0}, toy_model(), ScreenerConfig(epsilon=0.0))

        assert result.posterior == pytest.approx(1 / (1 + np.exp(-0.5)))

    def test_stream_order(self):
        with pytest.raises(ValidationError):
            screen([("P/g1", 0.0)], toy_model())

    def test_early_stop(self):
        model = toy_model()
        result = screen({"P/g0": 0.5, "P/g1": 0.5, "P/g2": 0.5}, model, ScreenerConfig(patience=2))

        assert len(result.features) == 2
        assert result.minutes == 2.0

    def test_order_invariant(self, training, selected, held_out):
        config = ScreenerConfig(epsilon=0.0)
        permuted = [selected[i] for i in np.random.default_rng(3).permutation(len(selected))]

        a = fit_screener(training.features, training.labels, selected)
        b = fit_screener(training.features, training.labels, permuted)

        for (_, row) in held_out.features.head(100).iterrows():
            assert screen(row, a, config).posterior == screen(row, b, config).posterior

    def test_save_load(self, model, tmp_path):
        model.save(tmp_path / "model.json")
        loaded = ScreenerModel.load(tmp_path / "model.json")

        assert [f.id for f in loaded.features] == [f.id for f in model.features]
        np.testing.assert_array_equal(loaded.means, model.means)
        assert loaded.prior == model.prior

    def test_invalid_model(self):
        with pytest.raises(ValidationError):
            ScreenerModel([ScreenFeature.from_id("P/a")], [[0.0, 1.0]], [[1.0, 1.0]], 1.0)
        with pytest.raises(ParseError):
            ScreenerModel.from_dict({"features": []})


class TestEvaluate:
    def test_accuracy(self, model, held_out):
        evaluation = evaluate(model, held_out.features, held_out.labels)

        assert evaluation.sensitivity >= 0.85
        assert evaluation.specificity >= 0.85

    def test_early_stopping(self, model, held_out):
        early = evaluate(model, held_out.features, held_out.labels)
        batch = evaluate(model, held_out.features, held_out.labels, ScreenerConfig(epsilon=0.0))

        assert early.mean_features < 0.6 * len(model)
        assert batch.mean_features == len(model)
        assert batch.accuracy - early.accuracy <= 0.03
        assert early.classified_by >= 0.4

    def test_results(self, model, held_out):
        evaluation = evaluate(model, held_out.features.head(10), held_out.labels[:10])

        assert list(evaluation.results.columns) == ["student_id", "label", "posterior", "n_features", "minutes"]
        assert len(evaluation.results) == 10

    def test_empty(self, model):
        with pytest.raises(ValidationError):
            evaluate(model, pd.DataFrame(columns=[f.id for f in model.features]), [])
