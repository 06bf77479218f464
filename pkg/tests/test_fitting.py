import numpy as np
import pytest

from ckspace.config import KnowledgeConfig
from ckspace.errors import UnknownSkillError
from ckspace.knowledge import (
    Parameters,
    SkillParams,
    fit_params,
    prediction_auc,
    trace_predictions,
)

from conftest import make_net, simulate_answers


def population(rng, net, truth, students, length):
    return {f"u{i:04d}": simulate_answers(rng, net, truth, length) for i in range(students)}


class TestFit:
    def test_recovers_planted_parameters(self, rng):
        net = make_net(["A"])
        truth = SkillParams(Parameters(slip=0.1, guess=0.2, learn=0.15, forget=0.0))
        sequences = population(rng, net, truth, 500, 100)

        config = KnowledgeConfig(fit_forget=False, forget=0.0)
        params, summary = fit_params(sequences, net, config)

        fitted = params["A"]
        assert fitted.slip == pytest.approx(0.1, abs=0.05)
        assert fitted.guess == pytest.approx(0.2, abs=0.05)
        assert fitted.learn == pytest.approx(0.15, abs=0.05)
        assert summary["A"].observations == 50000
        assert summary["A"].sequences == 500

    def test_constraint_box(self, rng):
        net = make_net(["A", "B"], [("A", "B")])
        truth = SkillParams(Parameters(slip=0.35, guess=0.55, learn=0.2, forget=0.05))
        sequences = population(rng, net, truth, 50, 30)

        params, _ = fit_params(sequences, net)

        for s in net:
            p = params[s]
            assert 0.001 <= p.slip <= 0.3
            assert 0.001 <= p.guess <= 0.5
            assert p.forget <= p.learn

    def test_all_correct_is_degenerate(self):
        net = make_net(["A"])
        sequences = {f"u{i}": [("A", True)] * 20 for i in range(50)}

        params, summary = fit_params(sequences, net)

        assert params["A"].slip == pytest.approx(0.001)
        assert "degenerate" in summary["A"].flags
        assert "slip_at_bound" in summary["A"].flags

    def test_empty(self, chain):
        params, summary = fit_params(dict(), chain)

        assert params == SkillParams.from_config(KnowledgeConfig())
        assert len(summary) == 0

    def test_unobserved_skill_keeps_defaults(self, chain, rng):
        truth = SkillParams(Parameters(slip=0.1, guess=0.2, learn=0.15))
        sequences = {
            f"u{i}": simulate_answers(rng, chain, truth, 20, skills=["A", "B"]) for i in range(30)
        }

        params, summary = fit_params(sequences, chain)

        assert params["C"] == Parameters(0.1, 0.25, 0.1, 0.01)
        assert summary.flagged("no_observations") == ["C"]
        assert set(summary.to_frame(params)["skill_id"]) == {"A", "B", "C"}

    def test_unknown_skill(self, chain):
        with pytest.raises(UnknownSkillError):
            fit_params({"u": [("Z", True)]}, chain)


class TestPredictionQuality:
    def test_held_out_auc(self, rng):
        net = make_net(["A"])
        truth = SkillParams(Parameters(slip=0.1, guess=0.2, learn=0.1, forget=0.0))

        train = population(rng, net, truth, 300, 30)
        test = population(rng, net, truth, 100, 30)

        params, _ = fit_params(train, net)

        predictions = list()
        outcomes = list()

        for answers in test.values():
            p, _ = trace_predictions(answers, net, params)
            predictions.extend(p)
            outcomes.extend(c for (_, c) in answers)

        assert prediction_auc(predictions, outcomes) >= 0.75

    def test_auc_needs_both_classes(self):
        with pytest.raises(ValueError):
            prediction_auc([0.2, 0.8], [True, True])
