import numpy as np
import pytest

from ckspace.config import StopPolicyConfig
from ckspace.errors import UnknownSkillError
from ckspace.knowledge import Parameters, SkillBelief, SkillParams
from ckspace.pedagogy import (
    ActionKind,
    BeliefModel,
    FrequencyModel,
    PathSegment,
    StopDecision,
    learning_path,
    mastery_threshold_policy,
    next_action,
    run_stop_policy,
    when_to_stop,
)

from conftest import make_net


@pytest.fixture
def fan():
    net = make_net(
        ["P", "A", "B", "C", "R1", "R2"],
        [("P", "A"), ("A", "B"), ("A", "C")],
        remediates={"R1": ["ten-crossing"], "R2": ["ten-crossing"]},
    )

    return net


def beliefs(**values):
    return SkillBelief(values)


class TestNextAction:
    def test_stay(self, fan):
        action = next_action(beliefs(P=0.5, A=0.5, B=0.5, C=0.5, R1=0.5, R2=0.5), fan, "A", True)
        assert action.kind is ActionKind.stay

    def test_forward_to_weakest_successor(self, fan):
        action = next_action(beliefs(P=0.9, A=0.9, B=0.4, C=0.6, R1=0.5, R2=0.5), fan, "A", True)

        assert action.kind is ActionKind.forward
        assert action.skill == "B"

    def test_forward_tie_breaks_by_order(self, fan):
        action = next_action(beliefs(P=0.9, A=0.9, B=0.5, C=0.5, R1=0.5, R2=0.5), fan, "A", True)
        assert action.skill == "B"

    def test_backward(self, fan):
        action = next_action(beliefs(P=0.7, A=0.1, B=0.5, C=0.5, R1=0.5, R2=0.5), fan, "A", False)

        assert action.kind is ActionKind.backward
        assert action.skill == "P"

    def test_remediation(self, fan):
        action = next_action(
            beliefs(P=0.5, A=0.5, B=0.5, C=0.5, R1=0.3, R2=0.7), fan, "A", False, "ten-crossing"
        )

        assert action.kind is ActionKind.remediate
        assert action.skill == "R1"

    def test_unknown_tag_falls_through(self, fan):
        action = next_action(beliefs(P=0.5, A=0.5, B=0.5, C=0.5, R1=0.3, R2=0.7), fan, "A", False, "other")
        assert action.kind is ActionKind.stay

    def test_module_complete(self, fan):
        action = next_action(beliefs(P=0.9, A=0.9, B=0.9, C=0.5, R1=0.5, R2=0.5), fan, "B", True)

        assert action.kind is ActionKind.stay
        assert action.note == "module complete"

    def test_root_has_no_precursor(self, fan):
        action = next_action(beliefs(P=0.1, A=0.5, B=0.5, C=0.5, R1=0.5, R2=0.5), fan, "P", False)
        assert action.kind is ActionKind.stay

    def test_unknown(self, fan):
        with pytest.raises(UnknownSkillError):
            next_action(beliefs(P=0.5), fan, "Z", True)


class TestWhenToStop:
    def test_mastered(self):
        assert when_to_stop([0.96, 0.97, 0.98]) is StopDecision.mastered

    def test_flat_is_wheel_spinning(self):
        assert when_to_stop([0.5] * 12) is StopDecision.wheel_spinning

    def test_too_early(self):
        assert when_to_stop([0.5] * 9) is StopDecision.continue_

    def test_rising(self):
        assert when_to_stop(list(np.linspace(0.5, 0.8, 12))) is StopDecision.continue_

    def test_forgetting_revokes_mastery(self):
        assert when_to_stop([0.96, 0.97, 0.9]) is StopDecision.continue_

    def test_empty(self):
        assert when_to_stop([]) is StopDecision.continue_

    def test_mastery_only_baseline(self):
        config = mastery_threshold_policy()

        assert config.slope_floor == float("-inf")
        assert when_to_stop([0.5] * 30, config) is StopDecision.continue_
        assert when_to_stop([0.5] * 27 + [0.96] * 3, config) is StopDecision.mastered

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            when_to_stop([1.5])


def practice(rng, spinner, truth, steps):
    learned = rng.random() < 0.5
    outcomes = list()

    for _ in range(steps):
        outcomes.append(bool(rng.random() < ((1.0 - truth.slip) if learned else truth.guess)))

        if not learned and not spinner:
            learned = rng.random() < truth.learn

    return outcomes


class TestWheelSpinning:
    truth = Parameters(slip=0.02, guess=0.25, learn=0.3, forget=0.0)

    def rates(self, rng, make_model, config=None):
        flagged = {True: list(), False: list()}

        for i in range(500):
            spinner = i % 10 == 0
            outcomes = practice(rng, spinner, self.truth, 30)
            outcome = run_stop_policy(make_model(), "A", outcomes, config)
            flagged[spinner].append(outcome.decision is StopDecision.wheel_spinning)

        return np.mean(flagged[True]), np.mean(flagged[False])

    def test_belief_model(self, rng):
        net = make_net(["A"])
        params = SkillParams(self.truth)

        tpr, fpr = self.rates(rng, lambda: BeliefModel(net, params))

        assert tpr >= 0.8
        assert fpr <= 0.1

    def test_frequency_model(self, rng):
        tpr, fpr = self.rates(rng, FrequencyModel)

        assert tpr > 0.5
        assert fpr < 0.25

    def test_baseline_never_flags(self, rng):
        tpr, fpr = self.rates(rng, FrequencyModel, mastery_threshold_policy())

        assert tpr == 0.0
        assert fpr == 0.0


class TestLearningPath:
    def test_one_skill(self):
        assert learning_path(["A"] * 5) == [PathSegment("A", 5)]

    def test_runs(self):
        trace = [("A", True), ("A", False), ("A", True), ("B", True), ("B", True)]
        assert learning_path(trace) == [("A", 3), ("B", 2)]

    def test_empty(self):
        assert learning_path([]) == []
