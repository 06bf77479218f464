import numpy as np
import pytest

from ckspace.config import KnowledgeConfig
from ckspace.errors import UnknownSkillError, ValidationError
from ckspace.knowledge import (
    Parameters,
    SkillBelief,
    SkillParams,
    advance,
    exact_infer,
    fit_params,
    init_beliefs,
    load_sample_skill_net,
    observe_answer,
    predict_correct,
    prediction_auc,
    trace_predictions,
    update_on_answer,
)

from conftest import make_net, random_dag, random_params, simulate_answers


class TestBeliefs:
    def test_init(self, chain):
        assert dict(init_beliefs(chain)) == {"A": 0.5, "B": 0.5, "C": 0.5}

    def test_init_empty(self):
        assert len(init_beliefs(make_net([]))) == 0

    def test_init_sample(self):
        beliefs = init_beliefs(load_sample_skill_net())

        assert len(beliefs) == 100
        assert set(beliefs.values()) == {0.5}

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            SkillBelief({"A": 1.5})

    def test_frame(self, chain):
        frame = init_beliefs(chain).to_frame()

        assert list(frame.columns) == ["skill_id", "p_learned"]
        assert list(frame["skill_id"]) == ["A", "B", "C"]


class TestPredict:
    @pytest.mark.parametrize(
        "p, params, expected",
        [
            (1.0, Parameters(slip=0.1), 0.9),
            (0.0, Parameters(guess=0.2), 0.2),
            (0.5, Parameters(slip=0.1, guess=0.2), 0.55),
        ],
    )
    def test_values(self, p, params, expected):
        assert predict_correct(p, params) == pytest.approx(expected)

    def test_monotone(self):
        params = Parameters(slip=0.15, guess=0.3)
        values = [predict_correct(p, params) for p in np.linspace(0.0, 1.0, 101)]

        assert all(b > a for (a, b) in zip(values, values[1:]))


class TestUpdate:
    def test_isolated_skill(self):
        net = make_net(["A"])
        params = SkillParams(Parameters(slip=0.1, guess=0.2, learn=0.1, forget=0.0))

        beliefs = update_on_answer(init_beliefs(net), net, params, "A", True)

        assert beliefs["A"] == pytest.approx(0.8364, abs=1e-4)

    def test_noiseless(self):
        net = make_net(["A"])
        params = SkillParams(Parameters(slip=0.0, guess=0.0, learn=0.0, forget=0.0))

        assert update_on_answer(init_beliefs(net), net, params, "A", True)["A"] == 1.0

    def test_unknown_skill(self, chain):
        with pytest.raises(UnknownSkillError):
            update_on_answer(init_beliefs(chain), chain, SkillParams(), "Z", True)

    def test_observation_is_monotone(self, rng):
        for _ in range(50):
            net = random_dag(rng)
            params = random_params(rng, net)
            beliefs = init_beliefs(net)

            for (skill, correct) in simulate_answers(rng, net, params, 40):
                before = beliefs[skill]
                after = observe_answer(beliefs, net, params, skill, correct)

                if correct:
                    assert after[skill] >= before - 1e-12
                else:
                    assert after[skill] <= before + 1e-12

                beliefs = update_on_answer(beliefs, net, params, skill, correct)
                assert all(0.0 <= v <= 1.0 for v in beliefs.values())

    def test_forgetting_follows_observation(self):
        net = make_net(["A"])
        params = SkillParams(Parameters(slip=0.1, guess=0.2, learn=0.0, forget=0.01))
        beliefs = SkillBelief({"A": 0.99})

        observed = observe_answer(beliefs, net, params, "A", True)
        updated = update_on_answer(beliefs, net, params, "A", True)

        assert observed["A"] >= 0.99
        assert updated["A"] == pytest.approx(observed["A"] * 0.99)
        assert updated["A"] < 0.99

    def test_observation_without_time(self):
        net = make_net(["A"])
        params = SkillParams(Parameters(slip=0.1, guess=0.2, learn=0.1, forget=0.0))

        assert observe_answer(init_beliefs(net), net, params, "A", True)["A"] == pytest.approx(0.8182, abs=1e-4)

    def test_evidence_reaches_precursor(self, chain):
        params = SkillParams(Parameters(slip=0.1, guess=0.2, learn=0.3, forget=0.0))
        beliefs = init_beliefs(chain)

        # learning B couples it to A; later evidence on B moves A
        for _ in range(3):
            beliefs = update_on_answer(beliefs, chain, params, "B", True)

        assert beliefs.links[("A", "B")] > 0.0

        after = update_on_answer(beliefs, chain, params, "B", False)
        assert after["A"] < beliefs["A"]


class TestExact:
    def test_matches_factored_without_edges(self, rng):
        for _ in range(20):
            net = make_net([f"s{i}" for i in range(5)])
            params = random_params(rng, net)
            answers = simulate_answers(rng, net, params, 50)

            _, factored = trace_predictions(answers, net, params)
            exact = exact_infer(net, params, answers)

            for s in net:
                assert factored[s] == pytest.approx(exact[s], abs=1e-12)

    def test_independent_product(self):
        net = make_net(["A", "B"])
        params = SkillParams(Parameters(slip=0.1, guess=0.2, learn=0.1, forget=0.0))
        answers = [("A", True), ("B", False), ("A", True)]

        joint = exact_infer(net, params, answers)
        a = exact_infer(make_net(["A"]), params, [x for x in answers if x[0] == "A"])
        b = exact_infer(make_net(["B"]), params, [x for x in answers if x[0] == "B"])

        assert joint["A"] == pytest.approx(a["A"], abs=1e-12)
        assert joint["B"] == pytest.approx(b["B"], abs=1e-12)

    def test_too_large(self):
        net = make_net([f"s{i:02d}" for i in range(13)])

        with pytest.raises(ValidationError, match="update_on_answer"):
            exact_infer(net, SkillParams(), [])

    def test_oracle_agreement(self, rng):
        gaps = list()

        for _ in range(100):
            net = random_dag(rng, n=8, density=0.3)
            params = random_params(rng, net)
            answers = simulate_answers(rng, net, params, 50)

            _, factored = trace_predictions(answers, net, params)
            exact = exact_infer(net, params, answers)

            gaps.extend(abs(factored[s] - exact[s]) for s in net)

        assert np.mean(gaps) <= 0.05


class TestAdvance:
    def test_decays_to_fixed_point(self):
        net = make_net(["A"])
        params = SkillParams(Parameters(learn=0.1, forget=0.05))
        beliefs = SkillBelief({"A": 0.99})

        beliefs = advance(beliefs, net, params, steps=500)

        assert beliefs["A"] == pytest.approx(0.1 / 0.15, abs=1e-6)

    def test_closed_gate(self, chain):
        params = SkillParams(Parameters(learn=0.2, forget=0.0))
        beliefs = SkillBelief({"A": 0.0, "B": 0.0, "C": 0.0})

        beliefs = advance(beliefs, chain, params, steps=10)

        assert beliefs["A"] == pytest.approx(1.0 - 0.8 ** 10)
        assert beliefs["A"] > beliefs["B"] > beliefs["C"] >= 0.0
