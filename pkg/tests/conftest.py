import numpy as np
import pytest

from ckspace.events import Event, EventKind
from ckspace.knowledge import Parameters, SkillParams, load_skill_net


def make_net(skills, edges=(), games=None, remediates=None):
    remediates = remediates or dict()

    return load_skill_net(
        {
            "skills": [
                {"id": s, "name": s.lower(), "range": "R10", "remediates": remediates.get(s, [])}
                for s in skills
            ],
            "edges": [list(e) for e in edges],
            "games": games or dict(),
        }
    )


def random_dag(rng, n=8, density=0.3):
    names = [f"s{i}" for i in range(n)]
    rng.shuffle(names)
    edges = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    ]

    return make_net(sorted(names), edges)


def random_params(rng, net):
    return SkillParams(
        Parameters(),
        {
            s: Parameters(
                slip=rng.uniform(0.05, 0.2),
                guess=rng.uniform(0.1, 0.3),
                learn=rng.uniform(0.02, 0.1),
                forget=rng.uniform(0.0, 0.03),
            )
            for s in net
        },
    )


def simulate_answers(rng, net, params, length, skills=None, start=0.5):
    """
    Draws answers from the exact generative model: learned states start
    Bernoulli(start), the answered skill is observed and then moves.
    """

    skills = list(skills or net)
    state = {s: rng.random() < start for s in net}
    answers = list()

    for _ in range(length):
        s = skills[rng.integers(len(skills))]
        p = params[s]

        correct = rng.random() < ((1.0 - p.slip) if state[s] else p.guess)
        answers.append((s, bool(correct)))

        if state[s]:
            state[s] = rng.random() >= p.forget
        elif all(state[q] for q in net.precursors(s)):
            state[s] = rng.random() < p.learn

    return answers


def answer_event(sid, t, skill, correct, sess=None, time_ms=2000):
    return Event(
        sid,
        sess,
        t,
        EventKind.answer_submitted,
        {"correct": correct, "time_ms": time_ms, "skill": skill},
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def chain():
    return make_net(["A", "B", "C"], [("A", "B"), ("B", "C")])


@pytest.fixture
def diamond():
    return make_net(["A", "B", "C", "D"], [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")])
