import collections
import logging

import numpy as np

from ckspace.config import SimulationConfig
from ckspace.errors import ValidationError
from ckspace.knowledge.params import Parameters, SkillParams
from ckspace.knowledge.skillnet import load_sample_skill_net
from ckspace.spelling.malrule import rule_ids


log = logging.getLogger(__name__)


_template_attrs = [
    "name",
    "description",
    "mastery",
    "representation",
    "learn",
    "errors",
    "log_seconds",
    "highest_skill",
    "passed_share",
    "dd",
]

SubgroupTemplate = collections.namedtuple("SubgroupTemplate", _template_attrs)
SubgroupTemplate.__doc__ = """
Represents a planted subgroup of learners.

Attributes
----------
name: :class:`str`
    The template id.
description: :class:`str`
    What characterizes the subgroup.
mastery: Dict[:class:`str`, :class:`float`]
    Per number range, the probability that a skill is mastered at the
    start, and the share of members that pass it.
representation: Optional[:class:`float`]
    Overrides ``mastery`` for the number representation skills of the
    lowest range.
learn: :class:`float`
    The learn probability of the members' skills.
errors: Dict[:class:`str`, :class:`float`]
    Per number range, the error rate in profiles.
log_seconds: Dict[:class:`str`, :class:`float`]
    Per number range, the mean base-10 logarithm of answer seconds.
highest_skill: :class:`float`
    The relative position of the highest skill reached.
passed_share: :class:`float`
    The share of skills passed.
dd: :class:`bool`
    Whether members have dyscalculia.
"""

# fmt: off
SUBGROUP_TEMPLATES = {
    "g1": SubgroupTemplate(
        "g1", "difficulties with basic number representation",
        {"R10": 0.35, "R100": 0.1,  "R1000": 0.02}, 0.2,  0.03,
        {"R10": 0.45, "R100": 0.65, "R1000": 0.80}, {"R10": 0.90, "R100": 1.00, "R1000": 1.10},
        0.15, 0.10, True,
    ),
    "g2": SubgroupTemplate(
        "g2", "slow progress beyond the lowest number range",
        {"R10": 0.7,  "R100": 0.2,  "R1000": 0.05}, None, 0.05,
        {"R10": 0.25, "R100": 0.55, "R1000": 0.75}, {"R10": 0.75, "R100": 0.90, "R1000": 1.00},
        0.30, 0.25, False,
    ),
    "g3": SubgroupTemplate(
        "g3", "fast but error-prone",
        {"R10": 0.85, "R100": 0.45, "R1000": 0.15}, None, 0.08,
        {"R10": 0.15, "R100": 0.35, "R1000": 0.60}, {"R10": 0.50, "R100": 0.65, "R1000": 0.80},
        0.50, 0.45, False,
    ),
    "g4": SubgroupTemplate(
        "g4", "steady, careful progress",
        {"R10": 0.9,  "R100": 0.65, "R1000": 0.3},  None, 0.1,
        {"R10": 0.12, "R100": 0.25, "R1000": 0.45}, {"R10": 0.70, "R100": 0.75, "R1000": 0.85},
        0.60, 0.60, False,
    ),
    "g5": SubgroupTemplate(
        "g5", "advanced, gaps in the highest range",
        {"R10": 0.97, "R100": 0.85, "R1000": 0.6},  None, 0.15,
        {"R10": 0.06, "R100": 0.12, "R1000": 0.25}, {"R10": 0.55, "R100": 0.60, "R1000": 0.70},
        0.80, 0.80, False,
    ),
    "g6": SubgroupTemplate(
        "g6", "passed all skills in the system",
        {"R10": 0.99, "R100": 0.98, "R1000": 0.95}, None, 0.25,
        {"R10": 0.02, "R100": 0.04, "R1000": 0.06}, {"R10": 0.40, "R100": 0.45, "R1000": 0.50},
        0.98, 0.97, False,
    ),
}
# fmt: on


def pass_probability(template, skill):
    """
    Returns the probability that a member of a subgroup passes, or
    starts out having mastered, a skill.
    """

    if template.representation is not None and skill.step is not None and skill.number_range.value == "R10":
        return template.representation

    return template.mastery[skill.number_range.value]


EngagementProcess = collections.namedtuple(
    "EngagementProcess",
    ["stay_focused", "stay_unfocused", "stay_receptive", "stay_unreceptive"],
    defaults=(0.9, 0.6, 0.92, 0.7),
)
EngagementProcess.__doc__ = """
Represents the two Markov chains that switch a learner between being
focused or not and receptive or not. Each value is the probability of
keeping the current state for another step.
"""


def _stationary(stay, stay_other):
    # share of time spent in the first state
    return (1.0 - stay_other) / ((1.0 - stay) + (1.0 - stay_other))


class SyntheticStudent:
    """
    Represents a simulated learner and its hidden state.

    Attributes
    ----------
    student_id: :class:`str`
        The student.
    subgroup: :class:`str`
        The template the student was drawn from.
    dd: :class:`bool`
        Whether the student has dyscalculia. Slows answers and lowers
        accuracy in number comparison.
    params: :class:`~.SkillParams`
        The true slip, guess, learn and forget probability of every
        skill.
    learned: Dict[:class:`str`, :class:`bool`]
        The true knowledge state. Changes as the student practices.
    wheel_spin: FrozenSet[:class:`str`]
        The skills the student can never learn.
    engagement: :class:`~.EngagementProcess`
        The engagement dynamics.
    focused: :class:`bool`
        The current focused state.
    receptive: :class:`bool`
        The current receptive state.
    mal_rates: Dict[:class:`str`, :class:`float`]
        The true spelling error rate of every mal-rule.
    log_seconds: Dict[:class:`str`, :class:`float`]
        Per number range, the mean natural logarithm of the answer time
        in milliseconds.
    time_sigma: :class:`float`
        The standard deviation of the log answer time.
    """

    __slots__ = (
        "student_id",
        "subgroup",
        "dd",
        "params",
        "learned",
        "wheel_spin",
        "engagement",
        "focused",
        "receptive",
        "mal_rates",
        "log_seconds",
        "time_sigma",
    )

    def __init__(
        self,
        student_id,
        subgroup,
        dd,
        params,
        learned,
        wheel_spin=frozenset(),
        engagement=None,
        mal_rates=None,
        log_seconds=None,
        time_sigma=0.3,
    ):
        self.student_id = student_id
        self.subgroup = subgroup
        self.dd = dd
        self.params = params
        self.learned = dict(learned)
        self.wheel_spin = frozenset(wheel_spin)
        self.engagement = engagement or EngagementProcess()
        self.focused = True
        self.receptive = True
        self.mal_rates = {r: 0.0 for r in rule_ids}
        self.mal_rates.update(mal_rates or {})
        self.log_seconds = dict(log_seconds or {"R10": 8.0, "R100": 8.3, "R1000": 8.6})
        self.time_sigma = time_sigma

        for (rule, rate) in self.mal_rates.items():
            if rate < 0:
                raise ValidationError(f"mal-rule rate of {rule!r} must be non-negative")

    def __repr__(self):
        return f"<SyntheticStudent student_id={self.student_id!r} subgroup={self.subgroup!r} dd={self.dd}>"

    def reset_engagement(self, rng):
        e = self.engagement
        self.focused = bool(rng.random() < _stationary(e.stay_focused, e.stay_unfocused))
        self.receptive = bool(rng.random() < _stationary(e.stay_receptive, e.stay_unreceptive))

    def step_engagement(self, rng):
        e = self.engagement
        stay = e.stay_focused if self.focused else e.stay_unfocused
        if rng.random() >= stay:
            self.focused = not self.focused

        stay = e.stay_receptive if self.receptive else e.stay_unreceptive
        if rng.random() >= stay:
            self.receptive = not self.receptive

    def to_dict(self):
        return {
            "sid": self.student_id,
            "subgroup": self.subgroup,
            "dd": self.dd,
            "wheel_spin": sorted(self.wheel_spin),
            "mal_rates": self.mal_rates,
            "params": self.params.to_dict(),
        }


def _student(student_id, template, dd, rng, net, config):
    per_skill = dict()
    learned = dict()
    wheel_spin = set()

    for (skill_id, skill) in net.skills.items():
        learn = float(np.clip(template.learn * rng.lognormal(0.0, 0.2), 0.0, 1.0))

        if rng.random() < config.wheel_spin_rate:
            wheel_spin.add(skill_id)
            learn = 0.0

        slip = float(rng.uniform(0.03, 0.12))
        if dd and skill.step is not None:
            slip = min(slip + 0.15, 0.45)

        per_skill[skill_id] = Parameters(slip, float(rng.uniform(0.1, 0.3)), learn, float(rng.uniform(0.0, 0.01)))
        learned[skill_id] = bool(rng.random() < pass_probability(template, skill)) and skill_id not in wheel_spin

    shift = 0.3 if dd else 0.0
    log_seconds = {
        r: (value + shift) * np.log(10.0) + np.log(1000.0) for (r, value) in template.log_seconds.items()
    }
    mal_rates = {r: float(rng.uniform(0.02, 0.04)) for r in rule_ids}

    return SyntheticStudent(
        student_id,
        template.name,
        dd,
        SkillParams(Parameters(), per_skill),
        learned,
        wheel_spin,
        mal_rates=mal_rates,
        log_seconds=log_seconds,
    )


def generate_population(config=None, seed=0, net=None):
    """
    Draws a population of synthetic students.

    Every student gets a seed of its own derived from ``seed``, so a
    student's draws do not depend on the population size.

    Parameters
    ----------
    config: Optional[:class:`~.SimulationConfig`]
        The size, subgroup mixture and prevalences.
    seed: :class:`int`
        The seed.
    net: Optional[:class:`~.SkillNet`]
        The net. Defaults to the sample net.

    Returns
    -------
    List[:class:`~.SyntheticStudent`]
        The students, with ids ``s0000``, ``s0001`` and so on.

    Raises
    ------
    :exc:`~.ValidationError`
        The mixture names an unknown subgroup template.
    """

    config = config or SimulationConfig()
    net = net or load_sample_skill_net()

    unknown = sorted(set(config.mixture) - set(SUBGROUP_TEMPLATES))
    if unknown:
        raise ValidationError(f"unknown subgroup template(s): {', '.join(unknown)}")

    names = sorted(config.mixture)
    weights = np.array([config.mixture[n] for n in names])
    weights = weights / weights.sum()

    students = list()

    for (i, child) in enumerate(np.random.SeedSequence(seed).spawn(config.size)):
        rng = np.random.default_rng(child)

        template = SUBGROUP_TEMPLATES[names[rng.choice(len(names), p=weights)]]
        dd = template.dd or bool(rng.random() < config.dd_rate)

        students.append(_student(f"s{i:04d}", template, dd, rng, net, config))

    log.info("generated %d synthetic student(s)", len(students))

    return students


__all__ = [
    "EngagementProcess",
    "SUBGROUP_TEMPLATES",
    "SubgroupTemplate",
    "SyntheticStudent",
    "generate_population",
    "pass_probability",
]
