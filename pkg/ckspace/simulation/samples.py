import collections
import functools
import importlib.resources
import logging

import numpy as np
import pandas as pd

from ckspace.errors import ValidationError
from ckspace.events.event import Event
from ckspace.events.kind import EventKind
from ckspace.events.log import Session
from ckspace.knowledge.skillnet import load_sample_skill_net
from ckspace.screener.features import load_feature_bank
from ckspace.simulation.population import SUBGROUP_TEMPLATES, pass_probability
from ckspace.simulation.session import day_ms
from ckspace.traits.profiles import StudentProfile
from ckspace.utils.internal import read_json


log = logging.getLogger(__name__)


ProfileSample = collections.namedtuple("ProfileSample", ["partial", "subgroups"])
ProfileSample.__doc__ = """
Represents profiles observed session by session.

Attributes
----------
partial: List[List[:class:`~.StudentProfile`]]
    For every session count, the profiles built from the sessions so
    far. The last entry holds the complete profiles.
subgroups: List[:class:`str`]
    The planted subgroup of every student.
"""

BehaviorSample = collections.namedtuple("BehaviorSample", ["sessions", "archetypes"])
BehaviorSample.__doc__ = """
Represents navigation behavior with planted archetypes.

Attributes
----------
sessions: List[:class:`~.Session`]
    The sessions, ``sessions`` per student.
archetypes: Dict[:class:`str`, :class:`str`]
    The planted archetype of every student.
"""

ScreeningSample = collections.namedtuple("ScreeningSample", ["features", "labels"])
ScreeningSample.__doc__ = """
Represents screening features with known diagnoses.

Attributes
----------
features: :class:`pandas.DataFrame`
    One row per student indexed by student id, one column per feature.
labels: :class:`numpy.ndarray`
    Whether each student has dyscalculia.
"""


_student_jitter = 0.03
_session_noise = 0.2

# rows are the current state: game, shop, performance
# fmt: off
BEHAVIOR_ARCHETYPES = {
    "focused": [
        [0.90, 0.05, 0.05],
        [0.80, 0.10, 0.10],
        [0.80, 0.10, 0.10],
    ],
    "shop-heavy": [
        [0.50, 0.45, 0.05],
        [0.35, 0.60, 0.05],
        [0.50, 0.40, 0.10],
    ],
    "navigator": [
        [0.40, 0.10, 0.50],
        [0.40, 0.10, 0.50],
        [0.35, 0.10, 0.55],
    ],
}
# fmt: on

_navigation_events = (EventKind.nav_game, EventKind.nav_shop, EventKind.nav_performance)


def _observation(template, offsets, rng, skills):
    noise = lambda: rng.normal(0.0, _session_noise)
    features = dict()

    for r in ("R10", "R100", "R1000"):
        features[f"error_rate/{r}"] = float(np.clip(template.errors[r] + offsets[f"error_rate/{r}"] + noise(), 0.0, 1.0))
        seconds = template.log_seconds[r] + offsets[f"answer_time/{r}"] + noise()
        features[f"answer_time/{r}"] = float(10.0 ** seconds)

    features["highest_skill"] = float(np.clip(template.highest_skill + offsets["highest_skill"] + noise(), 0.0, 1.0))
    share = np.clip(template.passed_share + offsets["passed_skills"] + noise(), 0.0, 1.0)
    features["passed_skills"] = float(share * skills)

    return features


def sample_profiles(n=120, sessions=6, seed=0, templates=None, net=None):
    """
    Samples student profiles from subgroup templates, as they would be
    seen after each session.

    Every student keeps a small offset from its template; every session
    adds a larger observation noise. A partial profile is the mean of
    the observations so far, so it sharpens as sessions accumulate.

    Parameters
    ----------
    n: :class:`int`
        The number of students. Students are spread evenly over the
        templates.
    sessions: :class:`int`
        The number of sessions.
    seed: :class:`int`
        The seed.
    templates: Optional[Iterable[:class:`~.SubgroupTemplate`]]
        The templates. Defaults to :data:`~.SUBGROUP_TEMPLATES`.
    net: Optional[:class:`~.SkillNet`]
        The net the passed skills are drawn for. Defaults to the sample
        net.

    Returns
    -------
    :class:`~.ProfileSample`
        The profiles and the planted subgroups.
    """

    if sessions < 1:
        raise ValidationError("need at least one session")

    templates = list(templates or SUBGROUP_TEMPLATES.values())
    net = net or load_sample_skill_net()
    rng = np.random.default_rng(seed)

    assigned = [templates[i % len(templates)] for i in range(n)]
    partial = [list() for _ in range(sessions)]

    for (i, template) in enumerate(assigned):
        student_id = f"s{i:04d}"
        names = [f"error_rate/{r}" for r in ("R10", "R100", "R1000")]
        names += [f"answer_time/{r}" for r in ("R10", "R100", "R1000")]
        names += ["highest_skill", "passed_skills"]
        offsets = {name: rng.normal(0.0, _student_jitter) for name in names}

        passed = {s: bool(rng.random() < pass_probability(template, skill)) for (s, skill) in net.skills.items()}
        total = sum(passed.values())

        observations = list()
        for s in range(sessions):
            observations.append(_observation(template, offsets, rng, len(net)))

            features = {name: float(np.mean([o[name] for o in observations])) for name in names}
            progress = [int(round(total * (k + 1) / sessions)) for k in range(s + 1)]
            partial[s].append(StudentProfile(student_id, features, passed, progress))

    log.debug("sampled %d profile(s) over %d session(s)", n, sessions)

    return ProfileSample(partial, [t.name for t in assigned])


def _navigation(matrix, length, rng, sid, sess, t0):
    state = 0
    t = t0
    events = [Event(sid, sess, t, _navigation_events[state], {})]

    for _ in range(length):
        state = int(rng.choice(3, p=matrix[state]))
        t += int(rng.integers(2000, 60000))
        events.append(Event(sid, sess, t, _navigation_events[state], {}))

    return events


def sample_behavior(archetypes=None, n=60, sessions=8, length=30, seed=0, lapse=0.15):
    """
    Samples navigation sessions from planted behavior archetypes.

    Parameters
    ----------
    archetypes: Optional[Mapping[:class:`str`, array_like]]
        The transition matrix over game, shop and performance of every
        archetype. Defaults to :data:`~.BEHAVIOR_ARCHETYPES`.
    n: :class:`int`
        The number of students, spread evenly over the archetypes.
    sessions: :class:`int`
        The number of sessions per student.
    length: :class:`int`
        The number of navigation steps per session.
    seed: :class:`int`
        The seed.
    lapse: :class:`float`
        The probability that a student behaves like a random other
        archetype in one session.

    Returns
    -------
    :class:`~.BehaviorSample`
        The sessions and the planted archetypes.
    """

    archetypes = dict(archetypes or BEHAVIOR_ARCHETYPES)
    names = list(archetypes)
    matrices = {a: np.asarray(m, dtype=float) for (a, m) in archetypes.items()}

    for (a, m) in matrices.items():
        if m.shape != (3, 3) or not np.allclose(m.sum(axis=1), 1.0):
            raise ValidationError(f"archetype {a!r} needs a row-stochastic 3x3 matrix")

    rng = np.random.default_rng(seed)
    planted = dict()
    result = list()

    for i in range(n):
        sid = f"s{i:04d}"
        planted[sid] = names[i % len(names)]

        for k in range(sessions):
            behavior = planted[sid]
            if len(names) > 1 and rng.random() < lapse:
                behavior = names[(names.index(behavior) + 1 + int(rng.integers(len(names) - 1))) % len(names)]

            events = _navigation(matrices[behavior], length, rng, sid, f"{sid}-{k}", k * day_ms)
            result.append(Session(f"{sid}-{k}", events))

    return BehaviorSample(result, planted)


@functools.lru_cache(maxsize=None)
def load_calibration():
    """
    Loads the shipped calibration of screening features: the mean,
    spread and direction of every feature kind, the correlation inside
    a feature group and the effect size of every group.
    """

    resource = importlib.resources.files("ckspace") / "data" / "calibration.json"

    with importlib.resources.as_file(resource) as path:
        return read_json(path)


def sample_screening(n=1000, dd_rate=0.25, bank=None, seed=0, calibration=None):
    """
    Samples screening features for a population with known diagnoses.

    Features of a group share one latent value per student, which
    students with dyscalculia have shifted by the group's effect size,
    so features inside a group are strongly correlated and groups are
    independent given the diagnosis.

    Parameters
    ----------
    n: :class:`int`
        The number of students.
    dd_rate: :class:`float`
        The prevalence of dyscalculia.
    bank: Optional[List[:class:`~.ScreenFeature`]]
        The features. Defaults to the shipped bank.
    seed: :class:`int`
        The seed.
    calibration: Optional[:class:`dict`]
        The calibration. Defaults to :func:`~.load_calibration`.

    Returns
    -------
    :class:`~.ScreeningSample`
        The features and the diagnoses.
    """

    bank = list(bank if bank is not None else load_feature_bank())
    calibration = calibration or load_calibration()
    rng = np.random.default_rng(seed)

    labels = rng.random(n) < dd_rate
    r = calibration["correlation"]

    groups = list(dict.fromkeys(f.hint for f in bank))
    latent = dict()
    for g in groups:
        effect = calibration["effects"].get(g, 0.0)
        latent[g] = rng.normal(0.0, 1.0, n) + effect * labels

    columns = dict()
    for f in bank:
        kind = calibration["kinds"][f.kind.value]
        z = np.sqrt(r) * latent[f.hint] + np.sqrt(1.0 - r) * rng.normal(0.0, 1.0, n)
        columns[f.id] = kind["mean"] + kind["sd"] * kind["direction"] * z

    frame = pd.DataFrame(columns, index=pd.Index([f"s{i:04d}" for i in range(n)], name="student_id"))

    return ScreeningSample(frame, labels)


__all__ = [
    "BEHAVIOR_ARCHETYPES",
    "BehaviorSample",
    "ProfileSample",
    "ScreeningSample",
    "load_calibration",
    "sample_behavior",
    "sample_profiles",
    "sample_screening",
]
