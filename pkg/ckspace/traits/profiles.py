import numpy as np
import pandas as pd

from ckspace.config import ControllerConfig
from ckspace.errors import ValidationError
from ckspace.events.log import answers, group_by_student
from ckspace.knowledge.model import init_beliefs, update_on_answer
from ckspace.knowledge.params import SkillParams


class StudentProfile:
    """
    Represents what is known about a student's learning trajectory.

    Parameters
    ----------
    student_id: :class:`str`
        The student.
    features: Dict[:class:`str`, :class:`float`]
        The clustering features. ``NaN`` marks a feature that could not
        be observed yet.
    passed: Optional[Dict[:class:`str`, :class:`bool`]]
        Whether each skill is passed.
    progress: Optional[List[:class:`int`]]
        The number of passed skills after each session.
    """

    __slots__ = ("student_id", "features", "passed", "progress")

    def __init__(self, student_id, features, passed=None, progress=None):
        self.student_id = student_id
        self.features = dict(features)
        self.passed = dict(passed or {})
        self.progress = list(progress or [])

    def __repr__(self):
        return f"<StudentProfile student_id={self.student_id!r} features={len(self.features)}>"


def profiles_frame(profiles):
    """
    Returns profiles as a table, one row per student indexed by student
    id, with columns sorted by name.
    """

    if isinstance(profiles, pd.DataFrame):
        return profiles.astype(float)

    profiles = list(profiles)
    frame = pd.DataFrame(
        [p.features for p in profiles],
        index=pd.Index([p.student_id for p in profiles], name="student_id"),
        dtype=float,
    )

    return frame.reindex(sorted(frame.columns), axis=1)


def _answer_seconds(event):
    return event.data.get("time_ms", np.nan) / 1000.0


def extract_profiles(sessions, net, sessions_limit=None, params=None, threshold=None):
    """
    Extracts a profile per student from sessions.

    The features are the relative position of the highest skill reached
    in the net's order, the number of passed skills, the session count,
    the overall error rate and answer time, and per practiced skill and
    per number range the error rate and the mean answer time in
    seconds. A skill is passed when its belief after replaying the
    student's answers reaches ``threshold``.

    Parameters
    ----------
    sessions: Iterable[:class:`~.Session`]
        The sessions.
    net: :class:`~.SkillNet`
        The net.
    sessions_limit: Optional[:class:`int`]
        Use only the first sessions of each student, e.g. for online
        classification after a few sessions.
    params: Optional[:class:`~.SkillParams`]
        The knowledge parameters. Defaults to the library defaults.
    threshold: Optional[:class:`float`]
        The belief at which a skill counts as passed. Defaults to
        :attr:`~.ControllerConfig.forward`.

    Returns
    -------
    List[:class:`~.StudentProfile`]
        The profiles, sorted by student id.
    """

    if sessions_limit is not None and sessions_limit < 1:
        raise ValidationError("sessions_limit must be at least 1")

    params = params or SkillParams()
    threshold = ControllerConfig.default_forward if threshold is None else threshold

    profiles = list()

    for (student, student_sessions) in group_by_student(sessions).items():
        if sessions_limit is not None:
            student_sessions = student_sessions[:sessions_limit]

        beliefs = init_beliefs(net)
        progress = list()
        rows = list()

        for session in student_sessions:
            for event in answers(session):
                skill = event.data.get("skill")
                if skill is None or skill not in net:
                    continue

                beliefs = update_on_answer(beliefs, net, params, skill, event.data["correct"])
                rows.append(
                    {
                        "skill": skill,
                        "range": net.skills[skill].number_range.value,
                        "error": 0.0 if event.data["correct"] else 1.0,
                        "seconds": _answer_seconds(event),
                    }
                )

            progress.append(sum(1 for s in net if beliefs[s] >= threshold))

        passed = {s: bool(beliefs[s] >= threshold) for s in net}
        features = {
            "sessions": float(len(student_sessions)),
            "passed_skills": float(sum(passed.values())),
        }

        data = pd.DataFrame(rows, columns=["skill", "range", "error", "seconds"])

        if data.empty:
            features.update(highest_skill=np.nan, error_rate=np.nan, answer_time=np.nan)
        else:
            features["highest_skill"] = max(net.index(s) for s in data["skill"]) / max(len(net) - 1, 1)
            features["error_rate"] = data["error"].mean()
            features["answer_time"] = data["seconds"].mean()

            for (key, group) in data.groupby("range", sort=True):
                features[f"error_rate/{key}"] = group["error"].mean()
                features[f"answer_time/{key}"] = group["seconds"].mean()

            for (key, group) in data.groupby("skill", sort=True):
                features[f"error_rate/{key}"] = group["error"].mean()
                features[f"answer_time/{key}"] = group["seconds"].mean()

        profiles.append(StudentProfile(student, features, passed, progress))

    return profiles


__all__ = [
    "StudentProfile",
    "extract_profiles",
    "profiles_frame",
]
