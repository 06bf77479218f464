import logging

import numpy as np
import pandas as pd

from ckspace.errors import ValidationError
from ckspace.events.log import answers, group_by_student
from ckspace.knowledge.model import init_beliefs, update_on_answer
from ckspace.knowledge.params import SkillParams
from ckspace.knowledge.skillnet import NumberRange
from ckspace.pedagogy.paths import learning_path
from ckspace.temporal.clustering import temporal_pipeline
from ckspace.utils.internal import Enum


log = logging.getLogger(__name__)


class ReportKind(Enum):
    """
    Represents a report that can be built from logs.

    Attributes
    ----------
    error_prob
        The share of wrong answers in every session.
    range_progress
        The highest number range practiced in every session.
    skill_status
        The belief in every skill and whether it is learned.
    path
        The path of every student through the skills.
    ribbons
        The temporally coherent behavior clusters.
    overview
        Learning time, session count and current module of every
        student.
    """

    error_prob = "error-prob"
    range_progress = "range-progress"
    skill_status = "skill-status"
    path = "path"
    ribbons = "ribbons"
    overview = "overview"


_ranges = [r.value for r in NumberRange]


def error_probability(sessions):
    """
    Returns the share of wrong answers in every session with answers.

    Columns are ``student_id``, ``session_id``, ``t`` (the session
    start) and ``error_probability``.
    """

    rows = list()

    for (student, student_sessions) in group_by_student(sessions).items():
        for session in student_sessions:
            outcomes = [e.data["correct"] for e in answers(session)]
            if outcomes:
                rows.append((student, session.session_id, session.start, 1.0 - float(np.mean(outcomes))))

    return pd.DataFrame(rows, columns=["student_id", "session_id", "t", "error_probability"])


def range_progress(sessions, net):
    """
    Returns the highest number range practiced in every session.

    Columns are ``student_id``, ``session_id``, ``t``, ``range`` and
    ``range_index``, the position of the range from lowest to highest.
    Sessions without answers on skills of the net are skipped.
    """

    rows = list()

    for (student, student_sessions) in group_by_student(sessions).items():
        for session in student_sessions:
            indices = [
                _ranges.index(net.skills[s].number_range.value)
                for s in (e.data.get("skill") for e in answers(session))
                if s in net
            ]

            if indices:
                top = max(indices)
                rows.append((student, session.session_id, session.start, _ranges[top], top))

    return pd.DataFrame(rows, columns=["student_id", "session_id", "t", "range", "range_index"])


def skill_status(sessions, net, params=None, threshold=0.85):
    """
    Returns the belief in every skill of the net after replaying each
    student's answers.

    Columns are ``student_id``, ``skill_id``, ``p_learned`` and
    ``learned``, which holds at ``threshold``. Skills appear in the
    net's order.
    """

    params = params or SkillParams()
    rows = list()

    for (student, student_sessions) in group_by_student(sessions).items():
        beliefs = init_beliefs(net)

        for session in student_sessions:
            for event in answers(session):
                skill = event.data.get("skill")
                if skill in net:
                    beliefs = update_on_answer(beliefs, net, params, skill, event.data["correct"])

        for skill in net.order:
            rows.append((student, skill, float(beliefs[skill]), bool(beliefs[skill] >= threshold)))

    return pd.DataFrame(rows, columns=["student_id", "skill_id", "p_learned", "learned"])


def path_report(sessions):
    """
    Returns the learning path of every student, one row per segment of
    consecutive trials on a skill.

    Columns are ``student_id``, ``segment``, ``skill`` and ``trials``.
    """

    rows = list()

    for (student, student_sessions) in group_by_student(sessions).items():
        events = [e for s in student_sessions for e in answers(s)]

        for (i, segment) in enumerate(learning_path(events)):
            rows.append((student, i, segment.skill, segment.trials))

    return pd.DataFrame(rows, columns=["student_id", "segment", "skill", "trials"])


def overview(sessions):
    """
    Returns the class overview.

    Columns are ``student_id``, ``sessions``, ``minutes`` (the summed
    session durations), ``answers`` and ``current``, the skill or word
    of the last answer.
    """

    rows = list()

    for (student, student_sessions) in group_by_student(sessions).items():
        events = [e for s in student_sessions for e in answers(s)]
        current = ""
        if events:
            current = events[-1].data.get("skill") or events[-1].data.get("target") or ""

        minutes = sum(s.duration for s in student_sessions) / 60000.0
        rows.append((student, len(student_sessions), minutes, len(events), current))

    return pd.DataFrame(rows, columns=["student_id", "sessions", "minutes", "answers", "current"])


def build_report(kind, sessions, net=None, params=None, temporal=None, seed=0):
    """
    Builds a report.

    Parameters
    ----------
    kind: Union[:class:`~.ReportKind`, :class:`str`]
        The report.
    sessions: List[:class:`~.Session`]
        The sessions.
    net: Optional[:class:`~.SkillNet`]
        The net. Required by :attr:`~.ReportKind.range_progress` and
        :attr:`~.ReportKind.skill_status`.
    params: Optional[:class:`~.SkillParams`]
        The knowledge parameters of :attr:`~.ReportKind.skill_status`.
    temporal: Optional[:class:`~.TemporalConfig`]
        The settings of :attr:`~.ReportKind.ribbons`.
    seed: :class:`int`
        The clustering seed of :attr:`~.ReportKind.ribbons`.

    Returns
    -------
    :class:`pandas.DataFrame`
        The report, ready to be written as CSV.

    Raises
    ------
    :exc:`~.ValidationError`
        The kind is unknown, or the report needs a net.
    """

    if isinstance(kind, str):
        kinds = ", ".join(k.value for k in ReportKind)
        kind = ReportKind.from_value(kind, None)

        if kind is None:
            raise ValidationError(f"unknown report kind, expected one of {kinds}")

    sessions = list(sessions)

    if kind in (ReportKind.range_progress, ReportKind.skill_status) and net is None:
        raise ValidationError(f"the {kind.value} report needs a skill net")

    if kind is ReportKind.error_prob:
        report = error_probability(sessions)
    elif kind is ReportKind.range_progress:
        report = range_progress(sessions, net)
    elif kind is ReportKind.skill_status:
        report = skill_status(sessions, net, params)
    elif kind is ReportKind.path:
        report = path_report(sessions)
    elif kind is ReportKind.ribbons:
        report = temporal_pipeline(sessions, temporal, seed).ribbons
    else:
        report = overview(sessions)

    log.info("built the %s report: %d row(s)", kind.value, len(report))

    return report


__all__ = [
    "ReportKind",
    "build_report",
    "error_probability",
    "overview",
    "path_report",
    "range_progress",
    "skill_status",
]
