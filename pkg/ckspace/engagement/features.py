import logging

import numpy as np
import pandas as pd

from ckspace.events.kind import EventKind, input_kinds


log = logging.getLogger(__name__)


engagement_columns = [
    "input_rate",
    "input_rate_variance",
    "answer_time",
    "help_rate",
    "minor_error",
    "time_between_repetitions",
    "inputs_between_repetitions",
    "correct",
]


def task_of(event):
    """
    Returns the id of the task an answer event belongs to: the ``task``
    payload, else the ``target`` word, else the ``skill``.
    """

    data = event.data
    return data.get("task", data.get("target", data.get("skill")))


def _steps(events):
    step = list()

    for event in events:
        step.append(event)

        if event.kind is EventKind.answer_submitted:
            yield step
            step = list()


def extract_engagement_features(events):
    """
    Extracts one engagement feature vector per task step.

    A step ends with an answer and holds every event since the previous
    answer. Repetitions are tracked across the whole input, so passing
    all events of a student links a task to its presentation in an
    earlier session.

    The columns are:

    - ``input_rate``: inputs per minute, from the task presentation (or
      the first event of the step) to the answer.
    - ``input_rate_variance``: the variance of the instantaneous input
      rate between consecutive inputs.
    - ``answer_time``: the answer time in milliseconds.
    - ``help_rate``: help calls per minute.
    - ``minor_error``: the share of earlier errors, already followed by
      a presentation of their task, that were not repeated then.
    - ``time_between_repetitions``: seconds since the task was last
      answered.
    - ``inputs_between_repetitions``: other task steps since the task
      was last answered.
    - ``correct``: 1 for a correct answer, 0 otherwise.

    Values that cannot be computed are ``NaN``; nothing is imputed.

    Parameters
    ----------
    events: Iterable[:class:`~.Event`]
        The events of a session or of a student, in time order.

    Returns
    -------
    :class:`pandas.DataFrame`
        One row per answer, with ``t``, ``task`` and the feature
        columns. Empty when there are no answers.
    """

    rows = list()
    last_seen = dict()
    open_errors = dict()
    minor = 0
    resolved = 0

    for (index, step) in enumerate(_steps(events)):
        answer = step[-1]
        task = task_of(answer)

        shown = [e for e in step if e.kind is EventKind.task_shown]
        start = shown[-1].t if shown else step[0].t
        minutes = (answer.t - start) / 60000.0

        inputs = [e.t for e in step if e.kind in input_kinds and e.t >= start]
        helps = sum(1 for e in step if e.kind is EventKind.help_call)

        if len(inputs) >= 2:
            gaps = np.diff(inputs).astype(float)
            rates = 60000.0 / np.where(gaps > 0, gaps, np.nan)
            variance = float(np.nanvar(rates)) if np.isfinite(rates).any() else np.nan
        else:
            variance = np.nan

        correct = bool(answer.data["correct"])
        minor_share = minor / resolved if resolved else np.nan

        if task in open_errors:
            del open_errors[task]
            resolved += 1
            minor += correct

        if task in last_seen:
            (t, i) = last_seen[task]
            decay = (answer.t - t) / 1000.0
            interference = index - i - 1
        else:
            decay = interference = np.nan

        rows.append(
            {
                "t": answer.t,
                "task": task,
                "input_rate": len(inputs) / minutes if minutes > 0 else np.nan,
                "input_rate_variance": variance,
                "answer_time": float(answer.data["time_ms"]),
                "help_rate": helps / minutes if minutes > 0 else (0.0 if not helps else np.nan),
                "minor_error": minor_share,
                "time_between_repetitions": decay,
                "inputs_between_repetitions": interference,
                "correct": float(correct),
            }
        )

        last_seen[task] = (answer.t, index)
        if not correct:
            open_errors[task] = index

    return pd.DataFrame(rows, columns=["t", "task", *engagement_columns])


__all__ = [
    "engagement_columns",
    "extract_engagement_features",
    "task_of",
]
