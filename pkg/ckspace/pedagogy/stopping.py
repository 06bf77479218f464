import collections
import logging

from ckspace.config import StopPolicyConfig
from ckspace.errors import ValidationError
from ckspace.utils.internal import Enum
from ckspace.utils.math import slope


log = logging.getLogger(__name__)


class StopDecision(Enum):
    """
    Represents the verdict of the when-to-stop policy.

    Attributes
    ----------
    continue_
        Keep practicing.
    mastered
        The skill is mastered.
    wheel_spinning
        Practice does not lead anywhere and should be stopped.
    """

    continue_ = "Continue"
    mastered = "Mastered"
    wheel_spinning = "WheelSpinning"


def when_to_stop(predictions, config=None):
    """
    Decides whether to stop practicing a skill.

    The policy only looks at the predicted probabilities that the next
    answer is correct, so it works with any student model. A skill is
    mastered once the last ``consecutive`` predictions reach the mastery
    threshold. A student is wheel-spinning after ``min_attempts``
    predictions when the least-squares slope of the last ``window``
    predictions is below ``slope_floor`` while the last prediction is
    still below ``ceiling``.

    Parameters
    ----------
    predictions: Sequence[:class:`float`]
        The predictions, oldest first.
    config: Optional[:class:`~.StopPolicyConfig`]
        The thresholds.

    Returns
    -------
    :class:`~.StopDecision`
        The decision.

    Raises
    ------
    :exc:`~.ValidationError`
        A prediction lies outside ``[0, 1]``.
    """

    config = config or StopPolicyConfig()
    values = [float(p) for p in predictions]

    for p in values:
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"predictions must lie in [0, 1], got {p}")

    if len(values) >= config.consecutive and all(
        p >= config.mastery for p in values[-config.consecutive :]
    ):
        return StopDecision.mastered

    if len(values) >= config.min_attempts and values[-1] < config.ceiling:
        if slope(values[-config.window :]) < config.slope_floor:
            return StopDecision.wheel_spinning

    return StopDecision.continue_


def mastery_threshold_policy(config=None):
    """
    Returns a stop policy configuration that never detects
    wheel-spinning, leaving only the mastery rule.
    """

    return (config or StopPolicyConfig()).replace(slope_floor=float("-inf"))


StopOutcome = collections.namedtuple("StopOutcome", ["decision", "attempts", "predictions"])
StopOutcome.__doc__ = """
Holds the result of running the stop policy over an answer sequence.

Attributes
----------
decision: :class:`~.StopDecision`
    The decision that ended practice, or
    :attr:`~.StopDecision.continue_` when the answers ran out.
attempts: :class:`int`
    The number of answers consumed.
predictions: List[:class:`float`]
    The prediction after each answer.
"""


def run_stop_policy(model, skill, outcomes, config=None):
    """
    Feeds answers on one skill to a model until the stop policy ends
    practice.

    Parameters
    ----------
    model
        Any object with ``predict_correct(skill)`` and
        ``observe(skill, correct)``, such as :class:`~.BeliefModel` or
        :class:`~.FrequencyModel`.
    skill: :class:`str`
        The skill.
    outcomes: Iterable[:class:`bool`]
        The answers, oldest first.
    config: Optional[:class:`~.StopPolicyConfig`]
        The thresholds.

    Returns
    -------
    :class:`~.StopOutcome`
        The outcome.
    """

    predictions = list()
    decision = StopDecision.continue_
    attempts = 0

    for correct in outcomes:
        model.observe(skill, correct)
        attempts += 1

        predictions.append(model.predict_correct(skill))
        decision = when_to_stop(predictions, config)

        if decision is not StopDecision.continue_:
            break

    log.debug("%s: %s after %d attempt(s)", skill, decision.value, attempts)

    return StopOutcome(decision, attempts, predictions)


__all__ = [
    "StopDecision",
    "StopOutcome",
    "mastery_threshold_policy",
    "run_stop_policy",
    "when_to_stop",
]
