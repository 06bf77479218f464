import collections
import logging

from ckspace.config import ControllerConfig
from ckspace.errors import UnknownSkillError
from ckspace.utils.internal import Enum


log = logging.getLogger(__name__)


class ActionKind(Enum):
    """
    Represents a controller decision.

    Attributes
    ----------
    stay
        Keep training the current skill.
    forward
        Move to a successor.
    backward
        Move to a precursor.
    remediate
        Move to a remediation skill for a typical error.
    """

    stay = "Stay"
    forward = "Forward"
    backward = "Backward"
    remediate = "Remediate"


Action = collections.namedtuple("Action", ["kind", "skill", "note"], defaults=(None, ""))
Action.__doc__ = """
Represents the controller's next step.

Attributes
----------
kind: :class:`~.ActionKind`
    The decision.
skill: Optional[:class:`str`]
    The skill to train next. ``None`` for :attr:`~.ActionKind.stay`.
note: :class:`str`
    Why a move was not possible, e.g. ``"module complete"``.
"""


def _weakest(beliefs, net, candidates):
    return min(candidates, key=lambda s: (beliefs[s], net.index(s), s))


def next_action(beliefs, net, current, last_correct=None, typical_error=None, config=None):
    """
    Decides which skill to train next.

    Rules are applied in order:

    - After a wrong answer showing a typical error, remediate with the
      weakest skill tagged for that error.
    - At or above the forward threshold, move to the weakest successor.
    - Below the backward threshold, move to the weakest precursor.
    - Otherwise stay.

    Ties between equally weak skills go to the lower topological index.

    Parameters
    ----------
    beliefs: :class:`~.SkillBelief`
        The current beliefs.
    net: :class:`~.SkillNet`
        The net.
    current: :class:`str`
        The skill trained so far.
    last_correct: Optional[:class:`bool`]
        Whether the last answer was correct, ``None`` before the first.
    typical_error: Optional[:class:`str`]
        The typical-error tag the last answer matched.
    config: Optional[:class:`~.ControllerConfig`]
        The thresholds.

    Returns
    -------
    :class:`~.Action`
        The decision. A forward move from a skill without successors is
        a stay with the note ``"module complete"``.

    Raises
    ------
    :exc:`~.UnknownSkillError`
        ``current`` is not part of the net.
    """

    if current not in net:
        raise UnknownSkillError(current)

    config = config or ControllerConfig()

    if typical_error is not None and last_correct is not True:
        candidates = net.remediation_skills(typical_error)

        if candidates:
            action = Action(ActionKind.remediate, _weakest(beliefs, net, candidates))
            log.debug("%s: %r after typical error %r", current, action, typical_error)
            return action

        log.debug("%s: no remediation skill for typical error %r", current, typical_error)

    belief = beliefs[current]

    if belief >= config.forward:
        successors = net.successors(current)
        if not successors:
            return Action(ActionKind.stay, None, "module complete")

        action = Action(ActionKind.forward, _weakest(beliefs, net, successors))
    elif belief < config.backward:
        precursors = net.precursors(current)
        if not precursors:
            return Action(ActionKind.stay, None, "no precursor")

        action = Action(ActionKind.backward, _weakest(beliefs, net, precursors))
    else:
        action = Action(ActionKind.stay)

    log.debug("%s at %.3f: %r", current, belief, action)

    return action


__all__ = [
    "Action",
    "ActionKind",
    "next_action",
]
