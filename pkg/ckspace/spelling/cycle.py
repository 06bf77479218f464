import collections

from ckspace.errors import ValidationError
from ckspace.utils.internal import Enum


class CyclePhase(Enum):
    """
    Represents where a word stands in the training and recap cycle.

    Attributes
    ----------
    training
        The word is trained. A correct entry moves it to recap.
    recap
        The word is repeated later. A correct entry completes it.
    done
        The word was entered correctly twice in a row.
    """

    training = "Training"
    recap = "Recap"
    done = "Done"


CycleState = collections.namedtuple(
    "CycleState",
    ["phase", "correct_count", "last_presented", "first_attempts"],
    defaults=(CyclePhase.training, 0, None, 0),
)
CycleState.__doc__ = """
Holds the cycle state of one word for one student.

Attributes
----------
phase: :class:`~.CyclePhase`
    The phase.
correct_count: :class:`int`
    The number of correct entries since the last error.
last_presented: Optional[:class:`int`]
    When the word was last presented, ``None`` if never.
first_attempts: :class:`int`
    How many of the correct entries were first attempts. Informational;
    a first attempt counts like any other correct entry.
"""


def cycle_step(state, correct, first_attempt=False, at=None):
    """
    Advances a word's cycle after an entry.

    A correct entry moves a word from training to recap and from recap
    to done; an error sends it back to training and resets the count.
    A word is therefore done after exactly two consecutive correct
    entries.

    Parameters
    ----------
    state: :class:`~.CycleState`
        The current state.
    correct: :class:`bool`
        Whether the word was entered without error.
    first_attempt: :class:`bool`
        Whether this was the first attempt at the word.
    at: Optional[:class:`int`]
        The presentation time recorded as
        :attr:`~.CycleState.last_presented`. Defaults to keeping the
        previous value.

    Returns
    -------
    :class:`~.CycleState`
        The new state.

    Raises
    ------
    :exc:`~.ValidationError`
        The word is already done.
    """

    if state.phase is CyclePhase.done:
        raise ValidationError("cannot step a word that is already done")

    last = state.last_presented if at is None else at

    if not correct:
        return CycleState(CyclePhase.training, 0, last, state.first_attempts)

    phase = CyclePhase.recap if state.phase is CyclePhase.training else CyclePhase.done

    return CycleState(phase, state.correct_count + 1, last, state.first_attempts + bool(first_attempt))


__all__ = [
    "CyclePhase",
    "CycleState",
    "cycle_step",
]
