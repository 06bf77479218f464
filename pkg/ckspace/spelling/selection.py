import logging

from ckspace.errors import ModuleComplete
from ckspace.spelling.cycle import CyclePhase, CycleState
from ckspace.spelling.profile import word_error_expectation


log = logging.getLogger(__name__)


def active_group(database, states):
    """
    Returns the lowest difficulty group that still has a word that is
    not done, or ``None``.
    """

    groups = [
        w.group for w in database if states.get(w.word, CycleState()).phase is not CyclePhase.done
    ]

    return min(groups, default=None)


def selection_key(profile, word, state):
    _, ratio = word_error_expectation(profile, word)
    last = state.last_presented

    # smallest key wins
    return (-ratio, last is not None, last if last is not None else 0, word.word)


def select_next_word(profile, database, states):
    """
    Selects the word to train next.

    Words of the active group that are not done are eligible. The word
    with the highest expected errors per letter is chosen; ties go to
    the word presented least recently and then to the alphabetically
    first word.

    Parameters
    ----------
    profile: :class:`~.MalRuleProfile`
        The student's profile.
    database: Iterable[:class:`~.WordEntry`]
        The words.
    states: Mapping[:class:`str`, :class:`~.CycleState`]
        The cycle state of each word. Missing words are fresh.

    Returns
    -------
    :class:`~.WordEntry`
        The selected word.

    Raises
    ------
    :exc:`~.ModuleComplete`
        Every word is done.
    """

    database = list(database)
    group = active_group(database, states)

    if group is None:
        raise ModuleComplete("every word of the database is done")

    best = None
    best_key = None

    for word in database:
        state = states.get(word.word, CycleState())

        if word.group != group or state.phase is CyclePhase.done:
            continue

        key = selection_key(profile, word, state)

        if best is None or key < best_key:
            best, best_key = word, key

    log.debug("selected %r from group %d (ratio %.4f)", best.word, group, -best_key[0])

    return best


__all__ = [
    "active_group",
    "select_next_word",
    "selection_key",
]
