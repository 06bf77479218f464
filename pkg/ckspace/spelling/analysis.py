import collections

import numpy as np

from ckspace.spelling.malrule import MalRuleCategory, zero_activations
from ckspace.spelling.words import WordEntry, load_sample_tables
from ckspace.utils.text import normalize


Edit = collections.namedtuple("Edit", ["op", "position", "expected", "typed"])
Edit.__doc__ = """
Represents one step of an edit script from the target to the typed
word.

Attributes
----------
op: :class:`str`
    One of ``"substitute"``, ``"delete"``, ``"insert"`` and
    ``"transpose"``.
position: :class:`int`
    The index into the target the edit applies at.
expected: :class:`str`
    The target characters involved. Empty for insertions.
typed: :class:`str`
    The typed characters involved. Empty for deletions.
"""


def edit_script(target, typed):
    """
    Calculates a minimal edit script, allowing adjacent transpositions
    that are not edited again.

    Among scripts of equal length the backtrace prefers, at every step,
    a match over a transposition over a substitution over a deletion
    over an insertion.

    Parameters
    ----------
    target: :class:`str`
        The expected text.
    typed: :class:`str`
        The typed text.

    Returns
    -------
    List[:class:`~.Edit`]
        The edits in target order.
    """

    n, m = len(target), len(typed)
    d = np.zeros((n + 1, m + 1), dtype=int)
    d[:, 0] = np.arange(n + 1)
    d[0, :] = np.arange(m + 1)

    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if target[i - 1] == typed[j - 1] else 1
            best = min(d[i - 1, j] + 1, d[i, j - 1] + 1, d[i - 1, j - 1] + cost)

            if (
                i > 1
                and j > 1
                and target[i - 1] == typed[j - 2]
                and target[i - 2] == typed[j - 1]
                and target[i - 1] != target[i - 2]
            ):
                best = min(best, d[i - 2, j - 2] + 1)

            d[i, j] = best

    edits = list()
    i, j = n, m

    while i > 0 or j > 0:
        here = d[i, j]

        if i > 0 and j > 0 and target[i - 1] == typed[j - 1] and d[i - 1, j - 1] == here:
            i, j = i - 1, j - 1
        elif (
            i > 1
            and j > 1
            and target[i - 1] == typed[j - 2]
            and target[i - 2] == typed[j - 1]
            and target[i - 1] != target[i - 2]
            and d[i - 2, j - 2] + 1 == here
        ):
            edits.append(Edit("transpose", i - 2, target[i - 2 : i], typed[j - 2 : j]))
            i, j = i - 2, j - 2
        elif i > 0 and j > 0 and d[i - 1, j - 1] + 1 == here:
            edits.append(Edit("substitute", i - 1, target[i - 1], typed[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and d[i - 1, j] + 1 == here:
            edits.append(Edit("delete", i - 1, target[i - 1], ""))
            i -= 1
        else:
            edits.append(Edit("insert", i, "", typed[j - 1]))
            j -= 1

    edits.reverse()

    return edits


def classify_edit(edit, tables):
    """
    Assigns an edit to one mal-rule category.

    Substitutions are tested in the order case-only, look-alike letter
    and same-sound letter. Any other substitution, a neighbouring key
    included, counts as a typing error.

    Returns
    -------
    :class:`~.MalRuleCategory`
        The category.
    """

    if edit.op == "transpose":
        return MalRuleCategory.transposition
    elif edit.op == "delete":
        return MalRuleCategory.phoneme_omission
    elif edit.op == "insert":
        return MalRuleCategory.insertion

    a, b = edit.expected, edit.typed

    if a.lower() == b.lower():
        return MalRuleCategory.capitalization
    elif tables.confused(a, b):
        return MalRuleCategory.letter_confusion
    elif tables.same_sound(a, b):
        return MalRuleCategory.phoneme_grapheme_match

    return MalRuleCategory.typing


def analyze_input(target, typed, tables=None):
    """
    Counts how often each mal-rule is activated by a typed word.

    Parameters
    ----------
    target: Union[:class:`~.WordEntry`, :class:`str`]
        The word that was asked for.
    typed: :class:`str`
        The typed text. It is normalized first, so raw input with
        backspace characters is accepted.
    tables: Optional[:class:`~.SpellingTables`]
        The classification tables. Defaults to the shipped tables.

    Returns
    -------
    Dict[:class:`str`, :class:`int`]
        The activation count of every rule id. Correct input gives all
        zeros.

    Examples
    --------

    .. code-block:: python3

        >>> analyze_input("Ball", "Blal")["Transposition"]
        1
    """

    if isinstance(target, WordEntry):
        target = target.word

    tables = tables or load_sample_tables()
    counts = zero_activations()

    for edit in edit_script(normalize(target), normalize(typed)):
        counts[classify_edit(edit, tables).value] += 1

    return counts


__all__ = [
    "Edit",
    "analyze_input",
    "classify_edit",
    "edit_script",
]
