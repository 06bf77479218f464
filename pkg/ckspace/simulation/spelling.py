import collections

from ckspace.events.kind import EventKind
from ckspace.spelling.malrule import MalRuleCategory, rule_ids, zero_activations
from ckspace.spelling.words import WordEntry, load_sample_tables


_Placement = collections.namedtuple("_Placement", ["rule", "low", "high", "index", "char"])

_indels = frozenset({MalRuleCategory.phoneme_omission.value, MalRuleCategory.insertion.value})


def _apart(a, b):
    gap = max(b.low - a.high, a.low - b.high)

    # an omission next to an insertion reads as substitutions
    if a.rule in _indels and b.rule in _indels:
        return gap >= 2.5

    return gap >= 1.5


def _with_case(char, like):
    return char.upper() if like.isupper() else char


def _candidates(rule, word, tables):
    """
    Yields ``(index, choices)`` for every position the rule can apply
    to. ``choices`` are the characters that can be written there.
    """

    letters = sorted({c for row in tables.keyboard for c in row})

    for (i, c) in enumerate(word):
        lower = c.lower()

        if rule == MalRuleCategory.capitalization.value:
            swapped = c.swapcase()
            if len(swapped) == 1 and swapped != c:
                yield i, [swapped]
        elif rule == MalRuleCategory.letter_confusion.value:
            choices = [_with_case(k, c) for k in letters if k != lower and tables.confused(lower, k)]
            if choices:
                yield i, choices
        elif rule == MalRuleCategory.phoneme_grapheme_match.value:
            choices = [
                _with_case(k, c) for k in letters if tables.same_sound(lower, k) and not tables.confused(lower, k)
            ]
            if choices:
                yield i, choices
        elif rule == MalRuleCategory.typing.value:
            choices = [
                _with_case(k, c)
                for k in tables.neighbours(lower)
                if not tables.confused(lower, k) and not tables.same_sound(lower, k)
            ]
            if choices:
                yield i, choices
        elif rule == MalRuleCategory.phoneme_omission.value:
            yield i, [""]
        elif rule == MalRuleCategory.transposition.value:
            if i + 1 < len(word) and word[i] != word[i + 1]:
                yield i, [word[i + 1] + word[i]]

    if rule == MalRuleCategory.insertion.value:
        for i in range(len(word) + 1):
            yield i, letters


def _span(rule, index):
    if rule == MalRuleCategory.insertion.value:
        return index - 0.5, index - 0.5
    elif rule == MalRuleCategory.transposition.value:
        return index, index + 1

    return index, index


def render_errors(word, rates, rng, tables=None):
    """
    Writes a word the way a learner with the given mal-rule rates
    would.

    The number of activations of each rule is Poisson with mean
    ``rate * opportunities``. Activations are placed at random valid
    positions, kept apart so that input analysis attributes each one to
    its rule; an activation with no valid position left is dropped.

    Parameters
    ----------
    word: Union[:class:`~.WordEntry`, :class:`str`]
        The word.
    rates: Mapping[:class:`str`, :class:`float`]
        The rate of every rule id. Missing rules have rate 0.
    rng: :class:`numpy.random.Generator`
        The random source.
    tables: Optional[:class:`~.SpellingTables`]
        The character tables. Defaults to the shipped tables.

    Returns
    -------
    Tuple[:class:`str`, Dict[:class:`str`, :class:`int`]]
        The typed text and the activations actually placed.
    """

    entry = word if isinstance(word, WordEntry) else WordEntry(word)
    tables = tables or load_sample_tables()
    target = entry.word
    opportunities = entry.opportunities

    planned = list()
    for rule in rule_ids:
        planned.extend([rule] * int(rng.poisson(rates.get(rule, 0.0) * opportunities.get(rule, 0))))

    placements = list()

    for k in rng.permutation(len(planned)):
        rule = planned[k]
        options = list()

        for (index, choices) in _candidates(rule, target, tables):
            (low, high) = _span(rule, index)
            candidate = _Placement(rule, low, high, index, None)

            if all(_apart(candidate, p) for p in placements):
                options.append((candidate, choices))

        if not options:
            continue

        (candidate, choices) = options[rng.integers(len(options))]
        placements.append(candidate._replace(char=choices[rng.integers(len(choices))]))

    chars = list(target)
    counts = zero_activations()

    for p in sorted(placements, key=lambda p: p.low, reverse=True):
        counts[p.rule] += 1

        if p.rule == MalRuleCategory.insertion.value:
            chars.insert(p.index, p.char)
        elif p.rule == MalRuleCategory.transposition.value:
            chars[p.index : p.index + 2] = list(p.char)
        elif p.rule == MalRuleCategory.phoneme_omission.value:
            del chars[p.index]
        else:
            chars[p.index] = p.char

    return "".join(chars), counts


def render_keystrokes(target, typed, rng, duration_ms, slip=0.05, tables=None):
    """
    Renders the keystrokes that enter ``typed`` when ``target`` was
    asked for.

    A character that matches the target at its position is a
    :attr:`~.EventKind.key_input`, any other an
    :attr:`~.EventKind.invalid_input`. With probability ``slip`` per
    character a neighbouring key is hit first and erased again, which
    leaves the typed text unchanged. The word is confirmed with
    :attr:`~.EventKind.enter`.

    Returns
    -------
    List[Tuple[:class:`int`, :class:`~.EventKind`, :class:`str`]]
        ``(offset_ms, kind, char)`` triples with offsets spread over
        ``duration_ms``.
    """

    tables = tables or load_sample_tables()
    keys = list()

    for (i, c) in enumerate(typed):
        neighbours = tables.neighbours(c.lower())

        if neighbours and rng.random() < slip:
            keys.append((EventKind.invalid_input, _with_case(neighbours[rng.integers(len(neighbours))], c)))
            keys.append((EventKind.backspace, ""))

        matches = i < len(target) and target[i] == c
        keys.append((EventKind.key_input if matches else EventKind.invalid_input, c))

    keys.append((EventKind.enter, ""))

    step = duration_ms / len(keys)

    return [(int(round(step * (i + 1))), kind, char) for (i, (kind, char)) in enumerate(keys)]


__all__ = [
    "render_errors",
    "render_keystrokes",
]
