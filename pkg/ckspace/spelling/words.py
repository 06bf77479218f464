import functools
import importlib.resources
import itertools
import logging

from ckspace.errors import ValidationError
from ckspace.spelling.malrule import MalRuleCategory, rule_ids
from ckspace.utils.internal import read_json
from ckspace.utils.text import letters, normalize


log = logging.getLogger(__name__)


class WordEntry:
    """
    Represents a word of the training database.

    Parameters
    ----------
    word: :class:`str`
        The target spelling.
    graphemes: Optional[List[:class:`str`]]
        The grapheme decomposition. Defaults to one grapheme per
        letter.
    group: :class:`int`
        The difficulty group. Lower groups are trained first.

    Raises
    ------
    :exc:`~.ValidationError`
        The word is empty, or the graphemes do not spell it.


    .. container:: operations

        .. describe:: len(x)

            Returns the number of characters.
    """

    __slots__ = ("word", "graphemes", "group", "_opportunities")

    def __init__(self, word, graphemes=None, group=1):
        word = normalize(word)

        if not word:
            raise ValidationError("words must have at least one letter")

        graphemes = tuple(graphemes) if graphemes is not None else tuple(word)

        if "".join(graphemes) != word:
            raise ValidationError(f"graphemes {list(graphemes)!r} do not spell {word!r}")

        self.word = word
        self.graphemes = graphemes
        self.group = int(group)

        n = len(word)
        opportunities = {r: n for r in rule_ids}
        opportunities[MalRuleCategory.capitalization.value] = letters(word)
        opportunities[MalRuleCategory.transposition.value] = n - 1
        self._opportunities = opportunities

    def __len__(self):
        return len(self.word)

    def __hash__(self):
        return hash(self.word)

    def __repr__(self):
        return f"<WordEntry word={self.word!r} group={self.group}>"

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return NotImplemented

        return (self.word, self.graphemes, self.group) == (other.word, other.graphemes, other.group)

    @property
    def opportunities(self):
        """
        The number of positions each mal-rule can apply to: the cased
        letters for capitalization, the neighbouring pairs for
        transposition and the letters for every other rule.

        :type: Dict[:class:`str`, :class:`int`]
        """

        return dict(self._opportunities)

    def to_dict(self):
        return {"word": self.word, "graphemes": list(self.graphemes), "group": self.group}


class SpellingTables:
    """
    Holds the character tables input analysis classifies substitutions
    with.

    Parameters
    ----------
    confusions: Iterable[Tuple[:class:`str`, :class:`str`]]
        Letter pairs that look alike.
    graphemes: Iterable[Iterable[:class:`str`]]
        Groups of letters that can write the same sound.
    keyboard: Iterable[:class:`str`]
        The letter rows of the keyboard, top to bottom.

    Raises
    ------
    :exc:`~.ValidationError`
        A pair is both a confusion and a grapheme pair.
    """

    __slots__ = ("confusions", "graphemes", "keyboard", "_adjacent")

    # horizontal offset of each row, in keys
    _stagger = (0.0, 0.25, 0.75)

    def __init__(self, confusions=(), graphemes=(), keyboard=()):
        self.confusions = frozenset(frozenset(c.lower() for c in pair) for pair in confusions)
        self.graphemes = tuple(frozenset(c.lower() for c in group) for group in graphemes)
        self.keyboard = tuple(keyboard)

        shared = self.confusions & {
            frozenset(pair) for group in self.graphemes for pair in itertools.combinations(group, 2)
        }
        if shared:
            pairs = ", ".join("/".join(sorted(p)) for p in sorted(shared, key=sorted))
            raise ValidationError(f"pairs listed as both confusion and grapheme pairs: {pairs}")

        positions = dict()
        for (row, keys) in enumerate(self.keyboard):
            offset = self._stagger[row] if row < len(self._stagger) else self._stagger[-1]
            for (i, key) in enumerate(keys):
                positions[key] = (row, i + offset)

        adjacent = set()
        for ((a, (ra, xa)), (b, (rb, xb))) in itertools.combinations(positions.items(), 2):
            if (ra == rb and abs(xa - xb) == 1.0) or (abs(ra - rb) == 1 and abs(xa - xb) <= 1.0):
                adjacent.add(frozenset((a, b)))

        self._adjacent = frozenset(adjacent)

    def __repr__(self):
        return (
            f"<SpellingTables confusions={len(self.confusions)} graphemes={len(self.graphemes)} "
            f"rows={len(self.keyboard)}>"
        )

    def confused(self, a, b):
        return frozenset((a.lower(), b.lower())) in self.confusions

    def same_sound(self, a, b):
        a, b = a.lower(), b.lower()
        return a != b and any(a in group and b in group for group in self.graphemes)

    def adjacent(self, a, b):
        return frozenset((a.lower(), b.lower())) in self._adjacent

    def neighbours(self, key):
        """
        Returns the keys next to ``key``, sorted.
        """

        key = key.lower()
        return sorted(k for pair in self._adjacent if key in pair for k in pair if k != key)

    def to_dict(self):
        return {
            "confusions": sorted(sorted(p) for p in self.confusions),
            "graphemes": [sorted(g) for g in self.graphemes],
            "keyboard": list(self.keyboard),
        }


def load_word_database(document):
    """
    Loads a word database.

    Parameters
    ----------
    document: Union[:class:`list`, :class:`str`, :class:`os.PathLike`]
        A list of ``{"word", "graphemes", "group"}`` objects, or the
        path of a JSON file holding one.

    Returns
    -------
    List[:class:`~.WordEntry`]
        The words, ordered by group and then word.

    Raises
    ------
    :exc:`~.ValidationError`
        An entry is invalid or a word repeats.
    """

    if not isinstance(document, list):
        document = read_json(document)

    words = dict()

    for entry in document:
        try:
            word = WordEntry(entry["word"], entry.get("graphemes"), entry.get("group", 1))
        except (KeyError) as e:
            raise ValidationError(f"word entry missing field {e.args[0]!r}") from e

        if word.word in words:
            raise ValidationError(f"duplicate word {word.word!r}")

        words[word.word] = word

    database = sorted(words.values(), key=lambda w: (w.group, w.word))
    log.debug("loaded %d word(s) in %d group(s)", len(database), len({w.group for w in database}))

    return database


def load_spelling_tables(document):
    """
    Loads spelling tables from a ``{"confusions", "graphemes",
    "keyboard"}`` object or the path of a JSON file holding one.
    """

    if not isinstance(document, dict):
        document = read_json(document)

    return SpellingTables(
        document.get("confusions", ()),
        document.get("graphemes", ()),
        document.get("keyboard", ()),
    )


def _resource(name):
    resource = importlib.resources.files("ckspace") / "data" / name

    with importlib.resources.as_file(resource) as path:
        return read_json(path)


def load_sample_words():
    """
    Loads the shipped German word database.
    """

    return load_word_database(_resource("words.json"))


@functools.lru_cache(maxsize=None)
def load_sample_tables():
    """
    Loads the shipped spelling tables: look-alike letters, German
    grapheme alternatives and the QWERTZ layout.
    """

    return load_spelling_tables(_resource("spelling_tables.json"))


__all__ = [
    "SpellingTables",
    "WordEntry",
    "load_sample_tables",
    "load_sample_words",
    "load_spelling_tables",
    "load_word_database",
]
