import collections
import importlib.resources
import logging

import numpy as np
import pandas as pd

from ckspace.errors import ParseError, ValidationError
from ckspace.events.log import answers, group_by_student
from ckspace.knowledge.skillnet import NumberRange
from ckspace.utils.internal import Enum, isinstance, read_json


log = logging.getLogger(__name__)


class FeatureKind(Enum):
    """
    Represents what a screening feature measures.

    Attributes
    ----------
    performance
        The share of correct answers.
    answer_time
        The mean base-10 logarithm of answer seconds.
    typical_mistake
        The share of answers showing a typical mistake.
    strategy
        The share of answers solved with a strategy.
    """

    performance = "P"
    answer_time = "AT"
    typical_mistake = "TM"
    strategy = "SN"


_feature_attrs = ["id", "kind", "name", "games", "ranges", "time_min", "hint", "group", "p_value"]


class ScreenFeature(collections.namedtuple("ScreenFeature", _feature_attrs, defaults=(0.0, None, None, None))):
    """
    Represents a feature that can be observed during normal training.

    Feature ids read ``KIND/name[@filter]``. The name is a game for
    :attr:`~.FeatureKind.performance` and :attr:`~.FeatureKind.answer_time`
    (``all`` for every game), a typical mistake tag or a strategy
    otherwise. The filter is a ``:``-separated list of games and number
    ranges the answers must belong to, e.g. ``TM/counting@number-race:R10``.

    Attributes
    ----------
    id: :class:`str`
        The feature id.
    kind: :class:`~.FeatureKind`
        The kind.
    name: :class:`str`
        The game, mistake tag or strategy.
    games: FrozenSet[:class:`str`]
        The games answers are taken from. Empty for every game.
    ranges: FrozenSet[:class:`str`]
        The number ranges answers are taken from. Empty for every range.
    time_min: :class:`float`
        The minutes of gameplay needed to observe the feature.
    hint: Optional[:class:`str`]
        The group the feature bank declares.
    group: Optional[:class:`int`]
        The group assigned by :func:`~.select_features`.
    p_value: Optional[:class:`float`]
        The t-test p-value assigned by :func:`~.select_features`.
    """

    __slots__ = ()

    @classmethod
    def from_id(cls, id, time_min=0.0, hint=None):
        """
        Parses a feature id.

        Raises
        ------
        :exc:`~.ParseError`
            The id does not follow the grammar.
        """

        (head, _, filter) = id.partition("@")
        (kind, _, name) = head.partition("/")

        kind = FeatureKind.from_value(kind, None)
        if kind is None or not name:
            raise ParseError(f"invalid feature id {id!r}")

        games = set()
        ranges = set()

        for part in filter.split(":") if filter else ():
            if NumberRange.from_value(part, None) is not None:
                ranges.add(part)
            elif part:
                games.add(part)
            else:
                raise ParseError(f"invalid feature id {id!r}")

        if kind in (FeatureKind.performance, FeatureKind.answer_time) and name != "all":
            games.add(name)

        return cls(id, kind, name, frozenset(games), frozenset(ranges), float(time_min), hint)

    def matches(self, event, net=None):
        """
        Returns whether an answer event counts toward the feature.
        """

        if self.games and event.data.get("game") not in self.games:
            return False

        if self.ranges:
            skill = event.data.get("skill")
            if net is None or skill not in net:
                return False

            if net.skills[skill].number_range.value not in self.ranges:
                return False

        return True

    def value(self, events, net=None):
        """
        Calculates the feature from answer events.

        Returns
        -------
        :class:`float`
            The value. ``NaN`` when no answer counts toward the feature.
        """

        matching = [e for e in events if self.matches(e, net)]
        if not matching:
            return np.nan

        if self.kind is FeatureKind.performance:
            values = [e.data["correct"] for e in matching]
        elif self.kind is FeatureKind.answer_time:
            values = [np.log10(max(e.data["time_ms"], 1) / 1000.0) for e in matching]
        elif self.kind is FeatureKind.typical_mistake:
            values = [e.data.get("mistake") == self.name for e in matching]
        else:
            values = [e.data.get("strategy") == self.name for e in matching]

        return float(np.mean(values))

    def to_dict(self):
        return {"id": self.id, "kind": self.kind.value, "time_min": self.time_min, "group_hint": self.hint}


def load_feature_bank(path=None):
    """
    Loads a feature bank.

    The document is a JSON list of ``{"id", "kind", "time_min",
    "group_hint"}`` objects.

    Parameters
    ----------
    path: Optional[Union[:class:`str`, :class:`os.PathLike`]]
        The document. ``None`` loads the shipped bank.

    Returns
    -------
    List[:class:`~.ScreenFeature`]
        The features, in document order.

    Raises
    ------
    :exc:`~.ParseError`
        An entry is malformed, its kind disagrees with its id, or an id
        is repeated.
    """

    if path is None:
        resource = importlib.resources.files("ckspace") / "data" / "feature_bank.json"

        with importlib.resources.as_file(resource) as p:
            document = read_json(p)
    else:
        try:
            document = read_json(path)
        except (ValueError) as e:
            raise ParseError(f"{path}: {e}") from e

    if not isinstance(document, list):
        raise ParseError("a feature bank is a list of features")

    bank = list()
    seen = set()

    for (i, entry) in enumerate(document, 1):
        try:
            feature = ScreenFeature.from_id(entry["id"], entry.get("time_min", 0.0), entry.get("group_hint"))
        except (KeyError, TypeError, AttributeError) as e:
            raise ParseError(f"feature {i}: malformed entry", line=None) from e

        if entry.get("kind", feature.kind.value) != feature.kind.value:
            raise ParseError(f"feature {feature.id!r}: kind {entry['kind']!r} disagrees with its id")

        if feature.time_min < 0:
            raise ParseError(f"feature {feature.id!r}: negative time")

        if feature.id in seen:
            raise ParseError(f"feature {feature.id!r} is declared twice")

        seen.add(feature.id)
        bank.append(feature)

    log.debug("loaded a feature bank of %d feature(s)", len(bank))

    return bank


def extract_screen_features(sessions, bank, net=None):
    """
    Calculates screening features from logs.

    Parameters
    ----------
    sessions: Iterable[:class:`~.Session`]
        The sessions.
    bank: Iterable[:class:`~.ScreenFeature`]
        The features.
    net: Optional[:class:`~.SkillNet`]
        The net that maps answered skills to number ranges. Features
        filtered by range are missing without it.

    Returns
    -------
    :class:`pandas.DataFrame`
        One row per student, indexed by student id, one column per
        feature. Unobserved features are ``NaN``.
    """

    bank = list(bank)
    if not bank:
        raise ValidationError("the feature bank is empty")

    rows = dict()

    for (student_id, student_sessions) in group_by_student(sessions).items():
        events = [e for s in student_sessions for e in answers(s)]
        rows[student_id] = {f.id: f.value(events, net) for f in bank}

    frame = pd.DataFrame.from_dict(rows, orient="index", columns=[f.id for f in bank], dtype=float)
    frame.index.name = "student_id"

    return frame


__all__ = [
    "FeatureKind",
    "ScreenFeature",
    "extract_screen_features",
    "load_feature_bank",
]
