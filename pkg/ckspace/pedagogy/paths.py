import collections
import itertools

from ckspace.events.event import Event


PathSegment = collections.namedtuple("PathSegment", ["skill", "trials"])
PathSegment.__doc__ = """
Represents a stretch of consecutive trials on one skill.

Attributes
----------
skill: :class:`str`
    The skill.
trials: :class:`int`
    The number of trials.
"""


def _skill(item):
    if isinstance(item, str):
        return item
    elif isinstance(item, Event):
        return item.data.get("skill")

    return item[0]


def learning_path(trace):
    """
    Summarizes the path of a student through the skill net.

    Parameters
    ----------
    trace: Iterable[Union[:class:`str`, Tuple[:class:`str`, ...], :class:`~.Event`]]
        The trials in time order, as skill ids, ``(skill, correct)``
        pairs or answer events. Events without a skill are skipped.

    Returns
    -------
    List[:class:`~.PathSegment`]
        One segment per run of trials on the same skill.

    Examples
    --------

    .. code-block:: python3

        >>> learning_path(["A", "A", "A", "B", "B"])
        [PathSegment(skill='A', trials=3), PathSegment(skill='B', trials=2)]
    """

    skills = (s for s in map(_skill, trace) if s is not None)

    return [PathSegment(skill, sum(1 for _ in run)) for (skill, run) in itertools.groupby(skills)]


__all__ = [
    "PathSegment",
    "learning_path",
]
