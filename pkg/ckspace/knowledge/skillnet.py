import heapq
import importlib.resources
import logging

from ckspace.errors import CycleError, UnknownSkillError, ValidationError
from ckspace.utils.internal import Enum, read_json


log = logging.getLogger(__name__)


class NumberRange(Enum):
    """
    Represents the number range a skill is trained in.

    Attributes
    ----------
    r10
        Numbers up to 10.
    r100
        Numbers up to 100.
    r1000
        Numbers up to 1000.
    """

    r10 = "R10"
    r100 = "R100"
    r1000 = "R1000"


class RepresentationStep(Enum):
    """
    Represents a step of the four-step developmental model of number
    representations.

    Attributes
    ----------
    cardinal_magnitude
        Number as a set of objects.
    spoken_number
        Number words and counting.
    arabic_number
        Written digits.
    number_line
        Number as a position on a line.
    """

    cardinal_magnitude = "CardinalMagnitude"
    spoken_number = "SpokenNumber"
    arabic_number = "ArabicNumber"
    number_line = "NumberLine"


class Skill:
    """
    Represents a node of a :class:`~.SkillNet`.

    Attributes
    ----------
    id: :class:`str`
        The skill id, unique within its net.
    name: :class:`str`
        The display name.
    number_range: :class:`~.NumberRange`
        The number range.
    step: Optional[:class:`~.RepresentationStep`]
        The representation step. Arithmetic skills have none.
    remediates: Tuple[:class:`str`, ...]
        The typical-error tags this skill remediates.
    """

    __slots__ = ("id", "name", "number_range", "step", "remediates")

    def __init__(self, id, name, number_range, step=None, remediates=()):
        self.id = id
        self.name = name
        self.number_range = number_range
        self.step = step
        self.remediates = tuple(remediates)

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return f"<Skill id={self.id!r} number_range={self.number_range.value}>"

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return NotImplemented

        return (
            self.id == other.id
            and self.name == other.name
            and self.number_range == other.number_range
            and self.step == other.step
            and self.remediates == other.remediates
        )

    def to_dict(self):
        data = {"id": self.id, "name": self.name, "range": self.number_range.value}

        if self.step is not None:
            data["step"] = self.step.value

        if self.remediates:
            data["remediates"] = list(self.remediates)

        return data


class SkillNet:
    """
    Represents the prerequisite graph of skills. Immutable after
    construction.

    Use :func:`~.load_skill_net` to build a validated net from a
    document.


    .. container:: operations

        .. describe:: len(x)

            Returns the number of skills.

        .. describe:: s in x

            Checks whether a skill id is part of the net.

        .. describe:: iter(x)

            Returns an iterator over the skill ids in topological
            order.

    Attributes
    ----------
    skills: Dict[:class:`str`, :class:`~.Skill`]
        The skills, in topological order.
    edges: Tuple[Tuple[:class:`str`, :class:`str`], ...]
        The ``(precursor, successor)`` pairs.
    games: Dict[:class:`str`, Tuple[:class:`str`, ...]]
        The skills each game trains.
    """

    __slots__ = ("skills", "edges", "games", "_index", "_parents", "_children")

    def __init__(self, skills, edges, games):
        self.skills = skills
        self.edges = tuple(edges)
        self.games = {g: tuple(s) for (g, s) in games.items()}
        self._index = {s: i for (i, s) in enumerate(skills)}

        parents = {s: list() for s in skills}
        children = {s: list() for s in skills}

        for (a, b) in self.edges:
            parents[b].append(a)
            children[a].append(b)

        key = lambda s: (self._index[s], s)
        self._parents = {s: tuple(sorted(p, key=key)) for (s, p) in parents.items()}
        self._children = {s: tuple(sorted(c, key=key)) for (s, c) in children.items()}

    def __contains__(self, skill):
        return skill in self.skills

    def __iter__(self):
        return iter(self.skills)

    def __len__(self):
        return len(self.skills)

    def __repr__(self):
        return f"<SkillNet skills={len(self.skills)} edges={len(self.edges)} games={len(self.games)}>"

    @property
    def order(self):
        """
        The skill ids in topological order.

        :type: Tuple[:class:`str`, ...]
        """

        return tuple(self.skills)

    def index(self, skill):
        """
        Returns the topological index of a skill.

        Raises
        ------
        :exc:`~.UnknownSkillError`
            The skill is not part of the net.
        """

        try:
            return self._index[skill]
        except (KeyError) as e:
            raise UnknownSkillError(skill) from e

    def precursors(self, skill):
        """
        Returns the direct precursors of a skill, ordered by topological
        index and then id.

        Raises
        ------
        :exc:`~.UnknownSkillError`
            The skill is not part of the net.
        """

        try:
            return list(self._parents[skill])
        except (KeyError) as e:
            raise UnknownSkillError(skill) from e

    def successors(self, skill):
        """
        Returns the direct successors of a skill, ordered by topological
        index and then id.

        Raises
        ------
        :exc:`~.UnknownSkillError`
            The skill is not part of the net.
        """

        try:
            return list(self._children[skill])
        except (KeyError) as e:
            raise UnknownSkillError(skill) from e

    def remediation_skills(self, tag):
        """
        Returns the skills tagged as remediating a typical error, in
        topological order.
        """

        return [s for (s, skill) in self.skills.items() if tag in skill.remediates]

    def to_dict(self):
        return {
            "skills": [skill.to_dict() for skill in self.skills.values()],
            "edges": [list(e) for e in self.edges],
            "games": {g: list(s) for (g, s) in self.games.items()},
        }


def precursors(net, skill):
    """
    Returns the direct precursors of ``skill`` in ``net``.

    See :meth:`SkillNet.precursors`.
    """

    return net.precursors(skill)


def successors(net, skill):
    """
    Returns the direct successors of ``skill`` in ``net``.

    See :meth:`SkillNet.successors`.
    """

    return net.successors(skill)


def _find_cycle(remaining, parents):
    node = min(remaining)
    seen = list()

    while node not in seen:
        seen.append(node)
        node = min(p for p in parents[node] if p in remaining)

    cycle = seen[seen.index(node):]
    cycle.reverse()

    return [*cycle, cycle[0]]


def _topological_order(declared, edges):
    position = {s: i for (i, s) in enumerate(declared)}
    parents = {s: set() for s in declared}
    children = {s: set() for s in declared}

    for (a, b) in edges:
        parents[b].add(a)
        children[a].add(b)

    degree = {s: len(p) for (s, p) in parents.items()}
    ready = [(position[s], s) for (s, d) in degree.items() if d == 0]
    heapq.heapify(ready)

    order = list()

    while ready:
        _, s = heapq.heappop(ready)
        order.append(s)

        for c in children[s]:
            degree[c] -= 1
            if degree[c] == 0:
                heapq.heappush(ready, (position[c], c))

    if len(order) != len(declared):
        remaining = set(declared) - set(order)
        raise CycleError(_find_cycle(remaining, parents))

    return order


def load_skill_net(document):
    """
    Builds a validated :class:`~.SkillNet`.

    Parameters
    ----------
    document: Union[:class:`dict`, :class:`str`, :class:`os.PathLike`]
        The skill net document, or the path of a JSON file holding one.
        The document has the keys ``skills`` (objects with ``id``,
        ``name``, ``range``, and optionally ``step`` and
        ``remediates``), ``edges`` (``[precursor, successor]`` pairs)
        and ``games`` (game id to skill ids).

    Returns
    -------
    :class:`~.SkillNet`
        The net, with skills in topological order. Ties are broken by
        declaration order.

    Raises
    ------
    :exc:`~.CycleError`
        The edges contain a cycle.
    :exc:`~.ValidationError`
        A skill id repeats, an edge names an unknown skill, or a game
        binds no skill.

    Examples
    --------

    .. code-block:: python3

        >>> net = load_skill_net({
        ...     "skills": [{"id": "B", "name": "b", "range": "R10"},
        ...                {"id": "A", "name": "a", "range": "R10"}],
        ...     "edges": [["A", "B"]],
        ...     "games": {},
        ... })
        >>> net.order
        ('A', 'B')
    """

    if not isinstance(document, dict):
        document = read_json(document)

    skills = dict()

    for entry in document.get("skills", []):
        try:
            id = entry["id"]
            number_range = NumberRange.from_value(entry.get("range", "R10"))
            step = entry.get("step")
            step = RepresentationStep.from_value(step) if step is not None else None
        except (KeyError) as e:
            raise ValidationError(f"skill entry missing field {e.args[0]!r}") from e
        except (ValueError) as e:
            raise ValidationError(f"skill {entry.get('id')!r}: {e}") from e

        if id in skills:
            raise ValidationError(f"duplicate skill id {id!r}")

        skills[id] = Skill(id, entry.get("name", id), number_range, step, entry.get("remediates", ()))

    edges = list()
    seen = set()

    for edge in document.get("edges", []):
        if len(edge) != 2:
            raise ValidationError(f"edge {edge!r} must name two skills")

        a, b = edge

        for s in (a, b):
            if s not in skills:
                raise ValidationError(f"edge {a!r} -> {b!r} names unknown skill {s!r}")

        if a == b:
            raise CycleError([a, a])

        if (a, b) not in seen:
            seen.add((a, b))
            edges.append((a, b))

    games = dict()

    for (game, bound) in document.get("games", dict()).items():
        if not bound:
            raise ValidationError(f"game {game!r} binds no skill")

        for s in bound:
            if s not in skills:
                raise ValidationError(f"game {game!r} binds unknown skill {s!r}")

        games[game] = bound

    order = _topological_order(list(skills), edges)

    net = SkillNet({s: skills[s] for s in order}, edges, games)
    log.debug("loaded %r", net)

    return net


def load_sample_skill_net():
    """
    Loads the shipped 100-skill sample net.

    The sample net is a reconstruction: it covers three number ranges,
    the four representation steps, arithmetic skills and remediation
    skills, but it is not an authoritative curriculum.
    """

    resource = importlib.resources.files("ckspace") / "data" / "skillnet.json"

    with importlib.resources.as_file(resource) as path:
        return load_skill_net(path)


__all__ = [
    "NumberRange",
    "RepresentationStep",
    "Skill",
    "SkillNet",
    "load_sample_skill_net",
    "load_skill_net",
    "precursors",
    "successors",
]
