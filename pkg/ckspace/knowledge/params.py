import collections

from ckspace.errors import ValidationError
from ckspace.utils.internal import read_json, write_json


Parameters = collections.namedtuple(
    "Parameters", ["slip", "guess", "learn", "forget"], defaults=(0.1, 0.25, 0.1, 0.01)
)
Parameters.__doc__ = """
Holds the emission and transition probabilities of one skill.

Attributes
----------
slip: :class:`float`
    The probability of a wrong answer although the skill is learned.
guess: :class:`float`
    The probability of a correct answer although the skill is not
    learned.
learn: :class:`float`
    The probability that practice moves the skill to the learned state,
    scaled by the prerequisite gate.
forget: :class:`float`
    The probability that a learned skill is lost at a step.
"""


def check_parameters(p, *, skill=None):
    where = f" for skill {skill!r}" if skill is not None else ""

    for (name, value) in p._asdict().items():
        if not 0.0 <= value <= 1.0:
            raise ValidationError(f"{name}{where} must lie in [0, 1], got {value}")

    if p.slip >= 1.0 or p.guess >= 1.0:
        raise ValidationError(f"slip and guess{where} must be below 1")

    if p.slip + p.guess >= 1.0:
        raise ValidationError(f"slip + guess{where} must be below 1, got {p.slip + p.guess}")

    return p


class SkillParams:
    """
    Maps skills to their :class:`~.Parameters`. Skills without their own
    entry use the default.

    Parameters
    ----------
    default: Optional[:class:`~.Parameters`]
        The parameters of skills without an entry.
    per_skill: Optional[Dict[:class:`str`, :class:`~.Parameters`]]
        Per-skill parameters.


    .. container:: operations

        .. describe:: x[skill]

            Returns the parameters of a skill.

        .. describe:: x == y
        .. describe:: x != y

            Compares two :class:`~.SkillParams` objects.
    """

    __slots__ = ("default", "per_skill")

    def __init__(self, default=None, per_skill=None):
        self.default = check_parameters(default or Parameters())
        self.per_skill = {s: check_parameters(p, skill=s) for (s, p) in (per_skill or dict()).items()}

    def __getitem__(self, skill):
        return self.per_skill.get(skill, self.default)

    def __repr__(self):
        return f"<SkillParams default={tuple(self.default)} skills={len(self.per_skill)}>"

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return NotImplemented

        return self.default == other.default and self.per_skill == other.per_skill

    def replace(self, skill, **kwargs):
        """
        Returns a copy with one skill's parameters changed.
        """

        per_skill = dict(self.per_skill)
        per_skill[skill] = self[skill]._replace(**kwargs)

        return self.__class__(self.default, per_skill)

    @classmethod
    def from_config(cls, config):
        """
        Builds parameters whose default comes from a
        :class:`~.KnowledgeConfig`.
        """

        return cls(Parameters(config.slip, config.guess, config.learn, config.forget))

    def to_dict(self):
        return {
            "default": self.default._asdict(),
            "skills": {s: p._asdict() for (s, p) in sorted(self.per_skill.items())},
        }

    @classmethod
    def from_dict(cls, data):
        try:
            default = Parameters(**data.get("default", dict()))
            per_skill = {s: Parameters(**p) for (s, p) in data.get("skills", dict()).items()}
        except (TypeError) as e:
            raise ValidationError(f"invalid parameter document: {e}") from e

        return cls(default, per_skill)

    def save(self, path):
        write_json(self.to_dict(), path)

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))


__all__ = [
    "Parameters",
    "SkillParams",
]
