class CKSpaceError(Exception):
    """
    The base exception of the library.
    """


class ConfigError(CKSpaceError, ValueError):
    """
    Raised when a configuration block or document is invalid.
    """


class ValidationError(CKSpaceError, ValueError):
    """
    Raised when input data violates a documented precondition.
    """


class ParseError(ValidationError):
    """
    Raised when a file cannot be parsed.

    Attributes
    ----------
    line: Optional[:class:`int`]
        The one-based line number, when known.
    """

    def __init__(self, message, *, line=None):
        if line is not None:
            message = f"line {line}: {message}"

        super().__init__(message)
        self.line = line


class CycleError(ValidationError):
    """
    Raised when a skill net is not acyclic.

    Attributes
    ----------
    cycle: List[:class:`str`]
        One cycle, as skill ids with the first repeated at the end.
    """

    def __init__(self, cycle):
        super().__init__(f"skill net contains a cycle: {' -> '.join(cycle)}")
        self.cycle = cycle


class UnknownSkillError(CKSpaceError, KeyError):
    """
    Raised when a skill id is not part of the skill net.
    """

    def __init__(self, skill):
        super().__init__(skill)
        self.skill = skill

    def __str__(self):
        return f"unknown skill {self.skill!r}"


class ModuleComplete(CKSpaceError):
    """
    Raised by word selection when every word of the database is done.
    """


__all__ = [
    "CKSpaceError",
    "ConfigError",
    "CycleError",
    "ModuleComplete",
    "ParseError",
    "UnknownSkillError",
    "ValidationError",
]
