import abc
import copy
import collections
import logging
import operator
import re
import textwrap

from ckspace.errors import ConfigError
from ckspace.utils.internal import get_type_doc, isinstance, read_json


_builtins_property = property

log = logging.getLogger(__name__)


_option_attrs = ["type", "default", "doc"]

option = collections.namedtuple("option", _option_attrs, defaults=(None,))
option.__doc__ = """
Registers an option on a :class:`~.Config`.

Parameters
----------
type: Type[Any]
    The value type. Generic aliases such as ``Dict[str, float]`` are
    checked element by element.
default: Any
    The default value for the option. This can be accessed as
    ``default_*`` on the class.
doc: Optional[:class:`str`]
    The option's documentation.

Examples
--------

.. code-block:: python3

    class StopPolicyConfig(Config):
        mastery = option(float, 0.95, "The mastery threshold.")
"""

_option = collections.namedtuple("_option", ["name", *_option_attrs])


class ConfigMeta(abc.ABCMeta):
    def __new__(cls_meta, cls_name, cls_bases, cls_attrs, **kwargs):
        options = list()
        slots = list(cls_attrs.get("__slots__", []))

        for (attr_name, attr_value) in cls_attrs.copy().items():
            if isinstance(attr_value, option):
                o = _option(attr_name, *attr_value)

                if not o.doc:
                    o = o._replace(doc=f"The {o.name.replace('_', ' ')}.")

                options.append(o)
                slots.append(f"_{o.name}")

                cls_attrs[f"default_{o.name}"] = o.default

                descriptor = _builtins_property(operator.attrgetter(f"_{o.name}"))
                descriptor.__doc__ = f"{o.doc}\n\n:type: {get_type_doc(o.type)}"

                cls_attrs[o.name] = descriptor

        for cls_base in cls_bases:
            try:
                options.extend(cls_base.__config_options__)
            except (AttributeError) as e:
                pass

        options.sort(key=lambda o: o.name)

        cls_attrs["__config_options__"] = tuple(options)
        cls_attrs["__slots__"] = tuple(sorted(set(slots)))

        parameters_doc = "Parameters\n----------\n"

        for o in options:
            parameters_doc += (
                f"{o.name}: {get_type_doc(o.type, optional=False)}\n"
                f"    {o.doc} Defaults to ``{o.default!r}``.\n"
            )

        cls_doc = cls_attrs.get("__doc__")
        if cls_doc:
            match = re.search(r"\n( *)\|parameters\|\n", cls_doc)
            if match:
                cls_doc = cls_doc.replace(
                    " " * len(match.group(1)) + "|parameters|",
                    textwrap.indent(parameters_doc, " " * len(match.group(1))),
                )
            else:
                cls_doc += "\n\n\n" + textwrap.indent(parameters_doc, "    ")
        else:
            cls_doc = parameters_doc

        cls_attrs["__doc__"] = cls_doc

        return super().__new__(cls_meta, cls_name, cls_bases, cls_attrs, **kwargs)


class Config(metaclass=ConfigMeta):
    """
    Represents the base class for a configuration block.

    Configuration blocks are immutable. Use :meth:`~.replace` to derive
    a modified block.

    |parameters|

    .. container:: operations

        .. describe:: x == y
        .. describe:: x != y

            Compares two :class:`~.Config` objects.

        .. describe:: hash(x)

            Returns the hash of the :class:`~.Config` object.
    """

    __slots__ = ()

    def __init__(self, **kwargs):
        for o in self.__class__.__config_options__:
            try:
                value = kwargs.pop(o.name)
            except (KeyError) as e:
                value = copy.deepcopy(getattr(self.__class__, f"default_{o.name}"))

            if not isinstance(value, o.type):
                raise ConfigError(
                    f"{self.__class__.__name__}.{o.name}: expected "
                    f"{getattr(o.type, '__name__', o.type)}, got {value.__class__.__name__}"
                )

            if o.type is float and value is not None:
                value = float(value)

            object.__setattr__(self, f"_{o.name}", value)

        if kwargs:
            names = ", ".join(sorted(kwargs))
            raise ConfigError(f"{self.__class__.__name__}: unknown option(s) {names}")

        self.validate()

    def __setattr__(self, key, value):
        raise AttributeError(f"{self.__class__.__name__} is immutable")

    def __hash__(self):
        return hash(tuple(_freeze(v) for v in self.to_dict().values()))

    def __repr__(self):
        values = " ".join(f"{k}={v!r}" for (k, v) in self.to_dict().items())
        return f"<{self.__class__.__name__} {values}>"

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return NotImplemented

        return self.to_dict() == other.to_dict()

    def validate(self):
        """
        Checks cross-option invariants. Subclasses override this and
        raise :exc:`~.ConfigError`.
        """

    def replace(self, **kwargs):
        """
        Returns a copy of the block with the given options replaced.
        """

        return self.__class__(**{**self.to_dict(), **kwargs})

    def to_dict(self):
        """
        Returns the block as a JSON-compatible :class:`dict`.
        """

        return {o.name: getattr(self, o.name) for o in self.__class__.__config_options__}

    @classmethod
    def from_dict(cls, data):
        """
        Constructs a block from a mapping, as read from a JSON document.

        Raises
        ------
        :exc:`~.ConfigError`
            The mapping has an unknown key or a value of the wrong type.
        """

        if not isinstance(data, dict):
            raise ConfigError(f"{cls.__name__}: expected an object, got {data.__class__.__name__}")

        return cls(**data)


def _freeze(value):
    if isinstance(value, dict):
        return tuple(sorted((k, _freeze(v)) for (k, v) in value.items()))
    elif isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)

    return value


def _require(condition, message):
    if not condition:
        raise ConfigError(message)


from ckspace.config.blocks import *
from ckspace.config.blocks import __all__ as _blocks__all__
from ckspace.config.blocks import blocks


class Settings(collections.namedtuple("Settings", list(blocks))):
    """
    Holds one instance of every configuration block.

    Attributes are named after the document keys, e.g.
    ``settings.stop_policy``.
    """

    __slots__ = ()

    def to_dict(self):
        return {name: block.to_dict() for (name, block) in zip(self._fields, self)}


def default_settings():
    return Settings(*(cls() for cls in blocks.values()))


def load_config(path=None):
    """
    Loads a configuration document.

    The document is a JSON object whose keys name configuration blocks.
    Blocks that are not present take their defaults.

    Parameters
    ----------
    path: Optional[Union[:class:`str`, :class:`os.PathLike`]]
        The document path. ``None`` returns the defaults.

    Returns
    -------
    :class:`~.Settings`
        The loaded settings.

    Raises
    ------
    :exc:`~.ConfigError`
        The document names an unknown block, or a block is invalid.
    """

    if path is None:
        return default_settings()

    try:
        data = read_json(path)
    except (ValueError) as e:
        raise ConfigError(f"{path}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object")

    unknown = sorted(set(data) - set(blocks))
    if unknown:
        raise ConfigError(f"{path}: unknown block(s) {', '.join(unknown)}")

    values = list()
    for (name, cls) in blocks.items():
        values.append(cls.from_dict(data.get(name, dict())))

    log.debug("loaded configuration from %s (%d block(s) given)", path, len(data))

    return Settings(*values)


__all__ = [
    "option",
    "Config",
    "Settings",
    "default_settings",
    "load_config",
    *_blocks__all__,
]
