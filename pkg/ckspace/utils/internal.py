from types import GenericAlias as types_GenericAlias
from typing import (
    Any,
    Dict,
    FrozenSet,
    List,
    Literal,
    Set,
    Tuple,
    Union,
)
from typing import _GenericAlias as typing_GenericAlias
from typing import _SpecialForm as SpecialForm

import collections
import contextlib
import json
import os
import tempfile


builtins_isinstance = isinstance


def get_type_doc(t, *, optional=True):
    if isinstance(t, (types_GenericAlias, typing_GenericAlias)):
        origin = t.__origin__

        if origin is Union and type(None) in t.__args__:
            t = Union[tuple(a for a in t.__args__ if a is not type(None))]

            doc = get_type_doc(t, optional=optional)

            if optional:
                return f"Optional[{doc}]"
            else:
                return doc

        if isinstance(origin, SpecialForm):
            name = origin._name
        else:
            name = origin.__name__.capitalize()

        args = ", ".join(get_type_doc(t, optional=optional) for t in t.__args__)
        return f"{name}[{args}]"
    elif not isinstance(t, (type, SpecialForm)):
        return repr(t)
    elif t.__module__ == "builtins":
        return f":class:`{t.__name__}`"
    elif t.__module__.startswith("ckspace."):
        return f":class:`~{t.__module__.rsplit('.', 1)[0]}.{t.__name__}`"
    else:
        if isinstance(t, SpecialForm):
            return t._name
        else:
            return t.__name__


def isinstance(obj, t):
    if builtins_isinstance(t, tuple):
        return any(isinstance(obj, t) for t in t)

    if builtins_isinstance(t, (types_GenericAlias, typing_GenericAlias)):
        if t.__origin__ in (Dict, dict):
            k_T, v_T = t.__args__

            return builtins_isinstance(obj, dict) and all(
                isinstance(k, k_T) and isinstance(v, v_T) for (k, v) in obj.items()
            )
        elif t.__origin__ in (FrozenSet, frozenset):
            return builtins_isinstance(obj, frozenset) and all(
                isinstance(e, t.__args__[0]) for e in obj
            )
        elif t.__origin__ in (List, list):
            return builtins_isinstance(obj, list) and all(isinstance(e, t.__args__[0]) for e in obj)
        elif t.__origin__ is Literal:
            return obj in t.__args__
        elif t.__origin__ in (Set, set):
            return builtins_isinstance(obj, set) and all(isinstance(e, t.__args__[0]) for e in obj)
        elif t.__origin__ in (Tuple, tuple):
            args = t.__args__
            variable = False

            if args[-1] is Ellipsis:
                args = args[:-1]
                variable = True

            if not builtins_isinstance(obj, tuple):
                return False

            if variable:
                return all(isinstance(e, args) for e in obj)
            else:
                return len(obj) == len(args) and all(
                    isinstance(obj[i], args[i]) for i in range(len(args))
                )
        elif t.__origin__ is Union:
            return isinstance(obj, t.__args__)

    if builtins_isinstance(t, SpecialForm) and t._name == "Any":
        return True

    # json has a single number type
    if t is float and builtins_isinstance(obj, int) and not builtins_isinstance(obj, bool):
        return True

    return builtins_isinstance(obj, t)


class EnumMeta(type):
    def __new__(cls_meta, cls_name, cls_bases, cls_attrs, **kwargs):
        member_type = collections.namedtuple(f"_{cls_name}_member", ["name", "value"])
        for (key, value) in kwargs.items():
            setattr(member_type, key, value)

        member_map = dict()

        value_map = dict()
        for (key, value) in cls_attrs.items():
            if key[0] == "_" or isinstance(value, (classmethod, staticmethod)):
                continue

            try:
                member = value_map[value]
            except (KeyError) as e:
                member = member_type(key, value)
                value_map[value] = member

            member_map[key] = member
            cls_attrs[key] = member

        cls_attrs["_members_"] = member_map
        cls_attrs["_values_"] = value_map

        cls = super().__new__(cls_meta, cls_name, cls_bases, cls_attrs)

        member_type._cls_ = cls

        return cls

    def __instancecheck__(cls, instance):
        try:
            return instance._cls_ is cls
        except (AttributeError) as e:
            return False

    def __iter__(cls):
        yield from cls._members_.values()

    def __len__(cls):
        return len(cls._members_)

    def __delattr__(cls, key):
        raise TypeError("enums are immutable")

    def __setattr__(cls, key, value):
        raise TypeError("enums are immutable")

    def from_name(cls, name):
        """
        Looks up a member by its name.

        Raises
        ------
        :exc:`ValueError`
            No member has the name.
        """

        try:
            return cls._members_[name]
        except (KeyError) as e:
            raise ValueError(f"{name!r} is not a valid {cls.__name__}") from e

    def from_value(cls, value, default=...):
        """
        Looks up a member by its value.

        Parameters
        ----------
        value: Any
            The member value.
        default: Any
            Returned when no member has the value. When omitted a
            :exc:`ValueError` is raised instead.
        """

        try:
            return cls._values_[value]
        except (KeyError, TypeError) as e:
            if default is not ...:
                return default

            raise ValueError(f"{value!r} is not a valid {cls.__name__}") from e


class Enum(metaclass=EnumMeta):
    pass


@contextlib.contextmanager
def atomic_write(path, mode="w", **kwargs):
    """
    Opens a temporary file next to ``path`` and moves it over ``path``
    once the block exits without an exception.

    Examples
    --------

    .. code-block:: python3

        with atomic_write("beliefs.json") as stream:
            stream.write(text)
    """

    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))

    if "b" not in mode:
        kwargs.setdefault("encoding", "utf-8")
        kwargs.setdefault("newline", "")

    fd, temp = tempfile.mkstemp(prefix=".tmp-", dir=directory)

    try:
        with os.fdopen(fd, mode, **kwargs) as stream:
            yield stream

        os.replace(temp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(temp)

        raise


def dump_json(obj):
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), sort_keys=True)


def write_json(obj, path):
    with atomic_write(path) as stream:
        stream.write(json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True))
        stream.write("\n")


def read_json(path):
    with open(path, encoding="utf-8") as stream:
        return json.load(stream)


def write_csv(frame, path):
    with atomic_write(path) as stream:
        frame.to_csv(stream, index=False, lineterminator="\n", float_format="%.6f")


__all__ = [
    "atomic_write",
    "dump_json",
    "get_type_doc",
    "read_json",
    "write_csv",
    "write_json",
    "EnumMeta",
    "Enum",
]
