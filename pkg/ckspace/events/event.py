from ckspace.errors import ValidationError
from ckspace.events.kind import EventKind


class Event:
    """
    Represents one timestamped interaction, the atom of every log.

    Parameters
    ----------
    student_id: :class:`str`
        The student.
    session_id: :class:`str`
        The session. May be empty, in which case :func:`~.sessionize`
        assigns sessions by time gaps.
    t: :class:`int`
        Milliseconds since the epoch.
    kind: Union[:class:`~.EventKind`, :class:`str`]
        The event kind. Wire strings of known kinds are converted to
        :class:`~.EventKind` members, unknown strings are kept as-is.
    data: Optional[:class:`dict`]
        The kind-specific payload.


    .. container:: operations

        .. describe:: x == y
        .. describe:: x != y

            Compares two :class:`~.Event` objects.

        .. describe:: hash(x)

            Returns the hash of the :class:`~.Event` object.

    Attributes
    ----------
    student_id: :class:`str`
        The student.
    session_id: :class:`str`
        The session.
    t: :class:`int`
        Milliseconds since the epoch.
    kind: Union[:class:`~.EventKind`, :class:`str`]
        The event kind.
    data: :class:`dict`
        The payload.
    """

    __slots__ = ("student_id", "session_id", "t", "kind", "data")

    def __init__(self, student_id, session_id, t, kind, data=None):
        if isinstance(kind, str):
            kind = EventKind.from_value(kind, kind)

        if isinstance(t, bool) or not isinstance(t, int):
            raise ValidationError(f"event time must be an integer, got {t!r}")

        if t < 0:
            raise ValidationError(f"event time must be non-negative, got {t}")

        data = dict(data) if data is not None else dict()

        if kind is EventKind.answer_submitted:
            if not isinstance(data.get("correct"), bool):
                raise ValidationError("answer events need a boolean 'correct' flag")

            time_ms = data.get("time_ms")
            if isinstance(time_ms, bool) or not isinstance(time_ms, (int, float)):
                raise ValidationError("answer events need a numeric 'time_ms'")

        self.student_id = str(student_id)
        self.session_id = str(session_id) if session_id is not None else ""
        self.t = t
        self.kind = kind
        self.data = data

    def __hash__(self):
        return hash((self.student_id, self.session_id, self.t, self.wire_kind))

    def __repr__(self):
        return (
            f"<Event student_id={self.student_id!r} session_id={self.session_id!r} "
            f"t={self.t} kind={self.wire_kind!r}>"
        )

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return NotImplemented

        return (
            self.student_id == other.student_id
            and self.session_id == other.session_id
            and self.t == other.t
            and self.wire_kind == other.wire_kind
            and self.data == other.data
        )

    @property
    def wire_kind(self):
        """
        The kind as written to logs.

        :type: :class:`str`
        """

        return self.kind.value if isinstance(self.kind, EventKind) else self.kind

    @property
    def correct(self):
        """
        The correctness flag of an answer event, ``None`` for other
        kinds.

        :type: Optional[:class:`bool`]
        """

        return self.data.get("correct") if self.kind is EventKind.answer_submitted else None

    def to_dict(self):
        return {
            "sid": self.student_id,
            "sess": self.session_id,
            "t": self.t,
            "kind": self.wire_kind,
            "data": self.data,
        }

    @classmethod
    def from_dict(cls, record):
        """
        Constructs an :class:`~.Event` from a log record.

        Raises
        ------
        :exc:`KeyError`
            A required field is missing.
        :exc:`~.ValidationError`
            A field has an invalid value.
        """

        data = record.get("data")
        if data is not None and not isinstance(data, dict):
            raise ValidationError("'data' must be an object")

        return cls(record["sid"], record.get("sess", ""), record["t"], record["kind"], data)


__all__ = [
    "Event",
]
