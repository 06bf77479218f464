import collections
import json
import logging

from ckspace.errors import ParseError, ValidationError
from ckspace.events.event import Event
from ckspace.events.kind import EventKind, input_kinds
from ckspace.utils.internal import atomic_write, dump_json
from ckspace.utils.text import normalize


log = logging.getLogger(__name__)

default_session_gap = 30 * 60 * 1000


class Session:
    """
    Represents the events of one student between two pauses.

    Parameters
    ----------
    session_id: :class:`str`
        The session.
    events: List[:class:`~.Event`]
        The events, non-decreasing in time. Must not be empty.


    .. container:: operations

        .. describe:: len(x)

            Returns the number of events.

        .. describe:: iter(x)

            Returns an iterator over the events.

    Attributes
    ----------
    session_id: :class:`str`
        The session.
    student_id: :class:`str`
        The student.
    events: Tuple[:class:`~.Event`, ...]
        The events.
    """

    __slots__ = ("session_id", "student_id", "events")

    def __init__(self, session_id, events):
        if not events:
            raise ValidationError("a session needs at least one event")

        self.session_id = session_id
        self.student_id = events[0].student_id
        self.events = tuple(events)

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def __repr__(self):
        return (
            f"<Session session_id={self.session_id!r} student_id={self.student_id!r} "
            f"events={len(self.events)} duration={self.duration}>"
        )

    @property
    def start(self):
        """
        The time of the first event.

        :type: :class:`int`
        """

        return self.events[0].t

    @property
    def end(self):
        """
        The time of the last event.

        :type: :class:`int`
        """

        return self.events[-1].t

    @property
    def duration(self):
        """
        The time between the first and the last event, in milliseconds.

        :type: :class:`int`
        """

        return self.end - self.start


def read_log(path):
    """
    Reads a JSONL event log.

    Blank lines are skipped. Within each (student, session) pair events
    must be non-decreasing in time.

    Parameters
    ----------
    path: Union[:class:`str`, :class:`os.PathLike`]
        The log path.

    Returns
    -------
    List[:class:`~.Event`]
        The events, in file order.

    Raises
    ------
    :exc:`~.ParseError`
        A line is not a valid event record.
    :exc:`~.ValidationError`
        Time goes backwards within a session.
    """

    events = list()
    last = dict()

    with open(path, encoding="utf-8") as stream:
        for (number, line) in enumerate(stream, 1):
            if not line.strip():
                continue

            try:
                record = json.loads(line)
            except (ValueError) as e:
                raise ParseError(f"invalid JSON: {e}", line=number) from e

            if not isinstance(record, dict):
                raise ParseError("expected a JSON object", line=number)

            try:
                event = Event.from_dict(record)
            except (KeyError) as e:
                raise ParseError(f"missing field {e.args[0]!r}", line=number) from e
            except (ValidationError) as e:
                raise ParseError(str(e), line=number) from e

            key = (event.student_id, event.session_id)
            if key in last and event.t < last[key]:
                raise ValidationError(
                    f"line {number}: time regression in session {event.session_id!r} "
                    f"of student {event.student_id!r} ({event.t} < {last[key]})"
                )

            last[key] = event.t
            events.append(event)

    log.debug("read %d event(s) from %s", len(events), path)

    return events


def write_log(events, path):
    """
    Writes events as canonical JSONL: one object per line, keys sorted,
    no insignificant whitespace. The file is replaced atomically.

    Parameters
    ----------
    events: Iterable[:class:`~.Event`]
        The events.
    path: Union[:class:`str`, :class:`os.PathLike`]
        The log path.
    """

    with atomic_write(path) as stream:
        for event in events:
            stream.write(dump_json(event.to_dict()))
            stream.write("\n")


def sessionize(events, gap=default_session_gap):
    """
    Splits events into sessions.

    A new session starts when the student changes, when the explicit
    session id changes, or when two consecutive events of a student are
    more than ``gap`` milliseconds apart.

    Parameters
    ----------
    events: Iterable[:class:`~.Event`]
        The events. They are ordered by student and time first; the
        sort is stable.
    gap: :class:`int`
        The largest gap, in milliseconds, within a session.

    Returns
    -------
    List[:class:`~.Session`]
        The sessions, grouped by student and ordered by time.
    """

    events = sorted(events, key=lambda e: (e.student_id, e.t))

    sessions = list()
    counts = collections.Counter()
    current = list()

    def close():
        first = current[0]
        n = counts[first.student_id]
        counts[first.student_id] += 1

        if first.session_id:
            taken = counts[(first.student_id, first.session_id)]
            counts[(first.student_id, first.session_id)] += 1
            session_id = first.session_id if not taken else f"{first.session_id}.{taken}"
        else:
            session_id = f"{first.student_id}#{n}"

        sessions.append(Session(session_id, current))

    for event in events:
        if current:
            previous = current[-1]

            if (
                event.student_id != previous.student_id
                or event.t - previous.t > gap
                or event.session_id != previous.session_id
            ):
                close()
                current = list()

        current.append(event)

    if current:
        close()

    return sessions


def answers(session):
    """
    Returns the answer events of a session or event sequence.

    Returns
    -------
    List[:class:`~.Event`]
        The :attr:`~.EventKind.answer_submitted` events.
    """

    return [e for e in session if e.kind is EventKind.answer_submitted]


def answer_sequences(sessions):
    """
    Collects the skill answers of every student.

    Parameters
    ----------
    sessions: Iterable[:class:`~.Session`]
        The sessions.

    Returns
    -------
    Dict[:class:`str`, List[Tuple[:class:`str`, :class:`bool`]]]
        The ``(skill, correct)`` pairs of each student in time order.
        Answers without a ``skill`` in their payload are skipped.
    """

    sequences = dict()

    for session in sorted(sessions, key=lambda s: (s.student_id, s.start)):
        sequence = sequences.setdefault(session.student_id, list())

        for event in answers(session):
            skill = event.data.get("skill")
            if skill is not None:
                sequence.append((skill, event.data["correct"]))

    return sequences


def typed_text(events):
    """
    Reconstructs typed text from input events.

    Parameters
    ----------
    events: Iterable[:class:`~.Event`]
        Input events carrying a ``char`` payload. Other kinds are
        ignored.

    Returns
    -------
    :class:`str`
        The text as it stood when the input ended.
    """

    keys = list()

    for event in events:
        if event.kind is EventKind.backspace:
            keys.append("\b")
        elif event.kind in input_kinds and event.kind is not EventKind.enter:
            keys.append(event.data.get("char", ""))

    return normalize("".join(keys))


def group_by_student(sessions):
    students = dict()

    for session in sessions:
        students.setdefault(session.student_id, list()).append(session)

    for student_sessions in students.values():
        student_sessions.sort(key=lambda s: s.start)

    return dict(sorted(students.items()))


__all__ = [
    "default_session_gap",
    "Session",
    "answers",
    "answer_sequences",
    "group_by_student",
    "read_log",
    "sessionize",
    "typed_text",
    "write_log",
]
