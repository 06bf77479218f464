import pytest

from ckspace.errors import ParseError, ValidationError
from ckspace.events import (
    Event,
    EventKind,
    answer_sequences,
    read_log,
    sessionize,
    typed_text,
    write_log,
)

from conftest import answer_event


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


class TestReadLog:
    def test_empty(self, tmp_path):
        assert read_log(write_lines(tmp_path / "log.jsonl", [])) == []

    def test_input_order(self, tmp_path):
        path = write_lines(
            tmp_path / "log.jsonl",
            [
                '{"sid":"b","sess":"s","t":5,"kind":"key","data":{"char":"a"}}',
                '{"sid":"a","sess":"s","t":1,"kind":"nav_game","data":{}}',
                "",
                '{"sid":"b","sess":"s","t":9,"kind":"answer","data":{"correct":true,"time_ms":1200}}',
            ],
        )

        events = read_log(path)

        assert [e.student_id for e in events] == ["b", "a", "b"]
        assert events[1].kind is EventKind.nav_game
        assert events[2].correct is True

    def test_missing_field(self, tmp_path):
        path = write_lines(
            tmp_path / "log.jsonl",
            [
                '{"sid":"a","sess":"s","t":1,"kind":"key","data":{}}',
                '{"sid":"a","sess":"s","kind":"key","data":{}}',
            ],
        )

        with pytest.raises(ParseError) as info:
            read_log(path)

        assert info.value.line == 2
        assert "line 2" in str(info.value)

    def test_malformed_json(self, tmp_path):
        path = write_lines(tmp_path / "log.jsonl", ["{"])

        with pytest.raises(ParseError, match="line 1"):
            read_log(path)

    def test_time_regression(self, tmp_path):
        path = write_lines(
            tmp_path / "log.jsonl",
            [
                '{"sid":"a","sess":"s","t":10,"kind":"key","data":{}}',
                '{"sid":"a","sess":"s","t":4,"kind":"key","data":{}}',
            ],
        )

        with pytest.raises(ValidationError, match="line 2"):
            read_log(path)

    def test_unknown_kind_is_kept(self, tmp_path):
        path = write_lines(tmp_path / "log.jsonl", ['{"sid":"a","sess":"s","t":1,"kind":"jump","data":{"h":3}}'])

        (event,) = read_log(path)

        assert event.kind == "jump"
        assert event.to_dict()["kind"] == "jump"

    def test_answer_without_flag(self):
        with pytest.raises(ValidationError):
            Event("a", "s", 1, EventKind.answer_submitted, {"time_ms": 3})

    def test_negative_time(self):
        with pytest.raises(ValidationError):
            Event("a", "s", -1, EventKind.key_input)

    def test_canonical_round_trip(self, tmp_path):
        lines = [
            '{"data":{"char":"H"},"kind":"key","sess":"s1","sid":"a","t":1}',
            '{"data":{},"kind":"bksp","sess":"s1","sid":"a","t":2}',
            '{"data":{"correct":false,"time_ms":830,"typed":"Hund","target":"Hund"},"kind":"answer","sess":"s1","sid":"a","t":9}',
        ]
        source = write_lines(tmp_path / "in.jsonl", lines)
        target = tmp_path / "out.jsonl"

        write_log(read_log(source), target)

        assert target.read_bytes() != b""
        write_log(read_log(target), tmp_path / "again.jsonl")
        assert (tmp_path / "again.jsonl").read_bytes() == target.read_bytes()


class TestSessionize:
    def events(self, times, sess=None):
        return [Event("a", sess, t, EventKind.key_input) for t in times]

    def test_one_session(self):
        (session,) = sessionize(self.events([0, 1000, 2000]), gap=1000)

        assert len(session) == 3
        assert session.duration == 2000
        assert session.session_id == "a#0"

    def test_split(self):
        sessions = sessionize(self.events([0, 1001]), gap=1000)

        assert [len(s) for s in sessions] == [1, 1]
        assert [s.session_id for s in sessions] == ["a#0", "a#1"]

    def test_empty(self):
        assert sessionize([]) == []

    def test_explicit_ids(self):
        events = self.events([0, 1], sess="x") + self.events([2, 3], sess="y")

        assert [s.session_id for s in sessionize(events)] == ["x", "y"]

    def test_partition(self, rng):
        times = sorted(int(t) for t in rng.integers(0, 10**7, size=200))
        events = self.events(times) + [Event("b", None, t, EventKind.enter) for t in times[:50]]

        sessions = sessionize(events, gap=60000)

        assert sum(len(s) for s in sessions) == len(events)
        for s in sessions:
            assert len({e.student_id for e in s}) == 1
            assert all(b.t - a.t <= 60000 for (a, b) in zip(s.events, s.events[1:]))


class TestExtraction:
    def test_answer_sequences(self):
        events = [
            answer_event("a", 5, "B", False),
            answer_event("a", 1, "A", True),
            answer_event("b", 2, "A", False),
        ]

        assert answer_sequences(sessionize(events)) == {
            "a": [("A", True), ("B", False)],
            "b": [("A", False)],
        }

    def test_typed_text(self):
        events = [
            Event("a", "s", 0, EventKind.key_input, {"char": "H"}),
            Event("a", "s", 1, EventKind.invalid_input, {"char": "o"}),
            Event("a", "s", 2, EventKind.backspace),
            Event("a", "s", 3, EventKind.key_input, {"char": "u"}),
            Event("a", "s", 4, EventKind.key_input, {"char": "nd"}),
            Event("a", "s", 5, EventKind.enter),
        ]

        assert typed_text(events) == "Hund"
