import pytest

from ckspace.errors import ValidationError
from ckspace.events import sessionize
from ckspace.knowledge import load_skill_net
from ckspace.reports import (
    ReportKind,
    build_report,
    error_probability,
    overview,
    path_report,
    range_progress,
    skill_status,
)
from ckspace.simulation import sample_behavior

from conftest import answer_event


hour = 60 * 60 * 1000


@pytest.fixture
def ranged():
    return load_skill_net(
        {
            "skills": [
                {"id": "a", "name": "a", "range": "R10"},
                {"id": "b", "name": "b", "range": "R100"},
            ],
            "edges": [["a", "b"]],
            "games": {},
        }
    )


@pytest.fixture
def sessions():
    events = [
        answer_event("s1", 0, "a", True, "x"),
        answer_event("s1", 60000, "a", False, "x"),
        answer_event("s1", 120000, "b", True, "x"),
        answer_event("s1", 5 * hour, "b", False, "y"),
        answer_event("s2", 0, "a", True, "z"),
    ]

    return sessionize(events)


class TestSeries:
    def test_error_probability(self, sessions):
        report = error_probability(sessions)

        assert list(report["session_id"]) == ["x", "y", "z"]
        assert list(report["error_probability"]) == pytest.approx([1 / 3, 1.0, 0.0])

    def test_range_progress(self, sessions, ranged):
        report = range_progress(sessions, ranged)

        assert list(report["range"]) == ["R100", "R100", "R10"]
        assert list(report["range_index"]) == [1, 1, 0]

    def test_skill_status(self, sessions, ranged):
        report = skill_status(sessions, ranged)

        assert len(report) == 4
        assert list(report["skill_id"]) == ["a", "b", "a", "b"]
        assert report["p_learned"].between(0.0, 1.0).all()
        assert list(report["learned"]) == list(report["p_learned"] >= 0.85)

    def test_path(self, sessions):
        report = path_report(sessions)

        assert report[report["student_id"] == "s1"][["skill", "trials"]].values.tolist() == [["a", 2], ["b", 2]]

    def test_overview(self, sessions):
        report = overview(sessions).set_index("student_id")

        assert report.loc["s1", "sessions"] == 2
        assert report.loc["s1", "answers"] == 4
        assert report.loc["s1", "minutes"] == pytest.approx(2.0)
        assert report.loc["s1", "current"] == "b"
        assert report.loc["s2", "minutes"] == 0.0


class TestBuildReport:
    @pytest.mark.parametrize("kind", ["error-prob", "path", "overview", ReportKind.overview])
    def test_kinds(self, sessions, kind):
        assert not build_report(kind, sessions).empty

    def test_needs_net(self, sessions):
        with pytest.raises(ValidationError):
            build_report("skill-status", sessions)

    def test_with_net(self, sessions, ranged):
        assert len(build_report("range-progress", sessions, ranged)) == 3

    def test_unknown(self, sessions):
        with pytest.raises(ValidationError, match="error-prob"):
            build_report("grades", sessions)

    def test_ribbons(self):
        sample = sample_behavior(n=6, sessions=2, length=10, seed=0)
        report = build_report("ribbons", sample.sessions, seed=1)

        assert list(report.columns) == ["t", "student_id", "cluster"]
        assert len(report) == 12
