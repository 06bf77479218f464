import numpy as np
import pandas as pd
import pytest
from scipy.spatial.distance import pdist, squareform
from sklearn.metrics import adjusted_rand_score

from ckspace.config import TraitsConfig
from ckspace.errors import ValidationError
from ckspace.events import Session
from ckspace.simulation import SUBGROUP_TEMPLATES, sample_profiles
from ckspace.traits import (
    ClusterModel,
    StudentProfile,
    classify_online,
    cluster_offline,
    embed,
    extract_profiles,
    fit_embedding,
    predict_from_subgroup,
    select_k,
)

from conftest import answer_event, make_net


def octahedron(rng, per_cluster=50, scale=4.0):
    centers = scale * np.vstack([np.eye(3), -np.eye(3)])
    labels = np.repeat(np.arange(6), per_cluster)

    return centers[labels] + rng.normal(size=(labels.size, 3)), labels


def blobs(rng, n=30, features=4):
    a = rng.normal(size=(n, features))
    b = rng.normal(size=(n, features)) + 10.0
    frame = pd.DataFrame(np.vstack([a, b]), columns=[f"f{i}" for i in range(features)])
    frame.index = [f"s{i:03d}" for i in range(2 * n)]

    return frame, np.repeat([0, 1], n)


class TestEmbedding:
    def test_collinear(self):
        D = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
        points = embed(D, 1)[:, 0]

        np.testing.assert_allclose(np.abs(points), [1.0, 0.0, 1.0], atol=1e-12)
        assert points[0] == pytest.approx(-points[2])

    def test_zero(self):
        with pytest.warns(UserWarning):
            points = embed(np.zeros((4, 4)), 3)

        np.testing.assert_array_equal(points, np.zeros((4, 1)))

    def test_isometry(self, rng):
        X = rng.normal(size=(12, 3))
        D = squareform(pdist(X))

        np.testing.assert_allclose(squareform(pdist(embed(D, 3))), D, atol=1e-8)

    def test_reduced_dimension(self, rng):
        X = rng.normal(size=(10, 2))

        with pytest.warns(UserWarning, match="reduced"):
            embedding = fit_embedding(squareform(pdist(X)), 3)

        assert embedding.dimensions == 2

    def test_project_training_point(self, rng):
        X = rng.normal(size=(15, 3))
        D = squareform(pdist(X))
        embedding = fit_embedding(D, 3)

        np.testing.assert_allclose(embedding.project(D[4]), embedding.points[[4]], atol=1e-8)

    @pytest.mark.parametrize(
        "D",
        [
            np.array([[0.0, 1.0], [2.0, 0.0]]),
            np.array([[1.0, 1.0], [1.0, 0.0]]),
            np.array([[0.0, -1.0], [-1.0, 0.0]]),
            np.zeros((2, 3)),
        ],
    )
    def test_invalid(self, D):
        with pytest.raises(ValidationError):
            embed(D)


class TestSelectK:
    def test_planted_six(self):
        hits = 0

        for seed in range(20):
            (points, _) = octahedron(np.random.default_rng(seed))
            (k, _) = select_k(points, 2, 8)
            hits += k == 6

        assert hits >= 18

    def test_single_blob(self, rng):
        (k, scores) = select_k(rng.normal(size=(200, 3)), 2, 6)

        assert k == 2
        assert sorted(scores) == [2, 3, 4, 5, 6]

    def test_translation(self, rng):
        (points, _) = octahedron(rng, 30)

        assert select_k(points, 2, 8)[0] == select_k(points + 100.0, 2, 8)[0]

    def test_too_few(self):
        with pytest.raises(ValidationError):
            select_k(np.zeros((2, 3)), 2, 4)


class TestClusterOffline:
    def test_two_blobs(self, rng):
        (frame, truth) = blobs(rng)
        (model, assignments) = cluster_offline(frame)

        assert model.k == 2
        assert list(assignments["student_id"]) == list(frame.index)
        assert adjusted_rand_score(truth, assignments["cluster"]) == 1.0

    def test_planted_partition(self, rng):
        (points, truth) = octahedron(rng)
        frame = pd.DataFrame(points, columns=["x", "y", "z"])

        (model, assignments) = cluster_offline(frame)

        assert model.k == 6
        assert adjusted_rand_score(truth, assignments["cluster"]) >= 0.9

    def test_permutation(self, rng):
        (frame, _) = blobs(rng)
        (_, a) = cluster_offline(frame)
        (_, b) = cluster_offline(frame.sample(frac=1.0, random_state=3))

        merged = a.merge(b, on="student_id")
        assert adjusted_rand_score(merged["cluster_x"], merged["cluster_y"]) == 1.0

    def test_constant_feature(self, rng):
        (frame, _) = blobs(rng)
        frame["flat"] = 1.0

        with pytest.warns(UserWarning, match="constant"):
            (model, _) = cluster_offline(frame)

        assert "flat" not in model.feature_names

    def test_too_few(self):
        frame = pd.DataFrame({"a": [0.0, 1.0]})

        with pytest.raises(ValidationError):
            cluster_offline(frame)


class TestClassifyOnline:
    def test_training_point(self, rng):
        (frame, _) = blobs(rng)
        (model, assignments) = cluster_offline(frame)

        for i in (0, 45):
            (cluster, confidence) = classify_online(frame.iloc[i].to_dict(), model)

            assert cluster == assignments["cluster"].iloc[i]
            assert confidence > 0.5

    def test_all_missing(self, rng):
        (frame, _) = blobs(rng)
        (model, _) = cluster_offline(frame)

        (a, confidence) = classify_online({}, model)
        (b, _) = classify_online({f: np.nan for f in frame.columns}, model)

        assert a == b
        assert confidence < 0.75

    def test_save_load(self, rng, tmp_path):
        (frame, _) = blobs(rng)
        (model, _) = cluster_offline(frame)

        model.save(tmp_path / "clusters.json")
        loaded = ClusterModel.load(tmp_path / "clusters.json")

        row = frame.iloc[7].to_dict()
        assert classify_online(row, loaded) == pytest.approx(classify_online(row, model))

    def test_accuracy_grows_with_sessions(self):
        sessions = 6
        accuracy = np.zeros((20, sessions))

        for seed in range(20):
            sample = sample_profiles(n=120, sessions=sessions, seed=seed)
            truth = np.array(sample.subgroups)

            (model, assignments) = cluster_offline(sample.partial[-1], k=6, seed=seed)
            clusters = assignments["cluster"].to_numpy()
            mapping = {c: pd.Series(truth[clusters == c]).mode().iloc[0] for c in range(model.k)}

            for s in range(sessions):
                predicted = [mapping[classify_online(p, model)[0]] for p in sample.partial[s]]
                accuracy[seed, s] = np.mean(np.array(predicted) == truth)

        mean = accuracy.mean(axis=0)

        assert mean[4] >= 0.5
        assert np.all(np.diff(mean) >= 0.0)


class TestPredictFromSubgroup:
    def test_templates(self):
        sample = sample_profiles(n=120, sessions=6, seed=11)
        truth = np.array(sample.subgroups)
        (model, assignments) = cluster_offline(sample.partial[-1], k=6, seed=11)
        clusters = assignments["cluster"].to_numpy()

        best = pd.Series(clusters[truth == "g6"]).mode().iloc[0]
        worst = pd.Series(clusters[truth == "g1"]).mode().iloc[0]

        assert predict_from_subgroup(best, model).gaps == []

        gaps = predict_from_subgroup(worst, model).gaps
        for skill in ("r10-card-1", "r10-spok-1", "r10-arab-1", "r10-line-1"):
            assert skill in gaps

    def test_horizon(self):
        profiles = [
            StudentProfile(f"s{i}", {"a": float(i % 2) + 0.01 * i}, {"X": i % 2 == 1}, [i % 2, 2 * (i % 2)])
            for i in range(10)
        ]

        (model, assignments) = cluster_offline(profiles, k=2)
        strong = assignments["cluster"].iloc[1]
        prediction = predict_from_subgroup(strong, model, horizon=1)

        assert prediction.pass_rates == {"X": 1.0}
        assert prediction.passed_skills == 1.0
        assert predict_from_subgroup(strong, model).passed_skills == 2.0

    def test_gaps_order(self):
        profiles = [
            StudentProfile(f"s{i}", {"a": float(i % 2) + 0.01 * i}, {"Z": i % 2 == 1, "Y": False, "X": False}, [])
            for i in range(10)
        ]

        (model, assignments) = cluster_offline(profiles, k=2)
        weak = assignments["cluster"].iloc[0]

        assert predict_from_subgroup(weak, model).gaps == ["Z", "Y", "X"]

    def test_unknown(self):
        profiles = [StudentProfile(f"s{i}", {"a": float(i % 2) + 0.01 * i}, {"X": True}, [1]) for i in range(10)]
        (model, _) = cluster_offline(profiles, k=2)

        with pytest.raises(ValidationError, match="unknown subgroup"):
            predict_from_subgroup(7, model)

    def test_table_has_no_templates(self, rng):
        (frame, _) = blobs(rng)
        (model, _) = cluster_offline(frame)

        with pytest.raises(ValidationError, match="no subgroup templates"):
            predict_from_subgroup(0, model)


class TestExtractProfiles:
    def test_features(self, chain):
        events = [
            answer_event("a", 0, "A", True, time_ms=1000),
            answer_event("a", 1000, "A", False, time_ms=3000),
            answer_event("a", 10 ** 8, "B", True, time_ms=2000),
        ]
        sessions = [Session("a#0", events[:2]), Session("a#1", events[2:])]

        (profile,) = extract_profiles(sessions, chain)

        assert profile.features["sessions"] == 2
        assert profile.features["error_rate"] == pytest.approx(1 / 3)
        assert profile.features["answer_time/A"] == pytest.approx(2.0)
        assert profile.features["highest_skill"] == pytest.approx(0.5)
        assert len(profile.progress) == 2
        assert set(profile.passed) == {"A", "B", "C"}

        (partial,) = extract_profiles(sessions, chain, sessions_limit=1)

        assert partial.features["sessions"] == 1
        assert partial.features["highest_skill"] == 0.0
        assert "answer_time/B" not in partial.features
