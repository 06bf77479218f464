import collections
import logging
import warnings

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist, pdist, squareform
from scipy.special import softmax
from sklearn.cluster import KMeans

from ckspace.config import TraitsConfig
from ckspace.errors import ValidationError
from ckspace.traits.embedding import Embedding, fit_embedding
from ckspace.traits.profiles import StudentProfile, profiles_frame
from ckspace.utils.internal import read_json, write_json


log = logging.getLogger(__name__)


def kmeans(points, k, restarts=20, seed=0):
    """
    Runs K-Means with ``restarts`` seeded initializations and keeps the
    run with the smallest inertia.

    Returns
    -------
    Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`]
        The labels and the centroids.
    """

    points = np.asarray(points, dtype=float)
    model = KMeans(n_clusters=k, n_init=restarts, random_state=seed).fit(points)

    return model.labels_, model.cluster_centers_


def bic(points, labels, centroids):
    """
    Calculates the Bayesian information criterion of a hard clustering
    read as a mixture of spherical Gaussians with a shared variance.

    The parameters counted are the mixture weights, the centroids and
    the variance.
    """

    points = np.asarray(points, dtype=float)
    (n, d) = points.shape
    k = len(centroids)

    residual = ((points - centroids[labels]) ** 2).sum()
    variance = max(residual / (n * d), 1e-12)
    sizes = np.bincount(labels, minlength=k)
    sizes = sizes[sizes > 0]

    log_likelihood = (
        (sizes * np.log(sizes / n)).sum()
        - 0.5 * n * d * np.log(2 * np.pi * variance)
        - residual / (2 * variance)
    )

    parameters = (k - 1) + k * d + 1

    return -2.0 * log_likelihood + parameters * np.log(n)


def select_k(points, k_min=2, k_max=8, restarts=20, seed=0):
    """
    Chooses the number of clusters by the Bayesian information
    criterion.

    Parameters
    ----------
    points: :class:`numpy.ndarray`
        The points, one row each.
    k_min: :class:`int`
        The smallest number considered.
    k_max: :class:`int`
        The largest number considered. Capped at ``n - 1``.
    restarts: :class:`int`
        The K-Means restarts per candidate.
    seed: :class:`int`
        The K-Means seed.

    Returns
    -------
    Tuple[:class:`int`, Dict[:class:`int`, :class:`float`]]
        The chosen number and the criterion of every candidate. Ties go
        to the smaller number.

    Raises
    ------
    :exc:`~.ValidationError`
        There are too few points for ``k_min`` clusters.
    """

    points = np.asarray(points, dtype=float)
    n = points.shape[0]

    if k_min < 2:
        raise ValidationError("at least two clusters must be considered")

    k_max = min(k_max, n - 1)
    if k_min > k_max:
        raise ValidationError(f"{n} point(s) are too few to compare {k_min} or more clusters")

    scores = dict()
    for k in range(k_min, k_max + 1):
        (labels, centroids) = kmeans(points, k, restarts, seed)
        scores[k] = float(bic(points, labels, centroids))

    best = min(scores, key=lambda k: (scores[k], k))
    log.debug("cluster count criteria: %s", ", ".join(f"{k}={v:.1f}" for (k, v) in scores.items()))

    return best, scores


class SubgroupPrediction(collections.namedtuple("SubgroupPrediction", ["subgroup", "pass_rates", "gaps", "passed_skills"])):
    """
    Represents what a subgroup predicts for its members.

    Attributes
    ----------
    subgroup: :class:`int`
        The subgroup.
    pass_rates: Dict[:class:`str`, :class:`float`]
        The share of members that passed each skill.
    gaps: List[:class:`str`]
        The skills passed by fewer than half the members, in the order
        they first appear in the members' profiles.
    passed_skills: :class:`float`
        The expected number of passed skills at the requested horizon.
        ``NaN`` when no progress was recorded.
    """

    __slots__ = ()


class ClusterModel:
    """
    Represents an offline clustering of student profiles, ready to
    classify new, partial profiles.

    Parameters
    ----------
    feature_names: List[:class:`str`]
        The features used, in column order.
    means: Sequence[:class:`float`]
        The training means, used to standardize and to impute.
    scales: Sequence[:class:`float`]
        The training standard deviations.
    training: :class:`numpy.ndarray`
        The standardized training profiles.
    embedding: :class:`~.Embedding`
        The embedding of the training profiles.
    centroids: :class:`numpy.ndarray`
        The cluster centroids in the embedding.
    templates: Dict[:class:`int`, Dict[:class:`str`, Any]]
        Per cluster, the ``pass_rates`` of every skill and the mean
        ``progress`` after each session.
    """

    __slots__ = ("feature_names", "means", "scales", "training", "embedding", "centroids", "templates")

    def __init__(self, feature_names, means, scales, training, embedding, centroids, templates=None):
        self.feature_names = list(feature_names)
        self.means = np.asarray(means, dtype=float)
        self.scales = np.asarray(scales, dtype=float)
        self.training = np.asarray(training, dtype=float)
        self.embedding = embedding
        self.centroids = np.asarray(centroids, dtype=float)
        self.templates = {int(k): v for (k, v) in (templates or {}).items()}

    def __repr__(self):
        return f"<ClusterModel k={self.k} features={len(self.feature_names)} dimensions={self.embedding.dimensions}>"

    @property
    def k(self):
        """
        The number of clusters.

        :type: :class:`int`
        """

        return self.centroids.shape[0]

    def standardize(self, frame):
        """
        Standardizes profiles with the training statistics. Missing
        features, and features the model was not trained with, are
        imputed by the training mean.
        """

        X = profiles_frame(frame).reindex(columns=self.feature_names).to_numpy(dtype=float)
        X = np.where(np.isnan(X), self.means, X)

        return (X - self.means) / self.scales

    def locate(self, frame):
        """
        Returns the embedding coordinates of profiles.
        """

        return self.embedding.project(cdist(self.standardize(frame), self.training))

    def to_dict(self):
        return {
            "feature_names": self.feature_names,
            "means": self.means.tolist(),
            "scales": self.scales.tolist(),
            "training": self.training.tolist(),
            "embedding": self.embedding.to_dict(),
            "centroids": self.centroids.tolist(),
            "templates": {str(k): v for (k, v) in self.templates.items()},
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                data["feature_names"],
                data["means"],
                data["scales"],
                data["training"],
                Embedding.from_dict(data["embedding"]),
                data["centroids"],
                data.get("templates"),
            )
        except (KeyError) as e:
            raise ValidationError(f"cluster model document missing field {e.args[0]!r}") from e

    def save(self, path):
        write_json(self.to_dict(), path)

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))


def _relabel(labels, centroids):
    # clusters are numbered by first appearance
    order = list(dict.fromkeys(labels.tolist()))
    mapping = {old: new for (new, old) in enumerate(order)}

    return np.array([mapping[l] for l in labels]), centroids[order]


def _templates(profiles, labels, k):
    templates = dict()

    for cluster in range(k):
        members = [p for (p, l) in zip(profiles, labels) if l == cluster]
        skills = list(dict.fromkeys(s for p in members for s in p.passed))

        pass_rates = {s: float(np.mean([p.passed.get(s, False) for p in members])) for s in skills}

        length = max((len(p.progress) for p in members), default=0)
        progress = list()
        for i in range(length):
            values = [p.progress[min(i, len(p.progress) - 1)] for p in members if p.progress]
            progress.append(float(np.mean(values)))

        templates[cluster] = {"pass_rates": pass_rates, "progress": progress}

    return templates


def cluster_offline(profiles, config=None, seed=0, k=None):
    """
    Clusters complete student profiles.

    Features are standardized, constant features are dropped, missing
    values take the feature mean, and the Euclidean dissimilarities of
    the standardized profiles are embedded by classical scaling. The
    number of clusters is chosen by :func:`~.select_k` unless given,
    and the final partition is the best of ``restarts`` K-Means runs.

    Parameters
    ----------
    profiles: Union[List[:class:`~.StudentProfile`], :class:`pandas.DataFrame`]
        The profiles. A table is indexed by student id. Only
        :class:`~.StudentProfile` objects carry the passed skills and
        progress that :func:`~.predict_from_subgroup` needs; a model fit
        on a table has no subgroup templates.
    config: Optional[:class:`~.TraitsConfig`]
        The embedding dimension, cluster range and restarts.
    seed: :class:`int`
        The K-Means seed.
    k: Optional[:class:`int`]
        A fixed number of clusters.

    Returns
    -------
    Tuple[:class:`~.ClusterModel`, :class:`pandas.DataFrame`]
        The model and the assignments, with columns ``student_id`` and
        ``cluster``. Clusters are numbered in order of first appearance.

    Raises
    ------
    :exc:`~.ValidationError`
        There are too few profiles, or no feature varies.
    """

    config = config or TraitsConfig()

    if not isinstance(profiles, pd.DataFrame):
        profiles = list(profiles)

    frame = profiles_frame(profiles)
    n = len(frame)

    if n < max(k or config.k_min, 2) + 1:
        raise ValidationError(f"{n} profile(s) are too few to cluster")

    frame = frame.dropna(axis=1, how="all")
    means = frame.mean()
    scales = frame.std(ddof=0)

    constant = sorted(scales.index[~(scales > 0)])
    if constant:
        message = f"dropping {len(constant)} constant feature(s): {', '.join(constant)}"
        log.warning(message)
        warnings.warn(message, stacklevel=2)

        frame = frame.drop(columns=constant)
        means = means.drop(constant)
        scales = scales.drop(constant)

    if frame.shape[1] == 0:
        raise ValidationError("no profile feature varies")

    X = frame.to_numpy(dtype=float)
    X = np.where(np.isnan(X), means.to_numpy(), X)
    Z = (X - means.to_numpy()) / scales.to_numpy()

    embedding = fit_embedding(squareform(pdist(Z)), config.dimensions)
    points = embedding.points

    if k is None:
        (k, _) = select_k(points, config.k_min, config.k_max, config.restarts, seed)

    (labels, centroids) = kmeans(points, k, config.restarts, seed)
    (labels, centroids) = _relabel(labels, centroids)

    if isinstance(profiles, list) and profiles and isinstance(profiles[0], StudentProfile):
        templates = _templates(profiles, labels, len(centroids))
    else:
        templates = dict()

    model = ClusterModel(list(frame.columns), means.to_numpy(), scales.to_numpy(), Z, embedding, centroids, templates)
    assignments = pd.DataFrame({"student_id": list(frame.index), "cluster": labels})

    log.info("clustered %d profile(s) into %d cluster(s) over %d feature(s)", n, len(centroids), frame.shape[1])

    return model, assignments


def classify_online(profile, model):
    """
    Assigns a possibly partial profile to a cluster.

    Missing features take the training mean; the profile is placed in
    the stored embedding and the nearest centroid wins. The confidence
    is the winner's share of a softmax over negative centroid
    distances.

    Parameters
    ----------
    profile: Union[:class:`~.StudentProfile`, Dict[:class:`str`, :class:`float`]]
        The profile.
    model: :class:`~.ClusterModel`
        The model.

    Returns
    -------
    Tuple[:class:`int`, :class:`float`]
        The cluster and the confidence.
    """

    features = profile.features if isinstance(profile, StudentProfile) else profile
    frame = pd.DataFrame([features], dtype=float)

    point = model.locate(frame)
    distances = cdist(point, model.centroids)[0]
    weights = softmax(-distances)
    cluster = int(np.argmin(distances))

    return cluster, float(weights[cluster])


def predict_from_subgroup(subgroup, model, horizon=None):
    """
    Predicts performance from a cluster's template.

    Parameters
    ----------
    subgroup: :class:`int`
        The cluster.
    model: :class:`~.ClusterModel`
        The model.
    horizon: Optional[:class:`int`]
        The session after which the number of passed skills is
        predicted. Defaults to the last recorded session.

    Returns
    -------
    :class:`~.SubgroupPrediction`
        The prediction.

    Raises
    ------
    :exc:`~.ValidationError`
        The model has no templates, or the cluster is not part of it.
    """

    if not model.templates:
        raise ValidationError("the model has no subgroup templates; fit it on StudentProfile objects")

    if subgroup not in model.templates:
        raise ValidationError(f"unknown subgroup {subgroup!r}")

    template = model.templates[subgroup]
    pass_rates = dict(template["pass_rates"])
    gaps = [s for (s, rate) in pass_rates.items() if rate < 0.5]

    progress = template.get("progress") or []
    if not progress:
        passed_skills = float("nan")
    elif horizon is None:
        passed_skills = progress[-1]
    else:
        passed_skills = progress[min(max(horizon, 1), len(progress)) - 1]

    return SubgroupPrediction(subgroup, pass_rates, gaps, passed_skills)


__all__ = [
    "ClusterModel",
    "SubgroupPrediction",
    "bic",
    "classify_online",
    "cluster_offline",
    "kmeans",
    "predict_from_subgroup",
    "select_k",
]
