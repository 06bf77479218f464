import collections
import logging
import warnings

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from ckspace.config import TemporalConfig
from ckspace.errors import ValidationError
from ckspace.events.log import group_by_student
from ckspace.temporal.chains import estimate_chain, mappings, similarity_matrix
from ckspace.temporal.smoothing import adaptive_smooth
from ckspace.traits.clustering import _relabel, kmeans
from ckspace.traits.embedding import embed


log = logging.getLogger(__name__)


def cluster_sessions(S, k, dimensions=3, restarts=10, seed=0):
    """
    Clusters students by a similarity matrix.

    ``1 - S`` is embedded by classical scaling and the coordinates are
    clustered with K-Means. Clusters are numbered in order of first
    appearance.

    Parameters
    ----------
    S: :class:`numpy.ndarray`
        The symmetric similarities in [0, 1].
    k: :class:`int`
        The number of clusters.
    dimensions: :class:`int`
        The embedding dimension.
    restarts: :class:`int`
        The number of K-Means restarts.
    seed: :class:`int`
        The K-Means seed.

    Returns
    -------
    Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`]
        The labels and the centroids in the embedding.

    Raises
    ------
    :exc:`~.ValidationError`
        ``k`` exceeds the number of students.
    """

    S = np.asarray(S, dtype=float)
    n = S.shape[0]

    if not 1 <= k <= n:
        raise ValidationError(f"cannot form {k} cluster(s) from {n} student(s)")

    D = np.clip(1.0 - (S + S.T) / 2.0, 0.0, None)
    np.fill_diagonal(D, 0.0)

    points = embed(D, dimensions)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        (labels, centroids) = kmeans(points, k, restarts, seed)

    found = len(np.unique(labels))
    if found < k:
        log.warning("only %d of %d cluster(s) are occupied (%d warning(s))", found, k, len(caught))

    return _relabel(labels, centroids)


def align_labels(labels, centroids):
    """
    Renames cluster labels so that they stay consistent over time.

    The clusters of every step are matched to those of the previous
    step by a minimum-cost assignment on centroid distances and take
    over their names. A cluster left unmatched gets a fresh name.

    Parameters
    ----------
    labels: List[array_like]
        The labels of every step.
    centroids: List[array_like]
        The centroids of every step, row ``c`` belonging to label ``c``,
        all in one coordinate convention.

    Returns
    -------
    List[:class:`numpy.ndarray`]
        The renamed labels.
    """

    if len(labels) != len(centroids):
        raise ValidationError("need one set of centroids per step")

    if not labels:
        return list()

    aligned = [np.asarray(labels[0], dtype=int)]
    names = list(range(len(centroids[0])))
    fresh = len(names)

    for t in range(1, len(labels)):
        current = np.asarray(centroids[t], dtype=float)
        previous = np.asarray(centroids[t - 1], dtype=float)

        (rows, cols) = linear_sum_assignment(cdist(current, previous))

        mapping = {int(r): names[c] for (r, c) in zip(rows, cols)}
        for r in range(len(current)):
            if r not in mapping:
                mapping[r] = fresh
                fresh += 1

        names = [mapping[r] for r in range(len(current))]
        aligned.append(np.array([mapping[int(l)] for l in labels[t]], dtype=int))

    return aligned


TemporalResult = collections.namedtuple("TemporalResult", ["ribbons", "weights", "smoothed", "students"])
TemporalResult.__doc__ = """
Represents temporally coherent clusterings of session behavior.

Attributes
----------
ribbons: :class:`pandas.DataFrame`
    One row per step and student with columns ``t``, ``student_id`` and
    ``cluster``.
weights: List[:class:`float`]
    The smoothing weight of every step.
smoothed: List[:class:`numpy.ndarray`]
    The smoothed similarity matrices.
students: List[:class:`str`]
    The students, in matrix order.
"""


def _profile_centroids(S, labels):
    # a cluster's mean similarity row lives in a space shared by all steps
    return np.array([S[labels == c].mean(axis=0) for c in range(labels.max() + 1)])


def temporal_pipeline(sessions, config=None, seed=0):
    """
    Clusters students session by session with temporal smoothing.

    The ``t``-th session of every student is summarized as a behavior
    chain; a student without a ``t``-th session keeps the chain of the
    last one. Chains give a similarity matrix per step, the matrices
    are smoothed by :func:`~.adaptive_smooth` (or a fixed weight), each
    step is clustered by :func:`~.cluster_sessions` and the labels are
    aligned over time by :func:`~.align_labels`, comparing clusters by
    their mean similarity rows.

    Parameters
    ----------
    sessions: Iterable[:class:`~.Session`]
        The sessions.
    config: Optional[:class:`~.TemporalConfig`]
        The chain states, smoothing, bandwidth and cluster settings.
    seed: :class:`int`
        The K-Means seed.

    Returns
    -------
    :class:`~.TemporalResult`
        The aligned labels and the smoothing trace.

    Raises
    ------
    :exc:`~.ValidationError`
        There are fewer students than clusters.
    """

    config = config or TemporalConfig()
    mapping = mappings[config.chain]

    students = group_by_student(sessions)
    ids = list(students)
    steps = max((len(s) for s in students.values()), default=0)

    if len(ids) < config.k:
        raise ValidationError(f"{len(ids)} student(s) are too few for {config.k} cluster(s)")

    series = list()
    for t in range(steps):
        chains = [
            estimate_chain(students[sid][min(t, len(students[sid]) - 1)], mapping, config.smoothing)
            for sid in ids
        ]
        series.append(similarity_matrix(chains, config.sigma))

    (smoothed, weights) = adaptive_smooth(series, config.gamma)

    labels = list()
    centroids = list()
    for S in smoothed:
        (l, _) = cluster_sessions(S, config.k, config.dimensions, config.restarts, seed)
        labels.append(l)
        centroids.append(_profile_centroids(S, l))

    aligned = align_labels(labels, centroids)

    rows = [(t, sid, int(c)) for (t, l) in enumerate(aligned) for (sid, c) in zip(ids, l)]
    ribbons = pd.DataFrame(rows, columns=["t", "student_id", "cluster"])

    log.info("clustered %d student(s) over %d step(s)", len(ids), steps)

    return TemporalResult(ribbons, weights, smoothed, ids)


__all__ = [
    "TemporalResult",
    "align_labels",
    "cluster_sessions",
    "temporal_pipeline",
]
