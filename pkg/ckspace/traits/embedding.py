import logging
import warnings

import numpy as np

from ckspace.errors import ValidationError


log = logging.getLogger(__name__)


class Embedding:
    """
    Represents a classical scaling basis: the leading eigenpairs of the
    double-centered squared dissimilarities, and what is needed to place
    new points relative to the training points.

    Attributes
    ----------
    points: :class:`numpy.ndarray`
        The training coordinates, one row per point.
    eigenvalues: :class:`numpy.ndarray`
        The kept eigenvalues, descending.
    eigenvectors: :class:`numpy.ndarray`
        The kept eigenvectors, one column per dimension.
    row_means: :class:`numpy.ndarray`
        The row means of the squared training dissimilarities.
    grand_mean: :class:`float`
        The mean of the squared training dissimilarities.
    """

    __slots__ = ("points", "eigenvalues", "eigenvectors", "row_means", "grand_mean")

    def __init__(self, points, eigenvalues, eigenvectors, row_means, grand_mean):
        self.points = np.asarray(points, dtype=float)
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.eigenvectors = np.asarray(eigenvectors, dtype=float)
        self.row_means = np.asarray(row_means, dtype=float)
        self.grand_mean = float(grand_mean)

    def __repr__(self):
        return f"<Embedding points={self.points.shape[0]} dimensions={self.dimensions}>"

    @property
    def dimensions(self):
        """
        The number of coordinates per point.

        :type: :class:`int`
        """

        return self.points.shape[1]

    def project(self, distances):
        """
        Places new points in the embedding.

        Parameters
        ----------
        distances: :class:`numpy.ndarray`
            The dissimilarities of each new point to every training
            point, one row per new point.

        Returns
        -------
        :class:`numpy.ndarray`
            The coordinates, one row per new point. A training point's
            own dissimilarities give back its training coordinates.
        """

        squared = np.atleast_2d(np.asarray(distances, dtype=float)) ** 2

        if squared.shape[1] != self.row_means.size:
            raise ValidationError(
                f"expected dissimilarities to {self.row_means.size} training point(s), got {squared.shape[1]}"
            )

        centered = -0.5 * (
            squared - squared.mean(axis=1, keepdims=True) - self.row_means[None, :] + self.grand_mean
        )

        scale = np.where(self.eigenvalues > 0, np.sqrt(np.maximum(self.eigenvalues, 0.0)), 1.0)
        coordinates = centered @ self.eigenvectors / scale

        return np.where(self.eigenvalues > 0, coordinates, 0.0)

    def to_dict(self):
        return {
            "points": self.points.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "eigenvectors": self.eigenvectors.tolist(),
            "row_means": self.row_means.tolist(),
            "grand_mean": self.grand_mean,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["points"], data["eigenvalues"], data["eigenvectors"], data["row_means"], data["grand_mean"])


def _check_dissimilarities(D):
    D = np.asarray(D, dtype=float)

    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValidationError("dissimilarities must form a square matrix")

    if not np.allclose(D, D.T):
        raise ValidationError("dissimilarities must be symmetric")

    if np.any(np.diag(D) != 0):
        raise ValidationError("dissimilarities must have a zero diagonal")

    if np.any(D < 0):
        raise ValidationError("dissimilarities must be non-negative")

    return D


def fit_embedding(D, d=3):
    """
    Embeds points given their pairwise dissimilarities by classical
    scaling.

    The squared dissimilarities are double-centered and the top ``d``
    eigenpairs with positive eigenvalues give the coordinates. When
    fewer than ``d`` eigenvalues are positive, the dimension is reduced
    and a :class:`UserWarning` is emitted. At least one dimension is
    kept; with no positive eigenvalue every point sits at the origin.

    Parameters
    ----------
    D: :class:`numpy.ndarray`
        The symmetric, non-negative dissimilarities with a zero
        diagonal.
    d: :class:`int`
        The requested dimension.

    Returns
    -------
    :class:`~.Embedding`
        The basis and the coordinates.

    Raises
    ------
    :exc:`~.ValidationError`
        ``D`` is not a valid dissimilarity matrix, or ``d < 1``.
    """

    if d < 1:
        raise ValidationError("the embedding needs at least one dimension")

    D = _check_dissimilarities(D)
    n = D.shape[0]

    squared = D ** 2
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * J @ squared @ J

    (values, vectors) = np.linalg.eigh((B + B.T) / 2)
    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = vectors[:, order]

    tolerance = 1e-10 * max(1.0, abs(values[0]) if n else 1.0)
    positive = int(np.count_nonzero(values > tolerance))

    if positive < d:
        message = f"only {positive} positive eigenvalue(s), embedding reduced from {d} to {max(positive, 1)} dimension(s)"
        log.warning(message)
        warnings.warn(message, stacklevel=2)

    kept = max(min(d, positive), 1)
    values = np.where(values[:kept] > tolerance, values[:kept], 0.0)
    vectors = vectors[:, :kept]

    points = vectors * np.sqrt(values)[None, :]

    return Embedding(points, values, vectors, squared.mean(axis=1), squared.mean())


def embed(D, d=3):
    """
    Returns the classical scaling coordinates of points given their
    pairwise dissimilarities. See :func:`~.fit_embedding`.
    """

    return fit_embedding(D, d).points


__all__ = [
    "Embedding",
    "embed",
    "fit_embedding",
]
