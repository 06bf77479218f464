import numpy as np


def distance(a, b):
    """
    Calculates euclidean distance. For matrices this is the Frobenius
    norm of the difference.

    Parameters
    ----------
    a: Union[:class:`float`, :class:`numpy.ndarray`]
        The first point.
    b: Union[:class:`float`, :class:`numpy.ndarray`]
        The second point.

    Returns
    -------
    :class:`float`
        The euclidean distance.
    """

    return float(np.sqrt(np.sum((np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) ** 2)))


def interpolate(v1, v2, p):
    """
    Calculates linear interpolation. Works elementwise on arrays.

    Parameters
    ----------
    v1: Union[:class:`float`, :class:`numpy.ndarray`]
        The start value.
    v2: Union[:class:`float`, :class:`numpy.ndarray`]
        The end value.
    p: :class:`float`
        The point along the line in the range ``[0, 1]``.

    Returns
    -------
    Union[:class:`float`, :class:`numpy.ndarray`]
        The interpolated value.
    """

    return (1 - p) * v1 + p * v2


def slope(values):
    """
    Calculates the least-squares slope of a sequence against its index.

    Parameters
    ----------
    values: Sequence[:class:`float`]
        At least two values.

    Returns
    -------
    :class:`float`
        The slope per step.

    Examples
    --------

    .. code-block:: python3

        >>> slope([0.5, 0.6, 0.7])
        0.1
    """

    y = np.asarray(values, dtype=float)

    if y.size < 2:
        raise ValueError("slope needs at least two values")

    x = np.arange(y.size, dtype=float)
    x -= x.mean()

    return float(np.dot(x, y - y.mean()) / np.dot(x, x))


def clamp(value, low=0.0, high=1.0):
    return min(max(value, low), high)


__all__ = [
    "clamp",
    "distance",
    "interpolate",
    "slope",
]
