import logging

import numpy as np

from ckspace.errors import ValidationError
from ckspace.utils.math import distance, interpolate


log = logging.getLogger(__name__)


def adaptive_smooth(series, gamma=None):
    """
    Smooths a series of similarity matrices over time.

    ``S_1 = W_1`` and ``S_t = (1 - g_t) W_t + g_t S_{t-1}``. With
    ``gamma`` unset the weight is chosen per step as
    ``g_t = v_t / (v_t + e_t)``, where the noise ``v_t`` is the running
    median of the Frobenius norms of ``W_k - W_{k-1}`` so far and the
    novelty ``e_t`` is the norm of ``W_t - S_{t-1}``. Noisy series lean
    on the past; a change that stands out from the noise is taken over
    quickly. When both are 0 the series has not moved and ``g_t = 1``.

    Parameters
    ----------
    series: Iterable[:class:`numpy.ndarray`]
        The similarity matrices, all of one shape.
    gamma: Optional[:class:`float`]
        A fixed weight in [0, 1].

    Returns
    -------
    Tuple[List[:class:`numpy.ndarray`], List[:class:`float`]]
        The smoothed matrices and the weights used. The first weight is
        0 by convention.

    Raises
    ------
    :exc:`~.ValidationError`
        The series is empty, shapes disagree, or ``gamma`` is out of
        range.
    """

    series = [np.asarray(W, dtype=float) for W in series]

    if not series:
        raise ValidationError("need at least one similarity matrix")

    if any(W.shape != series[0].shape for W in series):
        raise ValidationError("similarity matrices must share one shape")

    if gamma is not None and not 0.0 <= gamma <= 1.0:
        raise ValidationError("gamma must lie in [0, 1]")

    smoothed = [series[0]]
    weights = [0.0]
    changes = list()

    for t in range(1, len(series)):
        W = series[t]
        previous = smoothed[-1]

        if gamma is None:
            changes.append(distance(W, series[t - 1]))
            noise = float(np.median(changes))
            novelty = distance(W, previous)

            g = 1.0 if noise + novelty == 0 else noise / (noise + novelty)
        else:
            g = gamma

        smoothed.append(interpolate(W, previous, g))
        weights.append(g)

        log.debug("step %d: weight %.3f", t, g)

    return smoothed, weights


__all__ = [
    "adaptive_smooth",
]
