import logging

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import squareform
from scipy.stats import ttest_ind

from ckspace.config import ScreenerConfig
from ckspace.errors import ValidationError
from ckspace.screener.features import ScreenFeature


log = logging.getLogger(__name__)


def _labels(labels, n):
    labels = np.asarray(labels).astype(bool)

    if labels.shape != (n,):
        raise ValidationError(f"expected {n} label(s), got {labels.shape}")

    return labels


def _check_classes(labels, minimum):
    positives = int(labels.sum())

    if positives < minimum or len(labels) - positives < minimum:
        raise ValidationError(f"need at least {minimum} student(s) per class, got {positives} and {len(labels) - positives}")


def _groups(frame, merge):
    if frame.shape[1] == 1:
        return np.zeros(1, dtype=int)

    r = frame.corr().abs().fillna(0.0).to_numpy()
    distance = np.clip(1.0 - r, 0.0, None)
    np.fill_diagonal(distance, 0.0)

    tree = linkage(squareform(distance, checks=False), method="average")
    raw = fcluster(tree, t=1.0 - merge, criterion="distance")

    # groups are numbered by their first feature id
    order = list(dict.fromkeys(raw.tolist()))
    mapping = {old: new for (new, old) in enumerate(order)}

    return np.array([mapping[g] for g in raw])


def select_features(frame, labels, config=None, bank=None):
    """
    Selects one representative feature per group of similar features.

    Features are grouped by average-linkage clustering on their absolute
    Pearson correlation, merging at :attr:`~.ScreenerConfig.merge`. Each
    group is represented by the feature that separates the classes best
    under an unpaired t-test. Features are processed in id order, so the
    result does not depend on the column order of ``frame``.

    Parameters
    ----------
    frame: :class:`pandas.DataFrame`
        One row per student, one column per feature id. ``NaN`` marks a
        missing value.
    labels: array_like
        Whether each student has dyscalculia.
    config: Optional[:class:`~.ScreenerConfig`]
        The merge threshold and the significance a representative
        needs.
    bank: Optional[Iterable[:class:`~.ScreenFeature`]]
        The bank the columns come from, which supplies acquisition
        times. Columns missing from the bank are parsed from their id.

    Returns
    -------
    List[:class:`~.ScreenFeature`]
        The representatives in ascending p-value order, ties broken by
        id, with :attr:`~.ScreenFeature.group` and
        :attr:`~.ScreenFeature.p_value` set.

    Raises
    ------
    :exc:`~.ValidationError`
        A class has fewer than two students, or no feature varies.
    """

    config = config or ScreenerConfig()
    labels = _labels(labels, len(frame))
    _check_classes(labels, 2)

    bank = {f.id: f for f in bank or ()}
    frame = frame.reindex(sorted(frame.columns), axis=1).astype(float)

    variance = frame.var(skipna=True)
    constant = [c for c in frame.columns if not variance[c] > 0.0]
    if constant:
        log.info("dropping %d feature(s) without variance: %s", len(constant), ", ".join(constant))
        frame = frame.drop(columns=constant)

    if frame.shape[1] == 0:
        raise ValidationError("no feature varies")

    groups = _groups(frame, config.merge)

    p_values = dict()
    for column in frame.columns:
        values = frame[column].to_numpy()
        a = values[labels]
        b = values[~labels]
        (a, b) = (a[~np.isnan(a)], b[~np.isnan(b)])

        if len(a) < 2 or len(b) < 2:
            p_values[column] = 1.0
            continue

        p = ttest_ind(a, b).pvalue
        p_values[column] = float(p) if np.isfinite(p) else 1.0

    threshold = None if config.alpha is None else config.alpha / frame.shape[1]

    selected = list()
    for g in range(groups.max() + 1):
        members = [c for (c, group) in zip(frame.columns, groups) if group == g]
        best = min(members, key=lambda c: (p_values[c], c))

        if threshold is not None and p_values[best] > threshold:
            log.debug("group %d (%s) is not significant at p=%.3g", g, best, p_values[best])
            continue

        feature = bank.get(best) or ScreenFeature.from_id(best)
        selected.append(feature._replace(group=g, p_value=p_values[best]))

    selected.sort(key=lambda f: (f.p_value, f.id))

    log.info(
        "selected %d of %d group(s) from %d feature(s)", len(selected), groups.max() + 1, frame.shape[1]
    )

    return selected


__all__ = [
    "select_features",
]
