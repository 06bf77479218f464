import pandas as pd

from ckspace.config import EngagementConfig
from ckspace.errors import ValidationError


class SplitFeatures:
    """
    Holds a feature series separated into a slow trend and the local
    deviation from it. ``trend + local`` reproduces the raw series.

    Attributes
    ----------
    trend: :class:`pandas.DataFrame`
        The exponential moving average of every feature.
    local: :class:`pandas.DataFrame`
        The raw values minus the trend.
    """

    __slots__ = ("trend", "local")

    def __init__(self, trend, local):
        self.trend = trend
        self.local = local

    def __len__(self):
        return len(self.trend)

    def __repr__(self):
        return f"<SplitFeatures steps={len(self.trend)} features={len(self.trend.columns)}>"

    def frame(self):
        """
        Returns both components side by side, with columns named
        ``<feature>_trend`` and ``<feature>_local``.
        """

        return pd.concat([self.trend.add_suffix("_trend"), self.local.add_suffix("_local")], axis=1)


def timescale_split(series, slow_alpha=None):
    """
    Separates slow and fast dynamics of a feature series.

    Parameters
    ----------
    series: Union[:class:`pandas.DataFrame`, :class:`pandas.Series`]
        The features, one row per step. Missing values are skipped by
        the average and stay missing in the local component.
    slow_alpha: Optional[:class:`float`]
        The smoothing factor of the trend. Defaults to
        :attr:`~.EngagementConfig.slow_alpha`.

    Returns
    -------
    :class:`~.SplitFeatures`
        The split.

    Raises
    ------
    :exc:`~.ValidationError`
        The series is empty.
    """

    if slow_alpha is None:
        slow_alpha = EngagementConfig.default_slow_alpha

    frame = series.to_frame() if isinstance(series, pd.Series) else pd.DataFrame(series)

    if frame.empty:
        raise ValidationError("cannot split an empty series")

    frame = frame.astype(float)
    trend = frame.ewm(alpha=slow_alpha, adjust=False, ignore_na=True).mean()

    return SplitFeatures(trend, frame - trend)


__all__ = [
    "SplitFeatures",
    "timescale_split",
]
