from ckspace.reports.series import *
from ckspace.reports.series import __all__ as _series__all__


__all__ = [
    *_series__all__,
]
