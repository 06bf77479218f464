from ckspace.screener.features import *
from ckspace.screener.features import __all__ as _features__all__
from ckspace.screener.selection import *
from ckspace.screener.selection import __all__ as _selection__all__
from ckspace.screener.model import *
from ckspace.screener.model import __all__ as _model__all__


__all__ = [
    *_features__all__,
    *_selection__all__,
    *_model__all__,
]
