from ckspace.temporal.chains import *
from ckspace.temporal.chains import __all__ as _chains__all__
from ckspace.temporal.smoothing import *
from ckspace.temporal.smoothing import __all__ as _smoothing__all__
from ckspace.temporal.clustering import *
from ckspace.temporal.clustering import __all__ as _clustering__all__


__all__ = [
    *_chains__all__,
    *_smoothing__all__,
    *_clustering__all__,
]
