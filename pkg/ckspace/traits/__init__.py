from ckspace.traits.embedding import *
from ckspace.traits.embedding import __all__ as _embedding__all__
from ckspace.traits.profiles import *
from ckspace.traits.profiles import __all__ as _profiles__all__
from ckspace.traits.clustering import *
from ckspace.traits.clustering import __all__ as _clustering__all__


__all__ = [
    *_embedding__all__,
    *_profiles__all__,
    *_clustering__all__,
]
