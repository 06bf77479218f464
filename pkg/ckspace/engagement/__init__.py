from ckspace.engagement.features import *
from ckspace.engagement.features import __all__ as _features__all__
from ckspace.engagement.timescale import *
from ckspace.engagement.timescale import __all__ as _timescale__all__
from ckspace.engagement.erp import *
from ckspace.engagement.erp import __all__ as _erp__all__
from ckspace.engagement.states import *
from ckspace.engagement.states import __all__ as _states__all__


__all__ = [
    *_features__all__,
    *_timescale__all__,
    *_erp__all__,
    *_states__all__,
]
