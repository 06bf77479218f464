from ckspace.events.kind import *
from ckspace.events.kind import __all__ as _kind__all__
from ckspace.events.event import *
from ckspace.events.event import __all__ as _event__all__
from ckspace.events.log import *
from ckspace.events.log import __all__ as _log__all__


__all__ = [
    *_kind__all__,
    *_event__all__,
    *_log__all__,
]
