from ckspace.simulation.population import *
from ckspace.simulation.population import __all__ as _population__all__
from ckspace.simulation.spelling import *
from ckspace.simulation.spelling import __all__ as _spelling__all__
from ckspace.simulation.session import *
from ckspace.simulation.session import __all__ as _session__all__
from ckspace.simulation.samples import *
from ckspace.simulation.samples import __all__ as _samples__all__


__all__ = [
    *_population__all__,
    *_spelling__all__,
    *_session__all__,
    *_samples__all__,
]
