from ckspace.knowledge.skillnet import *
from ckspace.knowledge.skillnet import __all__ as _skillnet__all__
from ckspace.knowledge.params import *
from ckspace.knowledge.params import __all__ as _params__all__
from ckspace.knowledge.model import *
from ckspace.knowledge.model import __all__ as _model__all__
from ckspace.knowledge.exact import *
from ckspace.knowledge.exact import __all__ as _exact__all__
from ckspace.knowledge.fitting import *
from ckspace.knowledge.fitting import __all__ as _fitting__all__


__all__ = [
    *_skillnet__all__,
    *_params__all__,
    *_model__all__,
    *_exact__all__,
    *_fitting__all__,
]
