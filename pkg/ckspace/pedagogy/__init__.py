from ckspace.pedagogy.actions import *
from ckspace.pedagogy.actions import __all__ as _actions__all__
from ckspace.pedagogy.models import *
from ckspace.pedagogy.models import __all__ as _models__all__
from ckspace.pedagogy.stopping import *
from ckspace.pedagogy.stopping import __all__ as _stopping__all__
from ckspace.pedagogy.paths import *
from ckspace.pedagogy.paths import __all__ as _paths__all__


__all__ = [
    *_actions__all__,
    *_models__all__,
    *_stopping__all__,
    *_paths__all__,
]
