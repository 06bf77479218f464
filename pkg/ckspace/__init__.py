import collections
import logging

from ckspace import utils
from ckspace import errors
from ckspace import config
from ckspace import events
from ckspace import knowledge
from ckspace import spelling
from ckspace import pedagogy
from ckspace import engagement
from ckspace import traits
from ckspace import temporal
from ckspace import screener
from ckspace import simulation
from ckspace import reports


__all__ = [
    "config",
    "engagement",
    "errors",
    "events",
    "knowledge",
    "pedagogy",
    "reports",
    "screener",
    "simulation",
    "spelling",
    "temporal",
    "traits",
    "utils",
]


logging.getLogger(__name__).addHandler(logging.NullHandler())


_VersionInfo = collections.namedtuple("_VersionInfo", "major minor micro release serial")

version = "0.3.0a"
version_info = _VersionInfo(0, 3, 0, "alpha", 0)

schema_versions = {
    "feature_bank": 1,
    "log": 1,
    "models": 1,
    "skillnet": 1,
    "truth": 1,
    "words": 1,
}
