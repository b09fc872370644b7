"""Size guards for exhaustive enumerations.

Every default can be overridden through an environment variable, and the
CLI flags override the environment.
"""

import os
from dataclasses import dataclass, replace

from .errors import CapacityError

ENV_PREFIX = "SECONDSHEAF_GUARD_"


@dataclass(frozen=True)
class Guards:
    ring_order: int = 64
    module_order: int = 256
    families: int = 10**6
    constructive: int = 10**7
    hom: int = 10**6

    @classmethod
    def from_env(cls, environ=None):
        environ = os.environ if environ is None else environ
        values = {}
        for name in ("ring_order", "module_order", "families", "constructive", "hom"):
            raw = environ.get(ENV_PREFIX + name.upper())
            if raw is not None:
                values[name] = int(raw)
        return cls(**values)

    def with_overrides(self, **kwargs):
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def check(self, name, size, what=None):
        bound = getattr(self, name)
        if size > bound:
            raise CapacityError(what or name, size, bound)


def default_guards():
    return Guards.from_env()
