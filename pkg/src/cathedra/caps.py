import os
from dataclasses import dataclass, replace

_ENV = {
    "max_objects": "CATHEDRA_MAX_OBJECTS",
    "max_morphisms": "CATHEDRA_MAX_MORPHISMS",
    "max_enum": "CATHEDRA_MAX_ENUM",
    "sample_bound": "CATHEDRA_SAMPLE_BOUND",
}


@dataclass(frozen=True)
class Caps:
    """Size budgets for constructions and exhaustive searches."""

    max_objects: int = 64
    max_morphisms: int = 512
    max_enum: int = 10**6
    sample_bound: int = 10**5

    def with_overrides(self, **kwargs):
        given = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **given)

    def as_dict(self):
        return {
            "max_objects": self.max_objects,
            "max_morphisms": self.max_morphisms,
            "max_enum": self.max_enum,
            "sample_bound": self.sample_bound,
        }


def default_caps() -> Caps:
    """Defaults, overridden by CATHEDRA_* environment variables."""
    values = {}
    for field, var in _ENV.items():
        raw = os.environ.get(var)
        if raw:
            values[field] = int(raw)
    return Caps(**values)


def resolve(caps):
    return caps if caps is not None else default_caps()
