# Named (ω, τ, θ) triples evaluated for each structured family.

from gsorlab.errors import ParameterError
from gsorlab.solvers.options import GsorParams

PRESETS = {
    "lc-like": {
        "GSORa": GsorParams(1.0, 1.0, 1.0),
        "GSORb": GsorParams(0.95, 0.95, 0.95),
        "GSORc": GsorParams(0.9, 0.8, 1.0),
        "GSORd": GsorParams(0.95, 1.0, 0.95),
    },
    "darcy-like": {
        "GSORa": GsorParams(0.5, 1.5, 1.0),
        "GSORb": GsorParams(0.5, 1.7, 0.8),
        "GSORc": GsorParams(0.5, 1.6, 1.2),
        "GSORd": GsorParams(0.6, 1.5, 1.0),
    },
}


def get_preset(family, name) -> GsorParams:
    try:
        return PRESETS[family][name]
    except KeyError:
        raise ParameterError(f"no preset {name!r} for family {family!r}") from None


def parse_preset(spec) -> GsorParams:
    """Looks up a preset written as "family/name", e.g. "lc-like/GSORb"."""
    family, sep, name = str(spec).partition("/")
    if not sep:
        raise ParameterError(f"preset must look like 'family/name', got {spec!r}")
    return get_preset(family, name)
