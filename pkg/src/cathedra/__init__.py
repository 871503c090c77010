"""Finite-category computation engine."""

from .caps import Caps, default_caps
from .category import (
    FiniteCategory,
    Morphism,
    validate_category,
    opposite,
    product_category,
    from_monoid,
    from_poset,
    from_presentation,
    discrete,
    terminal_category,
    arrow_category,
    find_universal_object,
    is_isomorphism,
)
from .errors import CathedraError

__all__ = [
    "Caps",
    "default_caps",
    "CathedraError",
    "FiniteCategory",
    "Morphism",
    "validate_category",
    "opposite",
    "product_category",
    "from_monoid",
    "from_poset",
    "from_presentation",
    "discrete",
    "terminal_category",
    "arrow_category",
    "find_universal_object",
    "is_isomorphism",
]

__version__ = "0.1.0"
