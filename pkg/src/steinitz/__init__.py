"""Realizable Steinitz classes for l-groups over imaginary quadratic fields."""

__version__ = "0.1.0"

from .classgroup import Field, Form, enumerate_class_group, prime_to_class  # noqa: E402
from .engine import (  # noqa: E402
    RamData,
    RamDatum,
    good_group_report,
    membership,
    realizable,
    steinitz_class,
    validate_ram_data,
    witness_search,
)
from .lgroups import GroupSpec  # noqa: E402
from .wgroups import w_group  # noqa: E402

__all__ = [
    "Field",
    "Form",
    "GroupSpec",
    "RamData",
    "RamDatum",
    "enumerate_class_group",
    "good_group_report",
    "membership",
    "prime_to_class",
    "realizable",
    "steinitz_class",
    "validate_ram_data",
    "w_group",
    "witness_search",
]
