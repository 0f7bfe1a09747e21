"""Gentle A-infinity categories of punctured surfaces: structure and verification."""

from .algebra import (
    Angle,
    AngleTable,
    Identity,
    Morphism,
    Turn,
    compose,
    complement_to_turns,
    degree,
    ell_power,
    mu2,
    reduced_degree,
    render_angle,
    render_morphism,
)
from .disks import (
    Bounds,
    CatalogBoundsError,
    DiskCatalog,
    ImmersedDisk,
    WordMatcher,
    a_infinity_defect,
    build_catalog,
    find_disk,
    mu_k,
)
from .hochschild import (
    Cochain,
    Sequence,
    cup,
    differential,
    gerstenhaber_bracket,
    gerstenhaber_product,
    mu_cochain,
    parity_defect,
)
from .surface import (
    ArcSystem,
    ArcSystemError,
    Face,
    ValidationReport,
    load_arc_system,
    parse_arc_system,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
