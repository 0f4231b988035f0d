"""Dynamics of the singularly perturbed Blaschke family.

``B(z) = z**3 (z - a) / (1 - conj(a) z) + lam / z**2`` with ``0 < |a| < 1``:
critical-point inventories, escape-time orbits, the three-way classification
of the critical component, raster topology, annulus itineraries and
escape-time rendering.
"""
from .critical_finder import (
    CriticalInventory,
    blaschke_crits,
    check_annulus,
    full_inventory,
    refine_root,
)
from .errors import (
    BlaschkeError,
    DegenerateInventoryError,
    DomainError,
    LabelingAmbiguityError,
    NoConvergenceError,
    PreconditionError,
    SeedNotEscapedError,
)
from .fatou import (
    ClassifierBudget,
    ComponentStats,
    EscapeGrid,
    FatouCase,
    classify,
    classify_detailed,
    component_stats,
    escape_grid,
    surrounds_origin,
)
from .orbit import OrbitRecord, RegionTag, RouteClass, iterate_orbit
from .rational_map import INFINITY, ParameterPair, evaluate
from .render import ImageBuffer, Palette, render_dynamical, render_parameter
from .symbolic import AnnulusLabel, Itinerary, check_itinerary, compute_itinerary, label_annuli

__all__ = [
    "INFINITY",
    "ParameterPair",
    "evaluate",
    "CriticalInventory",
    "blaschke_crits",
    "check_annulus",
    "full_inventory",
    "refine_root",
    "OrbitRecord",
    "RegionTag",
    "RouteClass",
    "iterate_orbit",
    "FatouCase",
    "ClassifierBudget",
    "EscapeGrid",
    "ComponentStats",
    "classify",
    "classify_detailed",
    "escape_grid",
    "component_stats",
    "surrounds_origin",
    "AnnulusLabel",
    "Itinerary",
    "label_annuli",
    "compute_itinerary",
    "check_itinerary",
    "Palette",
    "ImageBuffer",
    "render_dynamical",
    "render_parameter",
    "BlaschkeError",
    "DomainError",
    "NoConvergenceError",
    "DegenerateInventoryError",
    "SeedNotEscapedError",
    "PreconditionError",
    "LabelingAmbiguityError",
]
