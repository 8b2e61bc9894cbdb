"""Exact K-ring computations for wonderful and regular group compactifications."""

from .rootweyl import (
    CartanLabel,
    RootSystem,
    WeylElement,
    WeylGroup,
    build_root_system,
    c_sets,
    enumerate_weyl,
    minimal_coset_reps,
    stabilizer_and_reps,
    weyl_group,
)

__all__ = [
    "CartanLabel",
    "RootSystem",
    "WeylElement",
    "WeylGroup",
    "build_root_system",
    "c_sets",
    "enumerate_weyl",
    "minimal_coset_reps",
    "stabilizer_and_reps",
    "weyl_group",
]
