"""Commutator graphs of Pauli generator sets."""
from ._backend import BACKEND, available_backends
from .dla import GeneratorSet, lie_closure, model_preset, pauli_linear_symmetries, resolve_model
from .errors import ContractError, DimensionError, ResourceLimitError
from .graph import CommutatorGraph, Component, build_full, component_of
from .metrics import avg_otoc, four_point_avg, frame_potential_2, spread_expectation
from .pauli import PauliString, commutes, multiply, parse

__all__ = [
    "BACKEND",
    "available_backends",
    "GeneratorSet",
    "lie_closure",
    "model_preset",
    "pauli_linear_symmetries",
    "resolve_model",
    "ContractError",
    "DimensionError",
    "ResourceLimitError",
    "CommutatorGraph",
    "Component",
    "build_full",
    "component_of",
    "avg_otoc",
    "four_point_avg",
    "frame_potential_2",
    "spread_expectation",
    "PauliString",
    "commutes",
    "multiply",
    "parse",
]
