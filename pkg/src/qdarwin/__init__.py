"""Objectivity diagnostics for a qubit coupled to a GOE random-matrix environment.

Compares quantum-Darwinism mutual-information curves with a
spectrum-broadcast-structure distance bound, under two ways of
fragmenting a single N-level environment.
"""

from .evolve import Propagator, observables_series, propagate
from .fragment import (FragmentSelection, TraceMethod, enumerate_fragments, perez_trace,
                       staircase_trace)
from .infometrics import (InformationReport, SystemSource, discord, holevo_chi,
                          information_report, mutual_information)
from .kernels import backend_name
from .model import (EnvInit, HamiltonianSet, ModelParams, build_hamiltonians, goe_sample,
                    initial_state)
from .qstate import (BlochVector, DensityMatrix, ValidationError, fidelity_B, partial_trace,
                     trace_norm, von_neumann_entropy)
from .sbs import SBSBoundReport, distinguishability_term, eta_bound, separable_projection
from .search import DEFAULT_BUDGET, SearchBudget

__version__ = "0.1.0"

__all__ = [
    "BlochVector", "DEFAULT_BUDGET", "DensityMatrix", "EnvInit", "FragmentSelection",
    "HamiltonianSet", "InformationReport", "ModelParams", "Propagator", "SBSBoundReport",
    "SearchBudget", "SystemSource", "TraceMethod", "ValidationError", "backend_name",
    "build_hamiltonians", "discord", "distinguishability_term", "enumerate_fragments",
    "eta_bound", "fidelity_B", "goe_sample", "holevo_chi", "information_report",
    "initial_state", "mutual_information", "observables_series", "partial_trace",
    "perez_trace", "propagate", "separable_projection", "staircase_trace", "trace_norm",
    "von_neumann_entropy",
]
