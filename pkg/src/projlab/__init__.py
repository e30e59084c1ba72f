"""Projector tests for group-symmetric and commuting structure, built as simulated circuits."""

from __future__ import annotations

from .circuit import Circuit, OutcomeDistribution, ShotTally, measure_distribution, sample, simulate
from .constructions import (
    ResourceCount,
    build_antisym_test,
    build_commutator,
    build_concatenation,
    build_diff_proj,
    build_gbose_test,
    build_projector_uncompute,
    build_res_identity,
    build_schmidt_test,
    build_sk_sym_test,
    build_sym_anti_concat,
    build_werner_test,
)
from .errors import ProjlabError
from .estimators import hoeffding_T
from .groups import FiniteGroup, Permutation, UnitaryRep, barenco_encoding, standard_rep, symmetric_group
from .oracle import ProjectorMatrix, projector_anti, projector_sym
from .tensor import ComplexTensorState, DensityOperator, Operator, RegisterLayout

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "OutcomeDistribution",
    "ShotTally",
    "measure_distribution",
    "sample",
    "simulate",
    "ResourceCount",
    "build_antisym_test",
    "build_commutator",
    "build_concatenation",
    "build_diff_proj",
    "build_gbose_test",
    "build_projector_uncompute",
    "build_res_identity",
    "build_schmidt_test",
    "build_sk_sym_test",
    "build_sym_anti_concat",
    "build_werner_test",
    "ProjlabError",
    "hoeffding_T",
    "FiniteGroup",
    "Permutation",
    "UnitaryRep",
    "barenco_encoding",
    "standard_rep",
    "symmetric_group",
    "ProjectorMatrix",
    "projector_anti",
    "projector_sym",
    "ComplexTensorState",
    "DensityOperator",
    "Operator",
    "RegisterLayout",
]
