"""
Models Package
Domain types shared by the selection services
"""
from src.models.base import BaseModel
from src.models.element import Element, ElementSequence, MedianPolicy, make_sequence, keys_of
from src.models.algorithm import AlgorithmId, AlgorithmKind, SelectionRequest
from src.models.trace import TraceEvent, RunReport, TRACE_FIELDS
from src.models.generator_spec import GeneratorSpec, GeneratorKind
from src.models.experiment import (
    ExperimentSpec,
    GrowthFit,
    ScalingRow,
    TargetKind,
    TargetRule,
    SCALING_FIELDS,
)
from src.models.verification import Counterexample, VerificationSummary

__all__ = [
    'BaseModel',
    'Element',
    'ElementSequence',
    'MedianPolicy',
    'make_sequence',
    'keys_of',
    'AlgorithmId',
    'AlgorithmKind',
    'SelectionRequest',
    'TraceEvent',
    'RunReport',
    'TRACE_FIELDS',
    'GeneratorSpec',
    'GeneratorKind',
    'ExperimentSpec',
    'GrowthFit',
    'ScalingRow',
    'TargetKind',
    'TargetRule',
    'SCALING_FIELDS',
    'Counterexample',
    'VerificationSummary',
]
