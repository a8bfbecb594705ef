"""Cyclic codes over finite chain rings, classified by cyclotomic partitions."""

from .codes import (
    CodeContext,
    CyclicCode,
    build,
    code_dual,
    code_meet,
    code_sum,
    enumerate_all,
    make_context,
    trace_code,
)
from .cyclotomic import CycContext, CycPartition, CycSet, q_closure
from .errors import (
    ChainCodesError,
    ContextMismatch,
    InputError,
    NotCyclicError,
    NotUnitError,
    SizeLimitError,
)
from .linalg import RMatrix, standard_form
from .ring import RingElement, RingSpec, make_ring

__version__ = "0.1.0"

__all__ = [
    "CodeContext", "CyclicCode", "build", "code_dual", "code_meet", "code_sum",
    "enumerate_all", "make_context", "trace_code",
    "CycContext", "CycPartition", "CycSet", "q_closure",
    "ChainCodesError", "ContextMismatch", "InputError", "NotCyclicError", "NotUnitError",
    "SizeLimitError",
    "RMatrix", "standard_form",
    "RingElement", "RingSpec", "make_ring",
]
