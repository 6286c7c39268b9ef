"""Quantum and probabilistic finite automata.

Models, step-exact simulators, compilers between the models that preserve
acceptance values exactly, equivalence checking for the classical targets,
and a JSON file format with a CLI on top.
"""

from .analysis import (
    EquivalenceVerdict,
    RandomSpec,
    cutpoint_member,
    gpfa_equivalent,
    haar_unitary,
    random_gpfa,
    random_kwqfa,
    random_nqfa,
    random_projector_family,
    random_qfc,
)
from .convert import (
    first_accept_control,
    kwqfa_to_nqfa,
    kwqfa_to_qfc,
    nqfa_to_gpfa,
    pfa_to_gpfa,
    qfc_to_gpfa,
)
from .errors import (
    DimensionError,
    DocumentError,
    InputError,
    ModeError,
    ModelError,
    QfaError,
    ValidationError,
    Violation,
)
from .fixtures import (
    always_accept_kwqfa,
    binary_expansion_pfa,
    dephasing_nqfa,
    rotation_kwqfa,
    trivial_qfc,
)
from .linalg import (
    HermitianBasis,
    ProjectorFamily,
    devectorize,
    hermitian_basis,
    is_density_like,
    projector_family,
    validate_projector_family,
    validate_unitary,
    vectorize,
)
from .models import (
    DFA,
    GPFA,
    KWQFA,
    NQFA,
    PFA,
    QFC,
    Alphabet,
    Cutpoint,
    Word,
    build_gpfa,
    build_kwqfa,
    build_nqfa,
    build_pfa,
    build_qfc,
    gpfa_violations,
    nqfa_violations,
    qfc_violations,
)
from .serialization import parse, serialize
from .sim import (
    RunResult,
    StepRecord,
    acceptance_value,
    run_gpfa,
    run_kwqfa_pure,
    run_nqfa,
    run_qfc,
    sweep,
)

__all__ = [
    "Alphabet",
    "Cutpoint",
    "DFA",
    "DimensionError",
    "DocumentError",
    "EquivalenceVerdict",
    "GPFA",
    "HermitianBasis",
    "InputError",
    "KWQFA",
    "ModeError",
    "ModelError",
    "NQFA",
    "PFA",
    "ProjectorFamily",
    "QFC",
    "QfaError",
    "RandomSpec",
    "RunResult",
    "StepRecord",
    "ValidationError",
    "Violation",
    "Word",
    "acceptance_value",
    "always_accept_kwqfa",
    "binary_expansion_pfa",
    "build_gpfa",
    "build_kwqfa",
    "build_nqfa",
    "build_pfa",
    "build_qfc",
    "cutpoint_member",
    "dephasing_nqfa",
    "devectorize",
    "first_accept_control",
    "gpfa_equivalent",
    "gpfa_violations",
    "haar_unitary",
    "hermitian_basis",
    "is_density_like",
    "kwqfa_to_nqfa",
    "kwqfa_to_qfc",
    "nqfa_to_gpfa",
    "nqfa_violations",
    "parse",
    "pfa_to_gpfa",
    "projector_family",
    "qfc_to_gpfa",
    "qfc_violations",
    "random_gpfa",
    "random_kwqfa",
    "random_nqfa",
    "random_projector_family",
    "random_qfc",
    "rotation_kwqfa",
    "run_gpfa",
    "run_kwqfa_pure",
    "run_nqfa",
    "run_qfc",
    "serialize",
    "sweep",
    "trivial_qfc",
    "validate_projector_family",
    "validate_unitary",
    "vectorize",
]
