"""Exact computations with depth filtrations of graded vertex algebras and
their twisted modules: mode arithmetic over the rationals, filtration and
single-mode subspace families, associated graded structures, and the check
suites verifying their structural properties."""

from .backend import HeisenbergBackend, VABackend
from .errors import (
    ContainmentError,
    CutoffExceededError,
    InsufficientCutoffError,
    NonHomogeneousError,
    SectorMismatchError,
    TableValidationError,
    TwistFiltError,
    UnsupportedPeriodError,
)
from .filtration import (
    DepthFiltration,
    FiltrationReport,
    algebra_depth_filtration,
    algebra_single_mode_span,
    check_small_lemmas,
    cofiniteness_report,
    module_depth_filtration,
    module_single_mode_span,
    verify_relations,
)
from .grstruct import (
    GrAlgebra,
    GrElement,
    GrModule,
    ZhuPoisson,
    check_generating_spanning,
    check_generation,
    check_twisted_vpa_module_axioms,
    check_vpa_axioms,
)
from .linalg import GradedSubspace, Subspace
from .report import CheckOutcome, ReportSection, dump_report, fraction_str
from .tables import (
    TableBackend,
    TwistedTableModule,
    export_module_table,
    export_table,
    load_table_backend,
)
from .twisted import TwistedFockModule, TwistedModule
from .vectors import LinComb

__version__ = "0.1.0"

__all__ = [
    "CheckOutcome",
    "ContainmentError",
    "CutoffExceededError",
    "DepthFiltration",
    "FiltrationReport",
    "GrAlgebra",
    "GrElement",
    "GrModule",
    "GradedSubspace",
    "HeisenbergBackend",
    "InsufficientCutoffError",
    "LinComb",
    "NonHomogeneousError",
    "ReportSection",
    "SectorMismatchError",
    "Subspace",
    "TableBackend",
    "TableValidationError",
    "TwistFiltError",
    "TwistedFockModule",
    "TwistedModule",
    "TwistedTableModule",
    "UnsupportedPeriodError",
    "VABackend",
    "ZhuPoisson",
    "algebra_depth_filtration",
    "algebra_single_mode_span",
    "check_generating_spanning",
    "check_generation",
    "check_small_lemmas",
    "check_twisted_vpa_module_axioms",
    "check_vpa_axioms",
    "cofiniteness_report",
    "dump_report",
    "export_module_table",
    "export_table",
    "fraction_str",
    "load_table_backend",
    "module_depth_filtration",
    "module_single_mode_span",
    "verify_relations",
]
