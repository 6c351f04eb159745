"""torusloops: quenched random walk / CRSF cycle laboratory on the discrete torus."""

from .census import Cycle, CycleCensus, SummaryRecord, census_summary, find_cycles
from .exact import (
    CapExceededError,
    DyadicRational,
    ExactReport,
    IdentityReport,
    enumerate_crsf,
    exact_mnlp_partition,
    verify_identity,
)
from .rational import (
    ContinuedFraction,
    ConvergentTable,
    Regime,
    RegimePrediction,
    continued_fraction,
    convergents,
    expected_cycles_formula,
    predict_regime,
    select_j0,
)
from .render import render_svg
from .sampler import (
    GAMMA,
    SampleKey,
    StepField,
    field_from_bits,
    field_from_code,
    load_field,
    mix64,
    sample_field,
    save_field,
)
from .scan import ScanConfig, ScanRow, m_for_c, run_scan
from .torus import Direction, HomologyClass, StructureError, TorusDims, make_homology

__version__ = "0.1.0"

__all__ = [
    "Cycle",
    "CycleCensus",
    "SummaryRecord",
    "census_summary",
    "find_cycles",
    "CapExceededError",
    "DyadicRational",
    "ExactReport",
    "IdentityReport",
    "enumerate_crsf",
    "exact_mnlp_partition",
    "verify_identity",
    "ContinuedFraction",
    "ConvergentTable",
    "Regime",
    "RegimePrediction",
    "continued_fraction",
    "convergents",
    "expected_cycles_formula",
    "predict_regime",
    "select_j0",
    "render_svg",
    "GAMMA",
    "SampleKey",
    "StepField",
    "field_from_bits",
    "field_from_code",
    "load_field",
    "mix64",
    "sample_field",
    "save_field",
    "ScanConfig",
    "ScanRow",
    "m_for_c",
    "run_scan",
    "Direction",
    "HomologyClass",
    "StructureError",
    "TorusDims",
    "make_homology",
]
