"""Certified analysis of a four-dimensional curvature-pinching envelope.

Subpackages:

* :mod:`pinchlab.curvature` -- exact 4D curvature algebra: tensor storage,
  orthogonal decomposition, Ricci spectra, pinching quantities, and the
  eigenframe pair-sum derivatives.
* :mod:`pinchlab.models` -- closed-form curvature of the sharp model spaces
  and automated verification of their boundary relations.
* :mod:`pinchlab.interval` -- validated interval arithmetic.
* :mod:`pinchlab.certify` -- the worst-case envelope, deterministic
  branch-and-bound positivity certification, exact threshold constants and
  auxiliary inequality checks.
* :mod:`pinchlab.flow` -- the reduced eigenvalue flow under selectable Weyl
  policies, with reproducible fixed-step integration.
* :mod:`pinchlab.cli` -- the ``pinchlab`` command-line tool.
"""

from .certify import (
    Box,
    BudgetExhaustedError,
    Case,
    CertResult,
    Constants,
    DomainViolation,
    EnvelopeNegative,
    ThresholdViolation,
    Witness,
    approx_min,
    aux_checks,
    certify,
    classify_case,
    constants,
    constants_eval,
    delta_of,
    envelope_I,
    envelope_unnormalized,
)
from .curvature import (
    CurvatureTensor,
    Decomposition,
    DegenerateSpectrum,
    PinchProfile,
    RicciSpectrum,
    SpectrumParams,
    SymmetryViolation,
    WeylTensor,
    ZeroScalar,
    build_curvature,
    decompose,
    invariant_norms,
    jacobi_eigh,
    pair_derivatives,
    pinch_residual,
    recompose,
    ricci_spectrum,
    spectrum_params,
)
from .flow import (
    ConstantWeyl,
    FlowState,
    FlowTrace,
    StepTooLarge,
    WorstStarStarWeyl,
    WorstStarWeyl,
    ZeroWeyl,
    integrate,
    serialize_trace,
    trace_diagnostics,
    vector_field,
)
from .interval import Interval
from .models import ModelKind, ModelReport, ModelSpace, model_curvature, remark_report

__version__ = "0.1.0"
