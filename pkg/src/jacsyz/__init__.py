"""Exact Jacobian syzygies of curve arrangements: closed forms checked against Gröbner computations."""

from .arrangement import Arrangement, ArrangementError, GenericityReport, normalize_coordinates, validate
from .closedform import (
    build_omega_basis,
    build_relations,
    compute_d0,
    predict,
    surface_experiment,
    verify_generation,
    verify_resolution,
)
from .diffforms import DifferentialForm, from_form, koszul_forms, to_form
from .field import QQ, PrimeField, RationalField, field_from_descriptor
from .groebner import (
    FreeModule,
    GradedModuleMap,
    groebner_basis,
    is_artinian_quotient,
    minimal_generators,
    normal_form,
    syzygy_module,
)
from .oracle import graded_kernel_oracle
from .polyring import ParseError, Polynomial, PolyRing, parse
from .report import RunConfig, emit_report, exponent_notation, run, run_pipeline
from .resolution import BettiTable, minimal_free_resolution, resolve

__version__ = "0.1.0"
