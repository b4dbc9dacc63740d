"""Deterministic 1D1V simulator for a relativistic transport equation
coupled to a wave equation for its forcing potential."""

from .config import Config, parse_config, render_config
from .coupling import RunOptions, initial_state, run, step
from .diagnostics import (DiagnosticsRecord, GronwallConstants,
                          derivative_transport_audit, energy, gronwall_audit,
                          momentum_support)
from .division import (TEST_FUNCTIONS, TestFunction, division_sweep,
                       pair_lhs, pair_m_dxY, pair_rhs)
from .errors import (ConfigError, DomainTooSmallError,
                     LightConeViolationError, OutOfDomainError,
                     UnsupportedConfigurationError, VlasovWaveError)
from .grid import PhaseGrid, build_grid
from .interp import interp_1d, interp_2d
from .picard import (PicardIterate, PicardReport, audit_bt,
                     contraction_ratio, phi, picard_solve)
from .presets import (InitialData, Profile1D, Profile2D, make_profile_1d,
                      make_profile_2d)
from .states import DistributionState, FieldState
from .transport import evaluate_f, moments, trace_backward, v_hat
from .wave import (FieldHistory, KernelTable, SourceHistory, dalembert_a,
                   dt_a_representation, dxdt_a_representation, kernel_table,
                   step_b_fields)

__version__ = "0.1.0"
