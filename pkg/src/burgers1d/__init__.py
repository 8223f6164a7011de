"""Semi-discrete finite-element / Pade solvers for the 1D viscous Burgers equation.

Spatial formulations: least squares (``mefmq``), Galerkin (``mefg``) and SUPG
(``supg``). Time integration: the R11 (Crank-Nicolson) and R22 Pade schemes.
"""
from ._jit import NUMBA_ENABLED
from .assembly import (LinearizedElementCoeffs, apply_dirichlet, assemble_galerkin,
                       assemble_lsq, assemble_supg, compute_tau, linearize)
from .banded import AssembledSystem, BandedMatrix
from .benchmarks import BenchmarkCase, example1_exact, example2_exact, get_case, initial_field
from .errors import (AssemblyError, BurgersError, ConfigurationError, DivergenceError,
                     DomainError, PoleError, SingularSystemError, SolverFailure)
from .fields import SolutionField
from .mesh import LocalBasis, Mesh1D, build_uniform_mesh, eval_local_basis, interpolate
from .norms import ErrorReport, compute_errors, total_variation
from .pade import (PadeRational, PadeScheme, TimeGrid, build_lsq_stage_system,
                   build_stage_system, make_scheme, pade_eval, pade_rational)
from .runner import RunConfig, TableSpec, emit_profiles, preset_table, run_single, run_table
from .solver import solve_block_tridiag, solve_dense_oracle
from .stepping import StepperContext, advance, integrate

__version__ = "0.1.0"
