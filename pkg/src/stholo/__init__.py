"""Space-time holomorphic solutions of the 1D Lagrangian compressible Navier-Stokes equations."""

from .core import (DEFAULT_TOL, PointStatus, PressureLaw, Regime, RegimeTag, SingularPressure,
                   SolutionParams, Tolerances, classify_regime, inv_v, validate_pressure_law)
from .closed_form import (LatticeKind, LatticePoint, Window, enumerate_lattice, eval_u, eval_v,
                          eval_v_prime, initial_data, residue_at_pole)
from .quadrature import (IntegratedField, OdeProblem, PoleEncounter, StepUnderflow, Trajectory,
                         integrate_path, ode_rhs, quadrature_map, velocity_from_volume)
from .sampler import FieldSample, GridSpec, sample_grid, space_slice, time_slice
from .verifier import (ResidualReport, cr_residual, mass_residual, momentum_residual, verify_fields,
                       verify_grid)

__version__ = "0.1.0"
