from gsorlab.theory.bounds import (
    ConditionBounds,
    ParamBounds,
    SpectralInterval,
    condition_number_bound,
    gsor_omega_upper,
    gsor_param_bounds,
    gsor_tau_upper,
    omega1_conditions,
    preconditioned_interval,
    satisfies_gsor_bounds,
    select_params,
    uzawa_conditions,
)
from gsorlab.theory.regions import GridAxis, parse_grid, region_scan
from gsorlab.theory.roots import (
    CubicCoeffs,
    QuadraticCoeffs,
    cubic_schur_test,
    quadratic_schur_test,
)
