"""Monte Carlo rate estimators, scaling-regime drivers and certified
lattice constructions."""

from .densities import (ADDITIVE_FUNCTIONALS, domination_bounds_via_covering,
                        dominating_upper_by_cells, hexagon_partition_density,
                        lattice_covering_density, lattice_packing_density,
                        unit_ball_volume, zeta_star_lower)
from .lln import (WEIGHTED_FUNCTIONALS, default_dense_radius, lln_dense_run,
                  lln_thermo_run)
from .reports import (CSV_COLUMNS, DensityConstant, EstimatorReport,
                      merge_reports, reference_constant)
from .rho import (DEFAULT_EXPECTED_CAP, estimate_rho_box, estimate_rho_cluster,
                  rho_curve_sweep, sweep_structure_flags)

__all__ = [
    "ADDITIVE_FUNCTIONALS",
    "CSV_COLUMNS",
    "DEFAULT_EXPECTED_CAP",
    "DensityConstant",
    "EstimatorReport",
    "WEIGHTED_FUNCTIONALS",
    "default_dense_radius",
    "domination_bounds_via_covering",
    "dominating_upper_by_cells",
    "estimate_rho_box",
    "estimate_rho_cluster",
    "hexagon_partition_density",
    "lattice_covering_density",
    "lattice_packing_density",
    "lln_dense_run",
    "lln_thermo_run",
    "merge_reports",
    "reference_constant",
    "rho_curve_sweep",
    "sweep_structure_flags",
    "unit_ball_volume",
    "zeta_star_lower",
]
