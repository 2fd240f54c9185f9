"""Planar germ-grain (Boolean) model simulation and valuation densities.

The package provides an exact convex-polygon kernel, a catalog of valuations
(intrinsic volumes, Minkowski tensors, circular harmonics, support data),
translative and kinematic integral formulas with Monte Carlo cross-checks,
Boolean-model simulation with exact inclusion-exclusion evaluation, and
density estimation with intensity recovery for isotropic and non-isotropic
models.
"""

from .geom2d import (ConvexPolygon, SphereMeasure, SupportMeasurePieces, Window,
                     area_measure, from_literal, intersect, intrinsic_volumes,
                     minkowski_sum, rect, reflect, regular_ngon, segment, square,
                     steiner_point, support, support_measure_pieces, support_vector)
from .valuations import (HarmonicIndex, SymTensor, Valuation, alpha_iso, c_area,
                         c_tensor, c_upper, centered_support, constant,
                         harmonic_iv, harm_dim, kappa, minkowski_tensor,
                         mixed_area, omega, rotation_average_harmonic,
                         val_centered_support, val_harmonic, val_intrinsic,
                         val_intrinsic_all, val_tensor)
from .integral import (MCResult, enumerate_mix, enumerate_mix_reduced,
                       iterated_translative_mc, kernel_mixed_area, kinematic_mc,
                       mixed_functional_V, pkf_rhs, translative_mc)
from .boolmodel import (BooleanModelSpec, GrainModel, OrientationLaw, Realization,
                        ScaleLaw, eval_boundary_corrected, eval_union,
                        hitting_count, sample_realization)
from .estimate import (DensityReport, FitResult, GrainProcessDensities,
                       estimate_densities, expected_valuation_window,
                       grain_process_densities, harmonic_series_constants,
                       invert_isotropic, invert_kernel, miles_forward,
                       tensor_isotropy_check, window_bias_identity)

__version__ = "0.1.0"
