"""Contour quadrature for causality of the dualized two-point functions."""
from .contour import (ContourError, ContourSpec, ConvergenceWarning, QuadResult,
                      contour_independence, integral_I, log_principal, log_rotated,
                      staple_integral)
from .dualize import (DEFAULT_GRID, CausalityReport, DualizationError, DualizationTask,
                      causality_report, dualize_pointwise)
from .response import (ResponseExponents, ResponseSingularity, collapse_residual,
                       response_scaling, scaling_function, scaling_samples)
