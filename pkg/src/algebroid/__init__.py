from .chart import BaseChart
from .fields import BaseField, CovectorField, zero_field, constant_field
from .algebroid import ChartedAlgebroid, AlgebroidCovector, lie_algebra_algebroid, structure_from_brackets
from .structure import anchor_compat_residual, jacobi_residual, max_structure_residuals
from .differential import differential_of_function, differential_of_section
from .errors import (AlgebroidError, OutOfChartError, NumericError, CapabilityError, ModelError,
                     ModelFileError, PreconditionError, StiffnessError, TrajectoryEscapeError)
