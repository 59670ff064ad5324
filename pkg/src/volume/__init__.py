from .divergence import DivergenceReport, divergence, modular_vector_field_value, vertical_derivative
from .drift import VolumeDriftReport, jacobian_log_det, drift_batch
from .obstruction import zero_section_obstruction
