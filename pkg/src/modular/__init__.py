from .volumes import (VolumeSpec, PhaseDensity, UnimodularityCertificate, basic_density, zero_density,
                      metric_lambda_log_density, metric_fiber_density)
from .modular_section import (modular_section, modular_character, modular_cocycle_residual,
                              unimodularity_residual, verify_certificate, certificate_points,
                              basic_density_for, modular_section_field, action_volume_residual)
