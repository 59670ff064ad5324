from .src.algebroid import ChartedAlgebroid, BaseChart, lie_algebra_algebroid
from .src.poisson import PhasePoint, MechanicalHamiltonian, hamiltonian_vector_field, poisson_bracket
from .src.modular import modular_section, modular_character, verify_certificate
from .src.volume import divergence, jacobian_log_det, zero_section_obstruction
from .src.integrate import IntegratorConfig, integrate
from .src.models import get_model, load_model, list_models

__all__ = ['ChartedAlgebroid', 'BaseChart', 'lie_algebra_algebroid',
           'PhasePoint', 'MechanicalHamiltonian', 'hamiltonian_vector_field', 'poisson_bracket',
           'modular_section', 'modular_character', 'verify_certificate',
           'divergence', 'jacobian_log_det', 'zero_section_obstruction',
           'IntegratorConfig', 'integrate',
           'get_model', 'load_model', 'list_models']
