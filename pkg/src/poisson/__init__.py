from .phase import PhasePoint, ScalarPhaseField, phase_point, to_array, from_array, coordinate_field, quadratic_field
from .bivector import (poisson_bivector, poisson_bracket, hamiltonian_vector_field, vector_field_from_gradient,
                       hamiltonian_jacobian, coordinate_divergence, HamiltonianFlow)
from .hamiltonian import MechanicalHamiltonian, mechanical_rhs
