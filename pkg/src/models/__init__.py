from .bundle import ModelBundle
from .standard import make_standard, harmonic_potential
from .lie_algebras import make_lie_algebra, lie_structure, lie_casimirs
from .heavy_top import make_heavy_top
from .beanie import make_beanie
from .atiyah import make_trivial_atiyah
from .catalog import MODEL_BUILDERS, get_model, load_model, list_models
from .model_file import (load_model_file, model_from_spec, base_field_from_expression, phase_field_from_expression,
                         density_from_expression)
