import os
from collections import OrderedDict
from functools import partial

from .standard import make_standard
from .lie_algebras import make_lie_algebra
from .heavy_top import make_heavy_top
from .beanie import make_beanie
from .atiyah import make_trivial_atiyah
from .model_file import load_model_file

MODEL_BUILDERS = OrderedDict([
    ('harmonic', partial(make_standard, m=1, potential='harmonic', name='harmonic')),
    ('free-particle', partial(make_standard, m=2, potential='free', name='free-particle')),
    ('standard', make_standard),
    ('so3', partial(make_lie_algebra, 'so3')),
    ('se2', partial(make_lie_algebra, 'se2')),
    ('aff1', partial(make_lie_algebra, 'aff1')),
    ('heisenberg', partial(make_lie_algebra, 'heisenberg')),
    ('heavy-top', make_heavy_top),
    ('beanie', make_beanie),
    ('atiyah-so3', partial(make_trivial_atiyah, 'so3')),
    ('atiyah-aff1', partial(make_trivial_atiyah, 'aff1')),
])

MODEL_FILE_EXTENSIONS = ('.json', '.yaml', '.yml')

def get_model(model_id, **params):
    if model_id not in MODEL_BUILDERS:
        raise ValueError("Model {} not recognized.".format(model_id))
    return MODEL_BUILDERS[model_id](**params)

def is_model_file(source):
    return source.endswith(MODEL_FILE_EXTENSIONS) or os.path.sep in source

def load_model(source, validate=True):
    """Builtin name or path to a model file."""
    if is_model_file(source):
        return load_model_file(source, validate=validate)
    return get_model(source)

def list_models():
    return [get_model(name).describe() for name in MODEL_BUILDERS]
