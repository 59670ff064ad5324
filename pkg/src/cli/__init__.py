from .common import EXIT_OK, EXIT_EXPECTATION, EXIT_USAGE, EXIT_NUMERIC, exit_code_for
from .run_validate import run_validate
from .run_simulate import run_simulate
from .run_modular import run_modular
from .run_volume import run_volume
from .run_catalog import run_list_models

RUNNERS = {
    'validate': run_validate,
    'simulate': run_simulate,
    'modular': run_modular,
    'volume': run_volume,
}
