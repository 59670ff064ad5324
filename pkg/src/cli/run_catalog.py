from models.catalog import list_models
from utils.general_utils import dump_json

from .common import EXIT_OK, open_output

def run_list_models(args):
    with open_output(args.output) as f:
        dump_json(list_models(), f)
    return EXIT_OK
