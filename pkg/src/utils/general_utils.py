import os
import csv
import json
import logging
import multiprocessing as mp

THREADS_ENV = 'ALGEBROID_THREADS'

def initialize_logger(artifact_path=None, name=None, level='INFO'):
    if name is None:
        logger = logging.getLogger()
    else:
        logger = logging.getLogger(name)
    logger.setLevel(level)

    handler_console = logging.StreamHandler()
    logger.addHandler(handler_console)

    if artifact_path is not None:
        os.makedirs(artifact_path, exist_ok=True)
        logfile = os.path.join(artifact_path, 'log.txt')
        handler_file = logging.FileHandler(logfile)
        logger.addHandler(handler_file)
    return logger

def close_logger(logger=None):
    if logger is None:
        logger = logging.getLogger()
    handlers = logger.handlers
    for h in handlers:
        h.close()
    for i in range(len(logger.handlers)):
        logger.handlers.pop()

def get_nb_procs(requested=1):
    """Number of worker processes, capped by ALGEBROID_THREADS (0 = auto)."""
    cap = os.environ.get(THREADS_ENV, '')
    try:
        cap = int(cap) if cap != '' else None
    except ValueError:
        logging.warning("Ignoring malformed %s=%r", THREADS_ENV, cap)
        cap = None

    if requested == 0:
        requested = mp.cpu_count()
    if cap is not None:
        cap = mp.cpu_count() if cap == 0 else cap
        requested = min(requested, cap)
    return max(1, requested)

def format_float(x):
    return '{:.17g}'.format(float(x))

def rows_to_csv(header, rows, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) for v in row])

def dump_json(report, stream):
    stream.write(json.dumps(report, indent=2, allow_nan=True))
    stream.write('\n')
