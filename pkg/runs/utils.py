import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor

from django.conf import settings


def ordered_map(func, tasks, workers=None):
    """Apply `func` to every task, in a process pool when workers > 1, keeping task order."""
    tasks = list(tasks)
    workers = settings.WORKERS if workers is None else workers
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(func, tasks))


def complex_fsum(values):
    """Correctly rounded sum of complex values, independent of how they were produced."""
    values = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def dump_report(payload, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2))
    return path


def write_table(header, rows, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    return path


RESIDUAL_HEADER = ["q", "D1", "D2", "D3", "D4", "t", "|bruteforce|", "|prediction|", "relResidual"]


def residual_rows(reports):
    return [
        [r.quadruple.q, *r.quadruple.D, r.quadruple.t, abs(r.brute_force), abs(r.prediction), r.relative_residual]
        for r in reports
    ]
