"""
CSV and JSON writers for the command line front end.

Floats are written as '{:.11e}' (12 significant digits) and an infeasible
Hamming radius as the literal token INFEASIBLE. Nothing time or host dependent
is ever written, so equal inputs give byte-identical files.

"""
import contextlib
import csv
import json
import logging
import math
import numbers
import sys

import numpy as np

from packbound.bounds import INFEASIBLE

_LOGGER = logging.getLogger(__name__)

CSV = 'csv'
JSON = 'json'
FORMATS = (CSV, JSON)

INFEASIBLE_TOKEN = 'INFEASIBLE'
FLOAT_FORMAT = '{:.11e}'


def format_value(value):
    """Render one CSV cell."""
    if value is None:
        return ''
    if value is INFEASIBLE:
        return INFEASIBLE_TOKEN
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def json_value(value):
    """Convert numpy scalars and arrays, INFEASIBLE and non-finite floats to
    plain JSON values.

    """
    if value is INFEASIBLE:
        return INFEASIBLE_TOKEN
    if isinstance(value, dict):
        return {str(k): json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [json_value(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return value
    return value


class Table(object):
    """Rows with a fixed column order plus an optional summary mapping."""
    def __init__(self, fieldnames, rows=None, summary=None):
        self.fieldnames = list(fieldnames)
        self.rows = list(rows or [])
        self.summary = dict(summary or {})

    def append(self, row):
        self.rows.append(row)


@contextlib.contextmanager
def open_output(path):
    """Yield a text stream for *path*, standard output for None or '-'."""
    if path is None or path == '-':
        yield sys.stdout
        return
    with open(path, 'w', newline='', encoding='utf-8') as stream:
        yield stream
    _LOGGER.info('wrote %s', path)


def write_csv(table, stream):
    writer = csv.DictWriter(stream, fieldnames=table.fieldnames, extrasaction='ignore',
                            lineterminator='\n')
    writer.writeheader()
    for row in table.rows:
        writer.writerow({k: format_value(row.get(k)) for k in table.fieldnames})
    for key, value in table.summary.items():
        stream.write('# {0},{1}\n'.format(key, format_value(value)))


def write_json(obj, stream):
    json.dump(json_value(obj), stream, indent=2, sort_keys=True)
    stream.write('\n')


def write_table(table, stream, fmt=CSV):
    if fmt not in FORMATS:
        raise ValueError('unknown output format {0!r}'.format(fmt))
    if fmt == CSV:
        write_csv(table, stream)
    else:
        obj = {'columns': table.fieldnames, 'rows': table.rows}
        if table.summary:
            obj['summary'] = table.summary
        write_json(obj, stream)
