"""
Report Service for benchmark output.

JSON reports are ``{meta: {...}, rows: [...]}`` with sorted keys; CSV reports
are a header row followed by one row per result, columns fixed per report kind.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

from marshmallow import ValidationError

from ..errors import ReportError
from ..models import Report
from ..schemas import ROW_SCHEMAS, ReportSchema

logger = logging.getLogger(__name__)

FORMATS = ('json', 'csv')

CSV_COLUMNS = {
    'table1': ['method', 'range_max', 'total'],
    'accumulated': ['method', 'range_max', 'total'],
    'table2': ['method', 'range_max', 'best', 'average', 'median', 'worst', 'runs'],
    'run_stats': ['method', 'range_max', 'best', 'average', 'median', 'worst', 'runs'],
    'table3': ['bits', 'method', 'samples', 'average'],
    'table4': ['exponent', 'printed_additions', 'printed_valid', 'printed_violations',
               'best_length', 'best_chain'],
    'oracle': ['exponent', 'length', 'chain'],
    'oracle_table': ['limit', 'accumulated'],
}


def _cell(value, column: str):
    if isinstance(value, float) and column in ('average', 'median'):
        return f'{value:.2f}'
    if isinstance(value, (list, tuple)):
        return ' '.join(str(item) for item in value)
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return value


def render_report(report: Report, fmt: str = 'json') -> str:
    """Serialize ``report``; raises ReportError for empty reports or unknown formats."""
    if not report.rows:
        raise ReportError('Report has no rows', details={'kind': report.kind})
    if fmt not in FORMATS:
        raise ReportError(f'Unknown report format "{fmt}"', details={'format': fmt})

    if fmt == 'json':
        meta = dict(report.meta, kind=report.kind)
        return json.dumps({'meta': meta, 'rows': report.rows}, indent=2, sort_keys=True) + '\n'

    columns = CSV_COLUMNS.get(report.kind) or sorted(report.rows[0])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in report.rows:
        writer.writerow([_cell(row.get(column), column) for column in columns])
    return buffer.getvalue()


def write_report(report: Report, fmt: str = 'json', path=None) -> Optional[Path]:
    """
    Write ``report`` to ``path``.

    Nothing is written when rendering fails; I/O failures surface as ReportError.
    """
    text = render_report(report, fmt)
    if path is None:
        return None
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
    except OSError as err:
        raise ReportError(f'Cannot write report to {path}: {err.strerror}', details={'path': str(path)}) from err
    logger.info('Report %s written to %s (%s)', report.kind, path, fmt)
    return path


def read_report(path) -> Report:
    """Parse a JSON report written by ``write_report``."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except OSError as err:
        raise ReportError(f'Cannot read report {path}: {err.strerror}', details={'path': str(path)}) from err
    except json.JSONDecodeError as err:
        raise ReportError(f'Report {path} is not valid JSON: {err.msg}', details={'path': str(path)}) from err
    try:
        return ReportSchema().load(data)
    except ValidationError as err:
        raise ReportError(f'Report {path} is malformed', details=err.messages) from err


def load_rows(report: Report) -> List:
    """Rebuild domain rows (AccumulatedResult, RunStats, ...) from a parsed report."""
    schema_cls = ROW_SCHEMAS.get(report.kind)
    if schema_cls is None:
        raise ReportError(f'No row type for report kind "{report.kind}"', details={'kind': report.kind})
    try:
        return schema_cls(many=True).load(report.rows)
    except ValidationError as err:
        raise ReportError('Report rows are malformed', details=err.messages) from err


def single_row_report(kind: str, row: Dict, meta: Optional[Dict] = None) -> Report:
    return Report(kind=kind, meta=dict(meta or {}), rows=[row])
