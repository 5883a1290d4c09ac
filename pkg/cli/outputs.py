"""
Result files.

CSV files start with ``# key: value`` metadata lines (command, config
hash, version, timestamp, plus command-specific lines), then one header
row and the data rows. Floats are written with ``%.12e``; NaN is written
as ``missing``. JSON summaries carry the same metadata under
``metadata``. Both use UTF-8 and LF line endings.
"""
import csv
import hashlib
import json
import logging
import math
from pathlib import Path

import numpy as np
from django.conf import settings
from django.utils import timezone

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12e'
MISSING_TOKEN = 'missing'


def config_hash(run_config):
    return hashlib.sha256(run_config.canonical_json().encode('utf-8')).hexdigest()


def run_metadata(command, run_config, **extra):
    metadata = {
        'command': command,
        'config_sha256': config_hash(run_config),
        'version': settings.SWINGUP_VERSION,
        'timestamp': timezone.now().isoformat(),
    }
    metadata.update(extra)
    return metadata


def format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return MISSING_TOKEN if math.isnan(value) else FLOAT_FORMAT % value
    return str(value)


def write_csv(path, columns, rows, metadata):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as handle:
        for key, value in metadata.items():
            handle.write(f'# {key}: {_header_value(value)}\n')
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    logger.info("Wrote %s", path)
    return path


def _header_value(value):
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(plain(value), sort_keys=True)
    return format_value(value)


def plain(value):
    """JSON-safe copy: numpy scalars and arrays unwrapped, NaN mapped to null."""
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(item) for item in value]
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    if isinstance(value, (float, np.floating)):
        return None if math.isnan(value) else float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': plain(value.real), 'im': plain(value.imag)}
    return value


def write_json(path, payload, metadata):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {'metadata': metadata, **plain(payload)}
    path.write_text(json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + '\n', encoding='utf-8')
    logger.info("Wrote %s", path)
    return path


def payload_lines(path):
    """Lines of a result file without its metadata, for reproducibility checks."""
    text = Path(path).read_text(encoding='utf-8')
    if Path(path).suffix == '.json':
        document = json.loads(text)
        document.pop('metadata', None)
        return json.dumps(document, sort_keys=True).splitlines()
    return [line for line in text.splitlines() if not line.startswith('#')]
