from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import logging

import numpy as np
import pandas as pd

from freq import SampledResponse
from miscc.errors import NonFinite, NonMonotoneFrequency, ParseError

logger = logging.getLogger(__name__)

FORMATS = {
    'complex': ['f_hz', 're', 'im'],
    'polar': ['f_hz', 'mag_db', 'phase_deg'],
}


def _line(row_index):
    # header is line 1
    return int(row_index) + 2


def load_response_csv(path, fmt='complex', kind='generic', label=None):
    """Read a measured or exported frequency response.

    Args:
        path: CSV file with a header row
        fmt: 'complex' (f_hz,re,im) or 'polar' (f_hz,mag_db,phase_deg)
        kind: response kind tag

    Return:
        SampledResponse
    """
    assert fmt in FORMATS, "Required one of {} but {} is given".format(list(FORMATS), fmt)
    columns = FORMATS[fmt]
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True,
                         encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise ParseError("empty file, header '{}' expected".format(','.join(columns)), 1)
    except pd.errors.ParserError as exc:
        raise ParseError(str(exc), 1)
    header = [c.strip() for c in df.columns]
    if header != columns:
        raise ParseError("header '{}' expected, got '{}'".format(','.join(columns), ','.join(header)), 1)

    data = np.empty((len(df), 3))
    for j, col in enumerate(df.columns):
        raw = df[col].str.strip()
        for i, text in enumerate(raw):
            try:
                # correctly rounded, %.17g text reads back unchanged
                if '_' in text:
                    raise ValueError(text)
                data[i, j] = float(text)
            except ValueError:
                raise ParseError("cannot read '{}' as a number".format(text), _line(i))

    finite = np.all(np.isfinite(data), axis=1)
    if not finite.all():
        raise NonFinite("non-finite value", _line(np.flatnonzero(~finite)[0]))
    f = data[:, 0]
    steps = np.flatnonzero(np.diff(f) <= 0)
    if len(steps):
        raise NonMonotoneFrequency("frequency {} does not increase".format(f[steps[0] + 1]),
                                   _line(steps[0] + 1))

    if fmt == 'complex':
        values = data[:, 1] + 1j * data[:, 2]
    else:
        values = 10.0 ** (data[:, 1] / 20.0) * np.exp(1j * np.deg2rad(data[:, 2]))
    label = path if label is None else label
    logger.info('Load response from: %s (%d points)', path, len(f))
    return SampledResponse(f, values, label=str(label), kind=kind)


def write_response_csv(response, path, fmt='complex'):
    """Inverse of load_response_csv; floats written with 17 significant digits."""
    assert fmt in FORMATS, "Required one of {} but {} is given".format(list(FORMATS), fmt)
    if fmt == 'complex':
        cols = [response.f, response.values.real, response.values.imag]
    else:
        b = response.bode()
        cols = [b.f, b.mag_db, b.phase_wrapped_deg]
    df = pd.DataFrame(dict(zip(FORMATS[fmt], cols)), columns=FORMATS[fmt])
    df.to_csv(path, index=False, float_format='%.17g', encoding='utf-8', lineterminator='\n')
    logger.info('Wrote %d points to %s', len(df), path)
