# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

"""Published error tables for the benchmark cases.

Rows are keyed by the mesh size denominator n (h = 1/n), or by the
refinement level for the interface case. Values follow the metric order of
wg_fem.postprocess.METRICS.
"""

from .postprocess import METRICS


def _rows(table):
    return {key: dict(zip(METRICS, values)) for key, values in table.items()}


def _rates(values):
    return dict(zip(METRICS, values))


REFERENCE = {
    "1a": {
        "rows": _rows({
            8: (7.14e-01, 2.16e-02, 4.05e-02, 1.01e+0, 1.30e-01, 4.43e-02),
            16: (3.56e-01, 5.61e-03, 1.01e-02, 5.04e-01, 6.53e-02, 1.12e-02),
            32: (1.78e-01, 1.41e-03, 2.53e-03, 2.51e-01, 3.27e-02, 2.86e-03),
            64: (8.90e-02, 3.55e-04, 6.32e-04, 1.25e-01, 1.63e-02, 7.15e-04),
            128: (4.45e-02, 8.88e-05, 1.57e-04, 6.29e-02, 8.18e-03, 1.79e-04),
        }),
        "rates": _rates((1.0012, 1.9837, 2.0014, 1.0024, 0.9984, 1.9879)),
    },
    "1b": {
        "rows": _rows({
            8: (7.10e-01, 1.75e-02, 3.08e-02, 1.01e+0, 1.29e-01, 3.68e-02),
            16: (3.55e-01, 4.59e-03, 7.69e-03, 5.04e-01, 6.52e-02, 9.54e-03),
            32: (1.78e-01, 1.16e-03, 1.92e-03, 2.51e-01, 3.27e-02, 2.39e-03),
            64: (8.90e-02, 2.90e-04, 4.81e-04, 1.25e-01, 1.63e-02, 6.01e-04),
            128: (4.45e-02, 7.27e-05, 1.20e-04, 6.29e-02, 8.18e-03, 1.50e-04),
        }),
        "rates": _rates((0.9993, 1.9808, 1.9999, 1.0015, 0.9968, 1.9861)),
    },
    "1c": {
        "rows": _rows({
            8: (1.55e-01, 3.18e-03, 1.14e-02, 1.95e-01, 4.51e-02, 1.12e-02),
            16: (7.87e-02, 8.20e-04, 2.90e-03, 9.82e-02, 2.25e-02, 3.18e-03),
            32: (3.94e-02, 2.06e-04, 7.29e-04, 4.92e-02, 1.12e-02, 8.40e-04),
            64: (1.97e-02, 5.17e-05, 1.82e-04, 2.46e-02, 5.64e-03, 2.15e-04),
            128: (9.87e-03, 1.29e-05, 4.56e-05, 1.23e-02, 2.82e-03, 5.46e-05),
        }),
        "rates": _rates((0.9958, 1.9876, 1.9926, 0.9971, 1.0001, 1.9262)),
    },
    "2": {
        "rows": _rows({
            8: (5.61e-02, 3.32e-03, 6.60e-03, 5.75e-02, 5.48e-03, 1.27e-02),
            16: (4.03e-02, 1.38e-03, 2.81e-03, 4.09e-02, 2.59e-03, 4.90e-03),
            32: (2.95e-02, 5.68e-04, 1.16e-03, 2.96e-02, 1.23e-03, 2.21e-03),
            64: (2.15e-02, 2.35e-04, 4.83e-04, 2.15e-02, 5.97e-04, 1.16e-03),
            128: (1.55e-02, 9.93e-05, 2.02e-04, 1.55e-02, 2.91e-04, 5.99e-04),
        }),
        "rates": _rates((0.4614, 1.2687, 1.2594, 0.4697, 1.0579, 1.0912)),
    },
    "3a": {
        "rows": _rows({
            8: (1.88e-01, 6.40e-03, 1.47e-02, 2.54e-01, 1.49e-02, 4.30e-02),
            16: (1.36e-01, 2.20e-03, 5.28e-03, 1.84e-01, 7.66e-03, 3.01e-02),
            32: (9.74e-02, 7.62e-04, 1.86e-03, 1.32e-01, 3.89e-03, 2.12e-02),
            64: (6.93e-02, 2.65e-04, 6.57e-04, 9.42e-02, 1.96e-03, 1.49e-02),
            128: (4.92e-02, 9.33e-05, 2.32e-04, 6.69e-02, 9.88e-04, 1.05e-02),
        }),
        "rates": _rates((0.4852, 1.5251, 1.4992, 0.4827, 0.9805, 0.5066)),
    },
    "3b": {
        "rows": _rows({
            8: (4.93e-01, 1.69e-02, 3.58e-02, 6.65e-01, 2.56e-02, 1.25e-01),
            16: (4.18e-01, 7.07e-03, 1.52e-02, 5.66e-01, 1.31e-02, 1.05e-01),
            32: (3.53e-01, 2.94e-03, 6.39e-03, 4.79e-01, 6.72e-03, 8.85e-02),
            64: (2.98e-01, 1.22e-03, 2.68e-03, 4.04e-01, 3.42e-03, 7.44e-02),
            128: (2.51e-01, 5.14e-04, 1.12e-03, 3.40e-01, 1.73e-03, 6.25e-02),
        }),
        "rates": _rates((0.2437, 1.2613, 1.2489, 0.2417, 0.9717, 0.2505)),
    },
    "4": {
        "rows": _rows({
            0: (1.07e-01, 3.97e-03, 9.95e-03, 1.47e-01, 2.60e-02, 1.97e-02),
            1: (9.76e-02, 2.92e-03, 6.44e-03, 1.26e-01, 1.33e-02, 1.94e-02),
            2: (9.30e-02, 2.51e-03, 5.11e-03, 1.16e-01, 7.01e-03, 1.91e-02),
            3: (9.12e-02, 2.21e-03, 4.44e-03, 1.11e-01, 3.95e-03, 1.88e-02),
            4: (8.98e-02, 1.95e-03, 3.91e-03, 1.07e-01, 2.55e-03, 1.84e-02),
        }),
        "rates": _rates((0.0604, 0.2446, 0.3229, 0.1084, 0.8461, 0.0239)),
    },
    "5a": {
        "rows": _rows({
            8: (1.48e+0, 1.95e-02, 4.61e-02, 2.70e+0, 1.29e-01, 4.13e-02),
            16: (7.39e-01, 5.11e-03, 1.16e-02, 1.35e+0, 6.53e-02, 1.06e-02),
            32: (3.69e-01, 1.29e-03, 2.92e-03, 6.80e-01, 3.27e-02, 2.67e-03),
            64: (1.84e-01, 3.24e-04, 7.33e-04, 3.40e-01, 1.63e-02, 6.68e-04),
            128: (9.23e-02, 8.12e-05, 1.83e-04, 1.70e-01, 8.18e-03, 1.66e-04),
        }),
        "rates": _rates((1.0010, 1.9793, 1.9942, 0.9972, 0.9975, 1.9906)),
    },
    "5b": {
        "rows": _rows({
            4: (7.98e+0, 6.80e-02, 2.93e-01, 1.58e+1, 2.52e-01, 1.49e-01),
            8: (3.89e+0, 2.07e-02, 7.44e-02, 8.18e+0, 1.30e-01, 4.22e-02),
            16: (1.91e+0, 5.43e-03, 1.88e-02, 4.12e+0, 6.53e-02, 1.09e-02),
            32: (9.54e-01, 1.37e-03, 4.72e-03, 2.06e+0, 3.27e-02, 2.74e-03),
            64: (4.76e-01, 3.44e-04, 1.18e-03, 1.03e+0, 1.63e-02, 6.84e-04),
        }),
        "rates": _rates((1.0161, 1.9160, 1.9897, 0.9857, 0.9883, 1.9492)),
    },
    "6": {
        "rows": _rows({
            8: (1.85e-01, 1.62e-02, 4.27e-02, 1.22e+00, 1.34e-01, 3.63e-02),
            12: (8.53e-02, 7.69e-03, 1.94e-02, 8.19e-01, 9.14e-02, 1.96e-02),
            16: (4.86e-02, 4.42e-03, 1.10e-02, 6.15e-01, 6.89e-02, 1.18e-02),
            20: (3.13e-02, 2.85e-03, 7.07e-03, 4.92e-01, 5.52e-02, 7.78e-03),
        }),
        "rates": _rates((1.9389, 1.8984, 1.9618, 0.9914, 0.9737, 1.6779)),
    },
}

# rates against the number of triangles of the locally refined initial mesh
KELLOGG_SWEEP = {
    268: _rates((0.0604, 0.2446, 0.3229, 0.1084, 0.8461, 0.0239)),
    300: _rates((0.0750, 0.2623, 0.3489, 0.1206, 0.8699, 0.0373)),
    332: _rates((0.0888, 0.2818, 0.3772, 0.1329, 0.8912, 0.0487)),
    364: _rates((0.1020, 0.3031, 0.4079, 0.1454, 0.9099, 0.0586)),
    396: _rates((0.1148, 0.3266, 0.4411, 0.1581, 0.9260, 0.0673)),
    428: _rates((0.1273, 0.3522, 0.4766, 0.1711, 0.9396, 0.0749)),
    460: _rates((0.1396, 0.3802, 0.5145, 0.1843, 0.9509, 0.0817)),
    492: _rates((0.1519, 0.4105, 0.5548, 0.1978, 0.9602, 0.0878)),
    524: _rates((0.1641, 0.4432, 0.5972, 0.2117, 0.9678, 0.0932)),
}


def reference_for(case_id):
    return REFERENCE.get(case_id)


def compare(report, key_of):
    """Per level and metric: (computed, reference, relative delta) for the
    levels with a published row, and (computed, reference, delta) per rate.

    Args:
        report: The ErrorReport of a run
        key_of: Maps a LevelRecord to its reference row key
    """
    reference = reference_for(report.case)
    if reference is None:
        return None
    levels = []
    for record in report.levels:
        row = reference["rows"].get(key_of(record))
        if row is None:
            continue
        entries = {}
        for metric in METRICS:
            computed = record.norms[metric]
            published = row[metric]
            entries[metric] = (computed, published, (computed - published) / published)
        levels.append((record, entries))
    rates = {}
    for metric, computed in report.rates().items():
        if computed is not None:
            published = reference["rates"][metric]
            rates[metric] = (computed, published, computed - published)
    return {"levels": levels, "rates": rates}
