"""CSV/JSON emission for distributions, sample logs and experiment tables.

All writers are atomic (temp file in the target directory, then rename),
so an interrupted run never leaves a truncated result file.  Floats are
written with shortest round-trip repr, making outputs byte-identical for
identical (config, seed, partition count).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile

from .distribution import OutputDistribution
from .experiments import FilterRow, ScalingRow
from .fock import format_occupation, total_photons
from .sampling import SampleRecord


def atomic_write_text(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def distribution_csv(dist: OutputDistribution) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["configuration", "probability", "amplitude_re", "amplitude_im"])
    for key in dist.configurations():
        amp = dist.amplitudes.get(key) if dist.amplitudes is not None else None
        writer.writerow(
            [
                format_occupation(key),
                _fmt(dist.probabilities[key]),
                _fmt(amp.real if amp is not None else None),
                _fmt(amp.imag if amp is not None else None),
            ]
        )
    return buffer.getvalue()


def write_distribution_csv(dist: OutputDistribution, path) -> None:
    atomic_write_text(path, distribution_csv(dist))


def samples_csv(records: list[SampleRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["trial", "outcome", "total", "branch_ideal"])
    for record in records:
        writer.writerow(
            [
                record.trial,
                format_occupation(record.outcome),
                total_photons(record.outcome),
                _fmt(record.branch_ideal),
            ]
        )
    return buffer.getvalue()


def write_samples_csv(records: list[SampleRecord], path) -> None:
    atomic_write_text(path, samples_csv(records))


_SCALING_COLUMNS = [
    "n",
    "m",
    "p",
    "analytic_ideal_probability",
    "empirical_ideal_fraction",
    "tvd_ideal_noisy",
    "tvd_ideal_postselected",
    "postselect_success",
    "exact",
]


def scaling_csv(rows: list[ScalingRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_SCALING_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, column)) for column in _SCALING_COLUMNS])
    return buffer.getvalue()


def write_scaling_csv(rows: list[ScalingRow], path) -> None:
    atomic_write_text(path, scaling_csv(rows))


def filter_csv(rows: list[FilterRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "analytic_success", "empirical_success"])
    for row in rows:
        writer.writerow(
            [row.n, _fmt(row.analytic_success), _fmt(row.empirical_success)]
        )
    return buffer.getvalue()


def write_filter_csv(rows: list[FilterRow], path) -> None:
    atomic_write_text(path, filter_csv(rows))


def write_summary_json(payload: dict, path) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
