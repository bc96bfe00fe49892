"""
Run artifacts on disk.

records.jsonl is the canonical archive (one RunRecord per line); summary.csv,
success_table.csv and the per-point profile and contour CSVs are the report
surface. Every float is written with 17 significant digits. Per-point files
live under points/<hash>/, where hash is a pure function of the parameters.
"""
import csv
import hashlib
import json
import logging
import threading
from pathlib import Path

import numpy as np

from ..exceptions import PersistenceError
from ..models import Mesh, ModelParams, ProfileSolution, RunRecord, SuccessTable
from ..serializers import ModelParamsSerializer, ProfileMetaSerializer, RunRecordSerializer
from .profile import rebuild_profile

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
RECORDS_FILE = "records.jsonl"
SUMMARY_FILE = "summary.csv"
TABLE_FILE = "success_table.csv"
POINTS_DIR = "points"
SUMMARY_HEADER = ["q", "E_A", "D", "status", "k_found", "R", "winding", "verdict"]


def param_hash(params: ModelParams) -> str:
    """First 16 hex digits of the SHA-256 of the canonical parameter JSON."""
    canonical = json.dumps(params.as_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def point_dir(out_dir, params: ModelParams) -> Path:
    return Path(out_dir) / POINTS_DIR / param_hash(params)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def _guard(path, action):
    try:
        return action()
    except OSError as exc:
        raise PersistenceError(str(exc), path=str(path)) from exc


# Profiles

def write_profile(solution: ProfileSolution, stem) -> tuple:
    """Write <stem>.json (metadata) and <stem>.csv (xi, u, z, y); returns both paths."""
    stem = Path(stem)
    meta_path, csv_path = stem.with_suffix(".json"), stem.with_suffix(".csv")
    meta = ProfileMetaSerializer(
        {
            "params": solution.params,
            "k_found": solution.k_found,
            "M_minus": solution.M_minus,
            "M_plus": solution.M_plus,
            "boundary_residuals": list(solution.boundary_residuals),
            "tolerance": solution.tolerance,
            "inflation": solution.inflation,
            "phase_value": solution.phase_value,
        }
    ).data
    columns = np.column_stack([solution.xi, solution.u, solution.z, solution.y])

    def write():
        stem.parent.mkdir(parents=True, exist_ok=True)
        meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True))
        np.savetxt(csv_path, columns, fmt=FLOAT_FORMAT, delimiter=",", header="xi,u,z,y", comments="")

    _guard(stem, write)
    return meta_path, csv_path


def read_profile(stem) -> ProfileSolution:
    stem = Path(stem)
    meta_path, csv_path = stem.with_suffix(".json"), stem.with_suffix(".csv")
    raw = _guard(meta_path, lambda: json.loads(meta_path.read_text()))
    columns = _guard(csv_path, lambda: np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2))
    serializer = ProfileMetaSerializer(data=raw)
    if not serializer.is_valid():
        raise PersistenceError(f"Invalid profile metadata: {serializer.errors}", path=str(meta_path))
    meta = dict(serializer.validated_data)
    params = ModelParamsSerializer().create(meta.pop("params"))
    xi, u, z, y = columns.T
    return rebuild_profile(params, xi, u, z, y, meta.pop("k_found"), meta)


# Contours and meshes

def write_mesh_csv(mesh: Mesh, path) -> Path:
    """Columns x, Y1 ... Yn; a debugging dump of any solver mesh."""
    path = Path(path)
    header = ",".join(["x"] + [f"Y{i + 1}" for i in range(mesh.dimension)])
    rows = np.column_stack([mesh.nodes, mesh.values.T])

    def write():
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, rows, fmt=FLOAT_FORMAT, delimiter=",", header=header, comments="")

    _guard(path, write)
    return path


def write_contour(samples, path) -> Path:
    """Re/Im of lambda, E and E_reduced for every contour sample."""
    path = Path(path)
    rows = np.array(
        [[s.lam.real, s.lam.imag, s.E.real, s.E.imag, s.E_reduced.real, s.E_reduced.imag] for s in samples]
    ).reshape(-1, 6)

    def write():
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, rows, fmt=FLOAT_FORMAT, delimiter=",",
                   header="re_lambda,im_lambda,re_E,im_E,re_E_reduced,im_E_reduced", comments="")

    _guard(path, write)
    return path


# Records

def record_to_json(record: RunRecord) -> str:
    return json.dumps(RunRecordSerializer(record).data, sort_keys=True)


def record_from_json(line: str) -> RunRecord:
    serializer = RunRecordSerializer(data=json.loads(line))
    serializer.is_valid(raise_exception=True)
    return serializer.save()


class RecordAppender:
    """Serializes record writes from any number of workers into one JSONL file."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def reset(self):
        """Start from an empty file."""
        with self._lock:
            _guard(self.path, lambda: self.path.unlink(missing_ok=True))

    def append(self, record: RunRecord):
        line = record_to_json(record) + "\n"

        def write():
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line)
                handle.flush()

        with self._lock:
            _guard(self.path, write)


def read_records(path) -> list:
    path = Path(path)
    if not path.exists():
        return []
    text = _guard(path, lambda: path.read_text(encoding="utf-8"))
    return [record_from_json(line) for line in text.splitlines() if line.strip()]


def write_records(records, path) -> Path:
    path = Path(path)
    text = "".join(record_to_json(r) + "\n" for r in records)

    def write():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")

    _guard(path, write)
    return path


# Report tables

def summary_rows(records):
    for record in records:
        p = record.params
        yield [
            _fmt(p.q),
            _fmt(p.E_A),
            _fmt(p.D),
            record.profile_status.value,
            _fmt(record.k_found),
            _fmt(record.bound.R if record.bound else None),
            _fmt(record.winding),
            str(record.verdict) if record.verdict else "",
        ]


def _write_csv(path, header, rows):
    path = Path(path)

    def write():
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    _guard(path, write)
    return path


def write_summary(records, path) -> Path:
    return _write_csv(path, SUMMARY_HEADER, summary_rows(records))


def write_success_table(table: SuccessTable, path) -> Path:
    rows = [[d, e, converged, attempted] for d, e, converged, attempted in table.rows()]
    return _write_csv(path, ["D", "E_A", "converged", "attempted"], rows)


def persist(records, out_dir, table: SuccessTable = None, profiles=None, contours: bool = True) -> Path:
    """
    Write records.jsonl, summary.csv and success_table.csv for records in
    the given order, plus per-point profile files for every profile passed in
    profiles (a mapping from param hash to ProfileSolution) and, with
    contours, the contour samples carried by each verdict.
    """
    out_dir = Path(out_dir)
    records = list(records)
    table = table or SuccessTable.from_records(records)
    write_records(records, out_dir / RECORDS_FILE)
    write_summary(records, out_dir / SUMMARY_FILE)
    write_success_table(table, out_dir / TABLE_FILE)
    for record in records:
        profile = (profiles or {}).get(record.param_hash)
        if profile is not None:
            write_profile(profile, point_dir(out_dir, record.params) / "profile")
        if contours and record.verdict is not None and record.verdict.samples:
            write_contour(record.verdict.samples, point_dir(out_dir, record.params) / "contour.csv")
    logger.info("Persisted %d records to %s", len(records), out_dir)
    return out_dir
