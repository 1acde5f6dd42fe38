"""Optimization trajectories, group-relative regret labels and dataset files."""

from collections import defaultdict
from dataclasses import dataclass, replace
import json
import logging
import struct

import numpy as np

from zeroshotopt.exceptions import FormatError, InputError

logger = logging.getLogger(__name__)

LENGTHS = (10, 20, 30, 40)
DEGENERATE_TOL = 1e-12

DATASET_MAGIC = b"ZSOT"
DATASET_VERSION = 1
MAX_DIMENSION = 64


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    function_id: int
    dimension: int
    method_id: str
    m: int
    points: np.ndarray
    values: np.ndarray
    regret: float
    length: int
    norm_bounds: tuple

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64).reshape(-1, self.dimension)
        values = np.asarray(self.values, dtype=np.float64).ravel()
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "norm_bounds", (float(self.norm_bounds[0]),
                                                 float(self.norm_bounds[1])))
        if points.shape[0] != values.shape[0] or points.shape[0] != self.m + self.length:
            raise InputError(
                f"record has {points.shape[0]} points / {values.shape[0]} values, "
                f"expected m + length = {self.m + self.length}"
            )
        if not 0.0 <= self.regret <= 1.0:
            raise InputError(f"regret label {self.regret} outside [0, 1]")

    @property
    def n_evals(self):
        return self.m + self.length

    def scaled_values(self):
        """Values mapped to [0, 1] by the stored group bounds."""
        lo, hi = self.norm_bounds
        span = hi - lo
        if span <= DEGENERATE_TOL:
            return np.full_like(self.values, 0.5)
        return (self.values - lo) / span

    def same_as(self, other):
        return (
            self.function_id == other.function_id
            and self.dimension == other.dimension
            and self.method_id == other.method_id
            and self.m == other.m
            and self.length == other.length
            and self.regret == other.regret
            and self.norm_bounds == other.norm_bounds
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.values, other.values)
        )


def _running_best(values, m, L):
    return float(np.min(values[: m + L]))


class FunctionGroup:
    """All trajectories run on one function from one shared initial sample set."""

    def __init__(self, records):
        records = list(records)
        if not records:
            raise InputError("a function group needs at least one record")
        first = records[0]
        for r in records[1:]:
            if r.function_id != first.function_id or r.m != first.m:
                raise InputError("group records must share function id and m")
            if not (np.array_equal(r.points[: r.m], first.points[: first.m])
                    and np.array_equal(r.values[: r.m], first.values[: first.m])):
                raise InputError(
                    f"record {r.method_id} does not share the group's initial samples"
                )
        self.function_id = first.function_id
        self.m = first.m
        self.records = records

    def __len__(self):
        return len(self.records)

    def f_star(self, L):
        """Best value any member reached within its first ``m + L`` evaluations."""
        return min(_running_best(r.values, self.m, min(L, r.length)) for r in self.records)

    def norm_bounds(self):
        lo = min(float(r.values.min()) for r in self.records)
        hi = max(float(r.values.max()) for r in self.records)
        return lo, hi


def regret_value(values, m, L, f_star):
    best = _running_best(values, m, L)
    median = float(np.median(values[:m]))
    denom = median - f_star
    if denom <= DEGENERATE_TOL:
        return 0.0
    ratio = (best - f_star) / denom
    return float(np.sqrt(min(max(ratio, 0.0), 1.0)))


def compute_regret(record, group, L, fixed_reference=False):
    """Square-rooted, group-normalized regret at horizon ``L``.

    With ``fixed_reference`` the group optimum at the record's full horizon is
    used instead of the horizon-``L`` optimum.
    """
    if L < 1 or L > record.length:
        raise InputError(f"horizon {L} exceeds record length {record.length}")
    ref_horizon = record.length if fixed_reference else L
    return regret_value(record.values, record.m, L, group.f_star(ref_horizon))


def label_group(records):
    """Attach regret labels and shared normalization bounds to a group's records."""
    group = FunctionGroup(records)
    bounds = group.norm_bounds()
    labelled = [
        replace(r, regret=compute_regret(r, group, r.length), norm_bounds=bounds)
        for r in group.records
    ]
    return FunctionGroup(labelled)


def make_record(function_id, method_id, m, history, norm_bounds=(0.0, 1.0)):
    """Unlabelled record from a :class:`~zeroshotopt.history.History`."""
    return TrajectoryRecord(
        function_id=int(function_id),
        dimension=history.dimension,
        method_id=str(method_id),
        m=int(m),
        points=history.points,
        values=history.values,
        regret=0.0,
        length=len(history) - m,
        norm_bounds=norm_bounds,
    )


def augment_axis_swap(record, permutation):
    """Reorder coordinates: new axis ``j`` is old axis ``permutation[j]``."""
    perm = np.asarray(permutation)
    if perm.shape != (record.dimension,) or not np.array_equal(np.sort(perm),
                                                              np.arange(record.dimension)):
        raise InputError(f"invalid permutation {permutation!r} for d={record.dimension}")
    return replace(record, points=record.points[:, perm])


def augment_flip(record, flip_mask):
    mask = np.asarray(flip_mask, dtype=bool)
    if mask.shape != (record.dimension,):
        raise InputError(f"flip mask must have length {record.dimension}")
    return replace(record, points=np.where(mask, 1.0 - record.points, record.points))


def truncate(record, L, group, fixed_reference=False):
    """Keep the first ``m + L`` evaluations and relabel regret at horizon ``L``.

    ``group`` supplies the per-horizon optimum the label is measured against.
    """
    if L not in LENGTHS or L > record.length:
        raise InputError(f"cannot truncate a length-{record.length} record to L={L}")
    regret = compute_regret(record, group, L, fixed_reference)
    n = record.m + L
    return replace(record, points=record.points[:n], values=record.values[:n],
                   regret=regret, length=L)


def group_records(records):
    """Group records by function id, preserving first-seen order."""
    groups = defaultdict(list)
    for r in records:
        groups[r.function_id].append(r)
    return {fid: FunctionGroup(rs) for fid, rs in groups.items()}


# -- dataset files ------------------------------------------------------------

_REC_HEAD = struct.Struct("<QH")
_REC_MID = struct.Struct("<HHddd")


def _pack_record(r):
    name = r.method_id.encode("utf-8")
    return b"".join([
        _REC_HEAD.pack(r.function_id, r.dimension),
        struct.pack("<H", len(name)), name,
        _REC_MID.pack(r.m, r.length, r.regret, r.norm_bounds[0], r.norm_bounds[1]),
        np.ascontiguousarray(r.points, dtype="<f8").tobytes(),
        np.ascontiguousarray(r.values, dtype="<f8").tobytes(),
    ])


class DatasetWriter:
    """Append-only writer; the record count in the header is patched on close."""

    def __init__(self, path):
        self._fh = open(path, "wb")
        self._fh.write(DATASET_MAGIC + struct.pack("<IQ", DATASET_VERSION, 0))
        self.count = 0

    def write(self, record):
        self._fh.write(_pack_record(record))
        self.count += 1

    def close(self):
        if self._fh.closed:
            return
        self._fh.seek(8)
        self._fh.write(struct.pack("<Q", self.count))
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_dataset(records, path):
    with DatasetWriter(path) as writer:
        for r in records:
            writer.write(r)
    return writer.count


def _read_exact(fh, n, what, offset):
    data = fh.read(n)
    if len(data) != n:
        raise FormatError(f"truncated {what}: wanted {n} bytes, got {len(data)}", offset)
    return data


def read_dataset(path):
    """Stream records from a binary dataset file."""
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) < 16 or header[:4] != DATASET_MAGIC:
            raise FormatError("not a trajectory dataset (bad magic)", 0)
        version, count = struct.unpack("<IQ", header[4:])
        if version != DATASET_VERSION:
            raise FormatError(f"unsupported dataset version {version}", 4)
        for _ in range(count):
            offset = fh.tell()
            fid, d = _REC_HEAD.unpack(_read_exact(fh, _REC_HEAD.size, "record header", offset))
            (name_len,) = struct.unpack("<H", _read_exact(fh, 2, "method id length", offset))
            try:
                method = _read_exact(fh, name_len, "method id", offset).decode("utf-8")
            except UnicodeDecodeError as exc:
                raise FormatError(f"method id is not UTF-8 ({exc})", offset) from None
            m, T, regret, lo, hi = _REC_MID.unpack(
                _read_exact(fh, _REC_MID.size, "record fields", offset))
            if not (1 <= d <= MAX_DIMENSION) or not (0.0 <= regret <= 1.0) or not lo <= hi:
                raise FormatError(
                    f"implausible record fields (d={d}, regret={regret}, bounds=({lo}, {hi}))",
                    offset,
                )
            n = m + T
            pts = np.frombuffer(_read_exact(fh, 8 * n * d, "points", offset), "<f8")
            vals = np.frombuffer(_read_exact(fh, 8 * n, "values", offset), "<f8")
            yield TrajectoryRecord(fid, d, method, m, pts.reshape(n, d).astype(np.float64),
                                   vals.astype(np.float64), regret, T, (lo, hi))
        if fh.read(1):
            raise FormatError("trailing bytes after last record", fh.tell() - 1)


def record_to_dict(r):
    return {
        "function_id": r.function_id,
        "dimension": r.dimension,
        "method_id": r.method_id,
        "m": r.m,
        "length": r.length,
        "regret": r.regret,
        "norm_bounds": list(r.norm_bounds),
        "points": r.points.tolist(),
        "values": r.values.tolist(),
    }


def record_from_dict(data):
    return TrajectoryRecord(
        int(data["function_id"]), int(data["dimension"]), data["method_id"], int(data["m"]),
        np.asarray(data["points"], dtype=np.float64), np.asarray(data["values"], dtype=np.float64),
        float(data["regret"]), int(data["length"]), tuple(data["norm_bounds"]),
    )


def write_dataset_jsonl(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(record_to_dict(r)) + "\n")


def read_dataset_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield record_from_dict(json.loads(line))
