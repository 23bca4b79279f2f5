"""File formats: embedding/label input, score output, binary model persistence.

Parsers reject rather than coerce: unknown dtypes, Fortran-order arrays,
non-finite entries, and truncated payloads are hard errors that name the
offending byte offset or row. Writers go through a temp file and an atomic
rename so no partially-written file is ever visible.

Model file layout (version 1, all integers and reals little-endian):

    offset  size        field
    0       4           magic "HCK1"
    4       u32         format_version (= 1)
    8       u32         label_count
    12      u32         dim
    16      f64         lambda
    24      u8          k_mode (0 = fixed, 1 = adaptive)
    25      u32         k value (0 when adaptive)
    29      f64         sigma_multiplier
    37      f64         tpr_target
    45      u8          lambda_mode (0 = per_observation, 1 = pooled)
    46      u8          centroid_snap (0/1)
    47      u8          axis_mode (0 = data, 1 = random)
    48      u64         seed
    56      ...         label_count class blocks:
                            u32 label
                            dim x f64 centroid
                            u32 cone_count
                            cone_count cone blocks:
                                dim x f32 axis
                                f64 cos_opening
                                f64 radial_boundary

Axes are stored at 32-bit (inputs are typically 32-bit anyway); lambda and all
per-cone statistics stay at 64-bit, so a save/load round trip reproduces
scores to 1e-6 and the threshold exactly.
"""

from __future__ import annotations

import ast
import csv
import os
import struct
import tempfile

import numpy as np

from .contour import BuildConfig, ClassContour, ContourModel
from .errors import (
    BadMagicError,
    EmptySetError,
    NonFiniteError,
    ShapeMismatchError,
    TruncatedError,
    UnsupportedDtypeError,
    VersionUnsupportedError,
)
from .geometry import EmbeddingSet
from .scoring import ScoreResult

_NPY_MAGIC = b"\x93NUMPY"
_MODEL_MAGIC = b"HCK1"
_MODEL_VERSION = 1

_EMBEDDING_DESCRS = {"<f4": np.float32, "<f8": np.float64}
_LABEL_DESCRS = {"<i4": np.int32, "<i8": np.int64}

_K_MODES = {"fixed": 0, "adaptive": 1}
_LAMBDA_MODES = {"per_observation": 0, "pooled": 1}
_AXIS_MODES = {"data": 0, "random": 1}


def atomic_write(path, payload: bytes) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# NPY (version 1.0, C-order only)


def _parse_npy(raw: bytes, path, allowed: dict, ndim: int) -> np.ndarray:
    name = os.fspath(path)
    if len(raw) < 10 or raw[:6] != _NPY_MAGIC:
        raise BadMagicError(f"{name}: not an NPY file (bad magic at byte offset 0)")
    major, minor = raw[6], raw[7]
    if (major, minor) != (1, 0):
        raise UnsupportedDtypeError(f"{name}: NPY version {major}.{minor} unsupported; need 1.0")
    (header_len,) = struct.unpack_from("<H", raw, 8)
    header_end = 10 + header_len
    if len(raw) < header_end:
        raise TruncatedError(f"{name}: header truncated at byte offset {len(raw)}")
    try:
        header = ast.literal_eval(raw[10:header_end].decode("latin1"))
        descr = header["descr"]
        fortran = header["fortran_order"]
        shape = tuple(int(s) for s in header["shape"])
    except Exception as exc:
        raise ShapeMismatchError(f"{name}: unparseable NPY header ({exc})") from exc
    if descr not in allowed:
        raise UnsupportedDtypeError(
            f"{name}: dtype {descr!r} unsupported; accepted: {sorted(allowed)}"
        )
    if fortran:
        raise UnsupportedDtypeError(f"{name}: Fortran-order arrays are rejected")
    if len(shape) != ndim:
        raise ShapeMismatchError(f"{name}: expected a {ndim}-D array, header says shape {shape}")
    dtype = np.dtype(allowed[descr]).newbyteorder("<")
    count = int(np.prod(shape)) if shape else 1
    expected = header_end + count * dtype.itemsize
    if len(raw) < expected:
        raise TruncatedError(
            f"{name}: payload ends at byte offset {len(raw)}, expected {expected}"
        )
    if len(raw) > expected:
        raise ShapeMismatchError(f"{name}: {len(raw) - expected} trailing bytes after payload")
    array = np.frombuffer(raw[header_end:expected], dtype=dtype).reshape(shape)
    if np.issubdtype(array.dtype, np.floating) and not np.isfinite(array).all():
        flat = int(np.flatnonzero(~np.isfinite(array.ravel()))[0])
        row = flat // shape[1] if ndim == 2 else flat
        offset = header_end + flat * dtype.itemsize
        raise NonFiniteError(f"{name}: non-finite value in row {row} (byte offset {offset})")
    return array


def _npy_bytes(array: np.ndarray) -> bytes:
    descr = array.dtype.str
    shape = array.shape
    shape_repr = f"({shape[0]},)" if len(shape) == 1 else repr(tuple(int(s) for s in shape))
    text = "{'descr': '%s', 'fortran_order': False, 'shape': %s, }" % (descr, shape_repr)
    header = text.encode("latin1")
    pad = (-(10 + len(header) + 1)) % 64
    full = header + b" " * pad + b"\n"
    return _NPY_MAGIC + b"\x01\x00" + struct.pack("<H", len(full)) + full + array.tobytes("C")


# ---------------------------------------------------------------------------
# Embeddings and labels


def _read_csv_matrix(path) -> np.ndarray:
    rows: list[list[float]] = []
    width = None
    with open(path, newline="") as handle:
        for line_no, record in enumerate(csv.reader(handle), start=1):
            if not record or all(cell.strip() == "" for cell in record):
                continue
            try:
                values = [float(cell) for cell in record]
            except ValueError:
                if not rows and width is None:
                    continue  # header row
                raise ShapeMismatchError(f"{path}: non-numeric cell on line {line_no}")
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ShapeMismatchError(
                    f"{path}: line {line_no} has {len(values)} columns, expected {width}"
                )
            for value in values:
                if not np.isfinite(value):
                    raise NonFiniteError(f"{path}: non-finite value on line {line_no}")
            rows.append(values)
    if not rows:
        raise EmptySetError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


def _detect_format(path, fmt: str | None) -> str:
    if fmt is not None:
        return fmt
    suffix = os.path.splitext(os.fspath(path))[1].lower()
    return "csv" if suffix == ".csv" else "npy"


def read_embeddings(path, fmt: str | None = None) -> EmbeddingSet:
    """Load an n x d embedding matrix from an NPY or CSV file (unlabeled)."""
    fmt = _detect_format(path, fmt)
    if fmt == "npy":
        with open(path, "rb") as handle:
            raw = handle.read()
        data = _parse_npy(raw, path, _EMBEDDING_DESCRS, ndim=2)
    elif fmt == "csv":
        data = _read_csv_matrix(path)
    else:
        raise ShapeMismatchError(f"unknown embedding format {fmt!r}")
    return EmbeddingSet(np.asarray(data, dtype=np.float64))


def read_labels(path, fmt: str | None = None) -> np.ndarray:
    """Load a length-n integer label vector from an NPY or CSV file."""
    fmt = _detect_format(path, fmt)
    if fmt == "npy":
        with open(path, "rb") as handle:
            raw = handle.read()
        return _parse_npy(raw, path, _LABEL_DESCRS, ndim=1).astype(np.int64)
    if fmt == "csv":
        matrix = _read_csv_matrix(path)
        if matrix.shape[1] != 1:
            raise ShapeMismatchError(f"{path}: labels must be a single column")
        column = matrix[:, 0]
        labels = column.astype(np.int64)
        if (labels != column).any():
            raise ShapeMismatchError(f"{path}: labels must be integers")
        return labels
    raise ShapeMismatchError(f"unknown label format {fmt!r}")


def write_embeddings(path, data, fmt: str | None = None, dtype: str = "<f8") -> None:
    """Write an embedding matrix as NPY (f4/f8) or CSV."""
    array = np.ascontiguousarray(np.asarray(data, dtype=np.float64))
    fmt = _detect_format(path, fmt)
    if fmt == "npy":
        if dtype not in _EMBEDDING_DESCRS:
            raise UnsupportedDtypeError(f"dtype {dtype!r} not in {sorted(_EMBEDDING_DESCRS)}")
        atomic_write(path, _npy_bytes(array.astype(np.dtype(dtype))))
    elif fmt == "csv":
        body = "\n".join(",".join(f"{v:.17g}" for v in row) for row in array)
        atomic_write(path, (body + "\n").encode())
    else:
        raise ShapeMismatchError(f"unknown embedding format {fmt!r}")


def write_labels(path, labels, fmt: str | None = None) -> None:
    """Write a label vector as 1-D i8 NPY or single-column CSV."""
    array = np.ascontiguousarray(np.asarray(labels, dtype=np.int64))
    fmt = _detect_format(path, fmt)
    if fmt == "npy":
        atomic_write(path, _npy_bytes(array))
    elif fmt == "csv":
        atomic_write(path, ("\n".join(str(int(v)) for v in array) + "\n").encode())
    else:
        raise ShapeMismatchError(f"unknown label format {fmt!r}")


# ---------------------------------------------------------------------------
# Score dumps


def write_scores(path, results: list[ScoreResult]) -> None:
    """CSV dump ``index,score,decision`` with `inf` for the sentinel."""
    lines = ["index,score,decision"]
    for index, result in enumerate(results):
        lines.append(f"{index},{result.score:.17g},{'ID' if result.is_id else 'OOD'}")
    atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_scores(path) -> tuple[np.ndarray, list[bool]]:
    """Parse a score CSV back into (scores, decisions)."""
    scores: list[float] = []
    decisions: list[bool] = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["index", "score", "decision"]:
            raise ShapeMismatchError(f"{path}: unexpected score CSV header {header}")
        for record in reader:
            if not record:
                continue
            scores.append(float(record[1]))
            decisions.append(record[2] == "ID")
    return np.asarray(scores, dtype=np.float64), decisions


# ---------------------------------------------------------------------------
# Model persistence


class _Cursor:
    def __init__(self, raw: bytes, name: str):
        self.raw = raw
        self.name = name
        self.pos = 0

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.raw):
            raise TruncatedError(
                f"{self.name}: file ends at byte offset {len(self.raw)}, "
                f"needed {self.pos + size}"
            )
        values = struct.unpack_from(fmt, self.raw, self.pos)
        self.pos += size
        return values

    def take_array(self, dtype: np.dtype, count: int) -> np.ndarray:
        size = dtype.itemsize * count
        if self.pos + size > len(self.raw):
            raise TruncatedError(
                f"{self.name}: file ends at byte offset {len(self.raw)}, "
                f"needed {self.pos + size}"
            )
        array = np.frombuffer(self.raw, dtype=dtype, count=count, offset=self.pos)
        self.pos += size
        return array


def save_model(path, model: ContourModel) -> None:
    """Serialize a model to the versioned little-endian binary format."""
    config = model.config
    k_mode = _K_MODES["adaptive" if config.k == "adaptive" else "fixed"]
    k_value = 0 if config.k == "adaptive" else int(config.k)
    parts = [
        _MODEL_MAGIC,
        struct.pack("<III", _MODEL_VERSION, model.label_count, model.dim),
        struct.pack("<d", model.lam),
        struct.pack(
            "<BIddBBBQ",
            k_mode,
            k_value,
            config.sigma_multiplier,
            config.tpr_target,
            _LAMBDA_MODES[config.lambda_mode],
            1 if config.centroid_snap else 0,
            _AXIS_MODES[config.axis_mode],
            config.seed,
        ),
    ]
    cone_dtype = np.dtype([("axis", "<f4", (model.dim,)), ("cos", "<f8"), ("b", "<f8")])
    for contour in model.contours:
        parts.append(struct.pack("<I", contour.label))
        parts.append(contour.centroid.astype("<f8").tobytes("C"))
        parts.append(struct.pack("<I", contour.cone_count))
        block = np.empty(contour.cone_count, dtype=cone_dtype)
        block["axis"] = contour.axes.astype("<f4")
        block["cos"] = contour.cos_openings
        block["b"] = contour.radial_boundaries
        parts.append(block.tobytes("C"))
    atomic_write(path, b"".join(parts))


def load_model(path) -> ContourModel:
    """Parse a model file; wrong magic, versions, or truncation are rejected."""
    name = os.fspath(path)
    with open(path, "rb") as handle:
        raw = handle.read()
    if len(raw) < 4 or raw[:4] != _MODEL_MAGIC:
        raise BadMagicError(f"{name}: bad magic at byte offset 0")
    cursor = _Cursor(raw, name)
    cursor.pos = 4
    version, label_count, dim = cursor.take("<III")
    if version != _MODEL_VERSION:
        raise VersionUnsupportedError(f"{name}: format version {version} unsupported")
    (lam,) = cursor.take("<d")
    k_mode, k_value, sigma, tpr, lambda_mode, snap, axis_mode, seed = cursor.take("<BIddBBBQ")
    mode_names = {v: k for k, v in _K_MODES.items()}
    lambda_names = {v: k for k, v in _LAMBDA_MODES.items()}
    axis_names = {v: k for k, v in _AXIS_MODES.items()}
    if k_mode not in mode_names or lambda_mode not in lambda_names or axis_mode not in axis_names:
        raise ShapeMismatchError(f"{name}: unknown enum value in config block")
    config = BuildConfig(
        k="adaptive" if mode_names[k_mode] == "adaptive" else int(k_value),
        sigma_multiplier=float(sigma),
        tpr_target=float(tpr),
        centroid_snap=bool(snap),
        lambda_mode=lambda_names[lambda_mode],
        axis_mode=axis_names[axis_mode],
        seed=int(seed),
    )
    cone_dtype = np.dtype([("axis", "<f4", (dim,)), ("cos", "<f8"), ("b", "<f8")])
    contours = []
    for _ in range(label_count):
        (label,) = cursor.take("<I")
        centroid = cursor.take_array(np.dtype("<f8"), dim).astype(np.float64)
        (cone_count,) = cursor.take("<I")
        block = cursor.take_array(cone_dtype, cone_count)
        axes = block["axis"].astype(np.float64).reshape(cone_count, dim)
        contours.append(
            ClassContour(
                label,
                centroid,
                axes,
                block["cos"].astype(np.float64),
                block["b"].astype(np.float64),
            )
        )
    if cursor.pos != len(raw):
        raise ShapeMismatchError(f"{name}: {len(raw) - cursor.pos} trailing bytes after payload")
    return ContourModel(contours, lam, config)
