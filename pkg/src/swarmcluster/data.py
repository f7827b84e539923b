"""Dataset loading, the two-class artificial problem, and min-max scaling."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .numerics import make_rng

__all__ = [
    "Dataset",
    "DatasetError",
    "load_delimited",
    "dump_delimited",
    "load_builtin",
    "BUILTIN_DATASETS",
    "artificial_label",
    "generate_artificial",
    "min_max_normalize",
]


class DatasetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    vectors: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] == 0 or vectors.shape[1] == 0:
            raise DatasetError(f"{self.name}: expected a non-empty 2-D array of vectors, got shape {vectors.shape}")
        if self.labels is not None and len(self.labels) != vectors.shape[0]:
            raise DatasetError(f"{self.name}: {len(self.labels)} labels for {vectors.shape[0]} vectors")
        object.__setattr__(self, "vectors", vectors)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @property
    def n_vectors(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_features(self) -> int:
        return self.vectors.shape[1]

    @property
    def n_classes(self) -> int:
        return len(set(self.labels)) if self.labels is not None else 0


LabelColumn = Optional[str]  # "first", "last" or None


def _split_rows(text: str, delimiter: Optional[str]):
    if delimiter is None:
        for lineno, line in enumerate(text.splitlines(), start=1):
            if line.strip():
                yield lineno, line.split()
        return
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    for row in reader:
        if any(field.strip() for field in row):
            yield reader.line_num, [field.strip() for field in row]


def load_delimited(path: Union[str, Path], *, delimiter: Optional[str] = ",", label_column: LabelColumn = "last",
                   has_header: bool = False, drop_columns: Sequence[int] = (), name: Optional[str] = None) -> Dataset:
    """Read a delimiter-separated numeric table.

    ``delimiter=None`` splits on runs of whitespace. ``label_column`` is
    ``"first"``, ``"last"`` or ``None``; labels are kept as text.
    ``drop_columns`` lists raw column indices (0-based, before the label is
    removed) that are neither features nor labels, e.g. a row id.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"dataset file not found: {path}")
    return parse_delimited(path.read_text(), delimiter=delimiter, label_column=label_column,
                           has_header=has_header, drop_columns=drop_columns, name=name or path.stem,
                           source=str(path))


def parse_delimited(text: str, *, delimiter: Optional[str] = ",", label_column: LabelColumn = "last",
                    has_header: bool = False, drop_columns: Sequence[int] = (), name: str = "dataset",
                    source: str = "<text>") -> Dataset:
    if label_column not in ("first", "last", None):
        raise DatasetError(f"label_column must be 'first', 'last' or None, got {label_column!r}")
    rows = list(_split_rows(text, delimiter))
    if has_header and rows:
        rows = rows[1:]
    if not rows:
        raise DatasetError(f"{source}: no data rows")
    width = len(rows[0][1])
    drop = {c % width for c in drop_columns}
    if label_column == "first":
        label_idx: Optional[int] = 0
    elif label_column == "last":
        label_idx = width - 1
    else:
        label_idx = None
    feature_idx = [c for c in range(width) if c != label_idx and c not in drop]
    if not feature_idx:
        raise DatasetError(f"{source}: no feature columns left")

    vectors, labels = [], []
    for lineno, fields in rows:
        if len(fields) != width:
            raise DatasetError(f"{source}: line {lineno} has {len(fields)} fields, expected {width}")
        try:
            vectors.append([float(fields[c]) for c in feature_idx])
        except ValueError:
            bad = next(fields[c] for c in feature_idx if not _is_number(fields[c]))
            raise DatasetError(f"{source}: line {lineno}: non-numeric feature {bad!r}") from None
        if label_idx is not None:
            labels.append(fields[label_idx])
    arr = np.array(vectors, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DatasetError(f"{source}: features must be finite")
    return Dataset(name, arr, tuple(labels) if label_idx is not None else None)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def dump_delimited(dataset: Dataset, *, delimiter: str = ",", label_column: LabelColumn = "last") -> str:
    """Inverse of :func:`parse_delimited`; floats use their shortest round-trip repr."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    for i, vec in enumerate(dataset.vectors):
        row = [repr(float(v)) for v in vec]
        if dataset.labels is not None and label_column is not None:
            if label_column == "first":
                row.insert(0, dataset.labels[i])
            else:
                row.append(dataset.labels[i])
        writer.writerow(row)
    return out.getvalue()


BUILTIN_DATASETS = {
    # name: (file, expected rows, features, classes)
    "iris": ("iris.csv", 150, 4, 3),
    "wine": ("wine.csv", 178, 13, 3),
}


def load_builtin(name: str) -> Dataset:
    try:
        filename = BUILTIN_DATASETS[name][0]
    except KeyError:
        raise DatasetError(f"unknown built-in dataset {name!r}; choose from {sorted(BUILTIN_DATASETS)}") from None
    text = resources.files("swarmcluster.datasets").joinpath(filename).read_text()
    return parse_delimited(text, name=name, source=filename)


def artificial_label(z1: float, z2: float) -> int:
    return int(z1 >= 0.7 or (z1 <= 0.3 and z2 >= -0.2 - z1))


def generate_artificial(n: int = 400, seed: int = 0) -> Dataset:
    """``n`` points uniform on [-1, 1)^2, labelled 1 or 0 by the two-region rule."""
    if n < 1:
        raise DatasetError("n must be positive")
    points = make_rng(seed).uniform(-1.0, 1.0, size=(n, 2))
    z1, z2 = points[:, 0], points[:, 1]
    labels = np.where((z1 >= 0.7) | ((z1 <= 0.3) & (z2 >= -0.2 - z1)), 1, 0)
    return Dataset("artificial", points, tuple(str(x) for x in labels))


def min_max_normalize(dataset: Dataset) -> Dataset:
    """Rescale each feature onto [0, 1]; constant features become 0."""
    lo = dataset.vectors.min(axis=0)
    span = dataset.vectors.max(axis=0) - lo
    scaled = np.divide(dataset.vectors - lo, span, out=np.zeros_like(dataset.vectors), where=span > 0)
    return replace(dataset, vectors=np.clip(scaled, 0.0, 1.0))
