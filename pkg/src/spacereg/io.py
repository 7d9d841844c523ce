"""CSV ingestion and canonical number formatting.

Attribute tables are `id,x,y`. Distances come in two shapes: square
(first row `id,<id1>,<id2>,...`, one row per unit, diagonal ignored) or
long (header `from,to,distance`, every unordered pair exactly once).
Either way the result is reordered to the attribute table's id order,
which is the canonical unit order everywhere downstream.

Numbers are serialized with 15 significant digits; values are pushed
through that formatting once at report-assembly time so that what is
printed, what is parsed back, and what sits in the report object are
the same floats.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .data import RawAttributeTable
from .errors import (
    DuplicatePair,
    MissingPair,
    ParseError,
    SchemaError,
    UnknownId,
)
from .weights import DistanceMatrix, SpatialWeightMatrix

DIST_FORMATS = ("square", "long")


def sig15(value: float) -> str:
    """Format with 15 significant digits."""
    return format(float(value), ".15g")


def canonical_float(value: float | None) -> float | None:
    """The float obtained by round-tripping through 15 significant digits.

    Non-finite values come back as None: they mark statistics that are
    undefined for the given input and serialize as JSON null.
    """
    if value is None:
        return None
    v = float(value)
    if not math.isfinite(v):
        return None
    return float(sig15(v))


def _read_rows(path: str) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [[cell.strip() for cell in row] for row in csv.reader(fh)]
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    rows = [row for row in rows if any(cell != "" for cell in row)]
    if not rows:
        raise ParseError(f"{path}: file is empty")
    return rows


def _parse_cell(path: str, row_no: int, col_no: int, cell: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(
            f"{path}: row {row_no}, column {col_no}: {cell!r} is not a number"
        ) from None


def read_attributes(path: str) -> RawAttributeTable:
    """Read an `id,x,y` attribute table."""
    rows = _read_rows(path)
    if rows[0] != ["id", "x", "y"]:
        raise SchemaError(f"{path}: header must be id,x,y, got {','.join(rows[0])!r}")
    ids: list[str] = []
    xs: list[float] = []
    ys: list[float] = []
    seen: set[str] = set()
    for row_no, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ParseError(f"{path}: row {row_no}: expected 3 cells, got {len(row)}")
        uid = row[0]
        if uid == "":
            raise ParseError(f"{path}: row {row_no}: empty id")
        if uid in seen:
            raise ParseError(f"{path}: row {row_no}: duplicate id {uid!r}")
        seen.add(uid)
        ids.append(uid)
        xs.append(_parse_cell(path, row_no, 2, row[1]))
        ys.append(_parse_cell(path, row_no, 3, row[2]))
    return RawAttributeTable(ids=tuple(ids), x_raw=np.array(xs), y_raw=np.array(ys))


def _parse_square(path: str, rows: list[list[str]], ids: tuple[str, ...]) -> DistanceMatrix:
    header = rows[0]
    if not header or header[0] != "id":
        raise SchemaError(f"{path}: square form must start with an `id` header cell")
    col_ids = header[1:]
    if len(set(col_ids)) != len(col_ids):
        raise SchemaError(f"{path}: duplicate column ids in header")
    known = set(ids)
    for cid in col_ids:
        if cid not in known:
            raise UnknownId(f"{path}: column id {cid!r} not in attribute table")
    if set(col_ids) != known:
        missing = sorted(known - set(col_ids))[0]
        raise SchemaError(f"{path}: no distance column for id {missing!r}")
    n = len(ids)
    raw = np.zeros((n, n))
    seen_rows: set[str] = set()
    row_order: list[str] = []
    for row_no, row in enumerate(rows[1:], start=2):
        if len(row) != n + 1:
            raise ParseError(
                f"{path}: row {row_no}: expected {n + 1} cells, got {len(row)}"
            )
        rid = row[0]
        if rid not in known:
            raise UnknownId(f"{path}: row id {rid!r} not in attribute table")
        if rid in seen_rows:
            raise SchemaError(f"{path}: duplicate row id {rid!r}")
        seen_rows.add(rid)
        row_order.append(rid)
        raw[len(row_order) - 1] = [
            _parse_cell(path, row_no, c + 2, cell) for c, cell in enumerate(row[1:])
        ]
    if len(row_order) != n:
        missing = sorted(known - seen_rows)[0]
        raise SchemaError(f"{path}: no distance row for id {missing!r}")
    # reindex from file order to attribute order
    row_pos = {rid: i for i, rid in enumerate(row_order)}
    col_pos = {cid: j for j, cid in enumerate(col_ids)}
    ri = [row_pos[i] for i in ids]
    cj = [col_pos[i] for i in ids]
    ordered = raw[np.ix_(ri, cj)]
    np.fill_diagonal(ordered, 0.0)  # diagonal cells are ignored by contract
    return DistanceMatrix(r=ordered, ids=ids)


def _parse_long(path: str, rows: list[list[str]], ids: tuple[str, ...]) -> DistanceMatrix:
    if rows[0] != ["from", "to", "distance"]:
        raise SchemaError(
            f"{path}: long form header must be from,to,distance, got {','.join(rows[0])!r}"
        )
    known = set(ids)
    pos = {uid: i for i, uid in enumerate(ids)}
    n = len(ids)
    mat = np.zeros((n, n))
    seen: set[frozenset[str]] = set()
    for row_no, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ParseError(f"{path}: row {row_no}: expected 3 cells, got {len(row)}")
        a, b = row[0], row[1]
        for uid in (a, b):
            if uid not in known:
                raise UnknownId(f"{path}: row {row_no}: id {uid!r} not in attribute table")
        if a == b:
            raise ParseError(f"{path}: row {row_no}: self-distance for id {a!r}")
        key = frozenset((a, b))
        if key in seen:
            raise DuplicatePair(f"{path}: row {row_no}: pair ({a!r}, {b!r}) repeated")
        seen.add(key)
        dist = _parse_cell(path, row_no, 3, row[2])
        mat[pos[a], pos[b]] = dist
        mat[pos[b], pos[a]] = dist
    expected = n * (n - 1) // 2
    if len(seen) != expected:
        for i in range(n):
            for j in range(i + 1, n):
                if frozenset((ids[i], ids[j])) not in seen:
                    raise MissingPair(
                        f"{path}: no distance for pair ({ids[i]!r}, {ids[j]!r})"
                    )
    return DistanceMatrix(r=mat, ids=ids)


def parse_distances(path: str, dist_format: str, ids: tuple[str, ...]) -> DistanceMatrix:
    """Parse a distance file and align it to the attribute id order."""
    if dist_format not in DIST_FORMATS:
        raise SchemaError(
            f"unknown distance format {dist_format!r}; expected one of {DIST_FORMATS}"
        )
    rows = _read_rows(path)
    if dist_format == "square":
        return _parse_square(path, rows, ids)
    return _parse_long(path, rows, ids)


def write_weights_csv(w: SpatialWeightMatrix, ids: tuple[str, ...], fh) -> None:
    """Write W in the square layout, 15 significant digits per cell."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["id", *ids])
    for i, uid in enumerate(ids):
        writer.writerow([uid, *(sig15(v) for v in w.w[i])])
