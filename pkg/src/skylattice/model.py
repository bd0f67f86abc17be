"""Relations over named criteria, criterion sets and CSV ingestion."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import ContractViolation, DataError, SchemaError

MAX_CRITERIA = 63


@dataclass(frozen=True)
class CriterionSet:
    """Subset of the declared criteria, stored as a bit mask over column indices.

    ``width`` is the number of declared criteria; two sets are comparable only
    when their widths match. The empty set is falsy.
    """

    mask: int
    width: int

    def __post_init__(self):
        if not 0 <= self.width <= MAX_CRITERIA:
            raise SchemaError(f"criterion count must be between 0 and {MAX_CRITERIA}, got {self.width}")
        if not 0 <= self.mask < (1 << self.width):
            raise ContractViolation(f"mask {self.mask:#x} out of range for width {self.width}")

    @classmethod
    def empty(cls, width: int) -> CriterionSet:
        return cls(0, width)

    @classmethod
    def full(cls, width: int) -> CriterionSet:
        return cls((1 << width) - 1, width)

    @classmethod
    def of(cls, indices: Iterable[int], width: int) -> CriterionSet:
        mask = 0
        for i in indices:
            if not 0 <= i < width:
                raise ContractViolation(f"criterion index {i} out of range for width {width}")
            mask |= 1 << i
        return cls(mask, width)

    @staticmethod
    def all_subsets(width: int) -> Iterator[CriterionSet]:
        """Every subset, in mask order; intended for small widths."""
        for mask in range(1 << width):
            yield CriterionSet(mask, width)

    def _check_width(self, other: CriterionSet) -> None:
        if self.width != other.width:
            raise ContractViolation("criterion sets come from different declarations")

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.width and bool(self.mask >> index & 1)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: CriterionSet) -> CriterionSet:
        self._check_width(other)
        return CriterionSet(self.mask | other.mask, self.width)

    def __and__(self, other: CriterionSet) -> CriterionSet:
        self._check_width(other)
        return CriterionSet(self.mask & other.mask, self.width)

    def add(self, index: int) -> CriterionSet:
        if not 0 <= index < self.width:
            raise ContractViolation(f"criterion index {index} out of range for width {self.width}")
        return CriterionSet(self.mask | 1 << index, self.width)

    def complement(self) -> CriterionSet:
        return CriterionSet(~self.mask & (1 << self.width) - 1, self.width)

    def issubset(self, other: CriterionSet) -> bool:
        self._check_width(other)
        return self.mask & other.mask == self.mask

    def indices(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def sort_key(self) -> tuple[int, int]:
        """Cardinality first, then mask; the canonical enumeration order."""
        return (self.mask.bit_count(), self.mask)


def format_criteria(criteria: CriterionSet, names: Sequence[str]) -> str:
    """Canonical text for a criterion set under the declared column names.

    Single-character declarations concatenate, anything else joins on commas.
    The empty set renders as the empty string.
    """
    if criteria.width != len(names):
        raise ContractViolation("criterion set width does not match the declaration")
    members = [names[i] for i in criteria]
    if all(len(name) == 1 for name in names):
        return "".join(members)
    return ",".join(members)


def parse_criteria(text: str, names: Sequence[str]) -> CriterionSet:
    """Inverse of :func:`format_criteria` for comma-separated names; '' is the empty set."""
    width = len(names)
    if not text:
        return CriterionSet.empty(width)
    index = {name: i for i, name in enumerate(names)}
    mask = 0
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token not in index:
            raise SchemaError(f"unknown criterion {token!r}; declared: {', '.join(names)}")
        mask |= 1 << index[token]
    return CriterionSet(mask, width)


@dataclass(frozen=True)
class Row:
    """One tuple of the relation: a 1-based id, descriptive columns, criterion values."""

    rowid: int
    dims: tuple[str, ...]
    crits: tuple[float, ...]

    def project(self, criteria: CriterionSet) -> tuple[float, ...]:
        """Criterion values restricted to the given set, in ascending index order."""
        return tuple(self.crits[i] for i in criteria)


@dataclass(frozen=True)
class Relation:
    """Immutable table: descriptive columns plus numeric criterion columns.

    Row ids run 1..n in file order. Criterion values are finite floats; columns
    declared for maximization are negated at ingestion so that every internal
    comparison minimizes.
    """

    name: str
    dim_names: tuple[str, ...]
    criteria: tuple[str, ...]
    rows: tuple[Row, ...]

    def __post_init__(self):
        if not 1 <= len(self.criteria) <= MAX_CRITERIA:
            raise SchemaError(f"need between 1 and {MAX_CRITERIA} criteria, got {len(self.criteria)}")
        names = [*self.dim_names, *self.criteria]
        if len(set(names)) != len(names) or any(not n for n in names):
            raise SchemaError("column names must be unique and non-empty")
        width = len(self.criteria)
        for pos, row in enumerate(self.rows, start=1):
            if row.rowid != pos:
                raise SchemaError(f"row ids must run 1..n in order, found {row.rowid} at position {pos}")
            if len(row.crits) != width:
                raise SchemaError(f"row {pos} has {len(row.crits)} criterion values, expected {width}")
            if len(row.dims) != len(self.dim_names):
                raise SchemaError(f"row {pos} has {len(row.dims)} descriptive values, expected {len(self.dim_names)}")
            for k, value in enumerate(row.crits):
                if not math.isfinite(value):
                    raise DataError(f"row {pos}, column {self.criteria[k]}: non-finite value",
                                    row=pos, column=self.criteria[k])

    @property
    def width(self) -> int:
        return len(self.criteria)

    @cached_property
    def tid(self) -> frozenset[int]:
        return frozenset(range(1, len(self.rows) + 1))

    @cached_property
    def columns(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(row.crits[i] for row in self.rows) for i in range(self.width))

    def row(self, rowid: int) -> Row:
        if not 1 <= rowid <= len(self.rows):
            raise ContractViolation(f"row id {rowid} outside 1..{len(self.rows)}")
        return self.rows[rowid - 1]

    def empty_set(self) -> CriterionSet:
        return CriterionSet.empty(self.width)

    def full_set(self) -> CriterionSet:
        return CriterionSet.full(self.width)

    def criterion_set(self, names: Iterable[str]) -> CriterionSet:
        return parse_criteria(",".join(names), self.criteria)

    def format_criteria(self, criteria: CriterionSet) -> str:
        return format_criteria(criteria, self.criteria)

    @classmethod
    def from_rows(cls, name: str, criteria: Sequence[str], values: Iterable[Sequence[float]],
                  dim_names: Sequence[str] = (), dims: Sequence[Sequence[str]] | None = None) -> Relation:
        """Build a relation from criterion value rows, assigning ids in order."""
        value_rows = [tuple(float(v) for v in row) for row in values]
        if dims is None:
            dims = [()] * len(value_rows)
        rows = tuple(Row(i + 1, tuple(d), crits)
                     for i, (d, crits) in enumerate(zip(dims, value_rows)))
        return cls(name, tuple(dim_names), tuple(criteria), rows)

    @classmethod
    def load_csv(cls, path: str | Path, criteria: Sequence[str], maximize: Sequence[str] = (),
                 name: str | None = None) -> Relation:
        """Read a CSV file with a header row.

        ``criteria`` names the numeric columns, in the order that defines their
        indices; every other column is kept as descriptive text. Columns listed
        in ``maximize`` are negated. Unknown or duplicate columns raise
        SchemaError; unparseable or non-finite cells raise DataError carrying
        the data row number and column name.
        """
        path = Path(path)
        criteria = list(criteria)
        maximize = list(maximize)
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file, a header row is required") from None
            if len(set(header)) != len(header):
                raise SchemaError(f"{path}: duplicate column names in header")
            for column in criteria:
                if column not in header:
                    raise SchemaError(f"{path}: criterion column {column!r} not in header")
            for column in maximize:
                if column not in criteria:
                    raise SchemaError(f"maximize column {column!r} is not a declared criterion")
            crit_pos = [header.index(c) for c in criteria]
            dim_pos = [i for i, c in enumerate(header) if c not in set(criteria)]
            negate = [c in set(maximize) for c in criteria]
            rows = []
            for rowid, record in enumerate(reader, start=1):
                if len(record) != len(header):
                    raise DataError(f"{path}: row {rowid} has {len(record)} fields, expected {len(header)}",
                                    row=rowid)
                crits = []
                for k, pos in enumerate(crit_pos):
                    cell = record[pos]
                    try:
                        value = float(cell)
                    except ValueError:
                        raise DataError(f"{path}: row {rowid}, column {criteria[k]}: "
                                        f"cannot read {cell!r} as a number",
                                        row=rowid, column=criteria[k]) from None
                    if not math.isfinite(value):
                        raise DataError(f"{path}: row {rowid}, column {criteria[k]}: non-finite value {cell!r}",
                                        row=rowid, column=criteria[k])
                    crits.append(-value if negate[k] else value)
                rows.append(Row(rowid, tuple(record[i] for i in dim_pos), tuple(crits)))
        return cls(name if name is not None else path.stem,
                   tuple(header[i] for i in dim_pos), tuple(criteria), tuple(rows))

    def to_csv(self, path: str | Path) -> None:
        """Write the relation back out; reloading with the same criteria round-trips."""
        with Path(path).open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow([*self.dim_names, *self.criteria])
            for row in self.rows:
                writer.writerow([*row.dims, *row.crits])

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim_names": list(self.dim_names),
            "criteria": list(self.criteria),
            "rows": [{"rowid": r.rowid, "dims": list(r.dims), "crits": list(r.crits)} for r in self.rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> Relation:
        try:
            rows = tuple(Row(int(r["rowid"]), tuple(r["dims"]), tuple(float(v) for v in r["crits"]))
                         for r in obj["rows"])
            return cls(obj["name"], tuple(obj["dim_names"]), tuple(obj["criteria"]), rows)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed relation payload: {exc}") from None
