"""
Data contracts shared across the system.

DataMatrix is the dataset under analysis (rows = samples, columns =
variables); MarkovBlanketTruth is the ground truth every metric is
scored against.
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from blanket_system.errors import BlanketError, ErrorCode


COLUMN_NAME_PATTERN = re.compile(r"^[A-Za-z0-9_]+$")


class ColumnKind(str, Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


class Role(str, Enum):
    PARENT = "parent"
    CHILD = "child"
    SPOUSE = "spouse"
    EXTRANEOUS = "extraneous"


@dataclass(frozen=True)
class DataMatrix:
    values: np.ndarray
    column_names: tuple[str, ...]
    column_kinds: tuple[ColumnKind, ...] = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)

        if values.ndim != 2:
            raise BlanketError(ErrorCode.BAD_DATA, f"values must be 2-D, got ndim={values.ndim}")

        n, d = values.shape
        if n < 2 or d < 1:
            raise BlanketError(ErrorCode.BAD_DATA, f"need n >= 2 and d >= 1, got {n}x{d}")

        if not np.all(np.isfinite(values)):
            bad_rows = np.unique(np.argwhere(~np.isfinite(values))[:, 0])
            raise BlanketError(
                ErrorCode.BAD_DATA,
                f"non-finite values in rows {bad_rows[:10].tolist()}"
            )

        names = tuple(str(c) for c in self.column_names)
        if len(names) != d:
            raise BlanketError(ErrorCode.BAD_DATA, f"{len(names)} names for {d} columns")

        if len(set(names)) != d:
            dupes = sorted({c for c in names if names.count(c) > 1})
            raise BlanketError(ErrorCode.BAD_DATA, f"duplicate column names: {dupes}")

        kinds = tuple(ColumnKind(k) for k in self.column_kinds) or (ColumnKind.CONTINUOUS,) * d
        if len(kinds) != d:
            raise BlanketError(ErrorCode.BAD_DATA, f"{len(kinds)} kinds for {d} columns")

        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "column_kinds", kinds)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_variables(self) -> int:
        return self.values.shape[1]

    def index_of(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise BlanketError(ErrorCode.UNKNOWN_TARGET, f"unknown column '{name}'") from None

    def columns(self, indices: Sequence[int]) -> np.ndarray:
        return self.values[:, list(indices)]

    def permute_rows(self, permutation: Sequence[int]) -> "DataMatrix":
        return DataMatrix(self.values[list(permutation)], self.column_names, self.column_kinds)

    def check_target(self, target: int) -> None:
        if not 0 <= target < self.n_variables:
            raise BlanketError(
                ErrorCode.BAD_TARGET,
                f"target index {target} out of range for {self.n_variables} variables"
            )

    def non_target(self, target: int) -> list[int]:
        self.check_target(target)
        return [j for j in range(self.n_variables) if j != target]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, columns=list(self.column_names))

    @classmethod
    def from_frame(
        cls,
        df: pd.DataFrame,
        discrete: Sequence[str] = (),
    ) -> "DataMatrix":
        """
        Build a DataMatrix from a numeric dataframe.

        Columns named in `discrete` are marked discrete-coded; their integer
        codes are kept as-is.
        """

        bad_names = [c for c in df.columns if not COLUMN_NAME_PATTERN.match(str(c))]
        if bad_names:
            raise BlanketError(ErrorCode.BAD_DATA, f"column names must match [A-Za-z0-9_]+: {bad_names}")

        unknown = set(discrete) - set(df.columns)
        if unknown:
            raise BlanketError(ErrorCode.UNKNOWN_TARGET, f"unknown discrete columns: {sorted(unknown)}")

        kinds = [
            ColumnKind.DISCRETE if c in discrete else ColumnKind.CONTINUOUS
            for c in df.columns
        ]

        return cls(df.to_numpy(dtype=float), tuple(df.columns), tuple(kinds))


@dataclass(frozen=True)
class MarkovBlanketTruth:
    target: int
    mb: frozenset[int]
    roles: Mapping[int, Role] = field(default_factory=dict)

    def __post_init__(self):
        mb = frozenset(int(v) for v in self.mb)
        if self.target in mb:
            raise BlanketError(ErrorCode.BAD_DATA, f"target {self.target} listed in its own blanket")

        for idx, role in self.roles.items():
            if (role != Role.EXTRANEOUS) != (idx in mb):
                raise BlanketError(
                    ErrorCode.BAD_DATA,
                    f"role {Role(role).value} of variable {idx} disagrees with blanket membership"
                )

        object.__setattr__(self, "mb", mb)
