"""Persistence diagrams and barcodes shared across modules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .networks import DataError


def _points_array(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return np.zeros((0, 2))
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DataError(f"points must be an m x 2 array, got shape {pts.shape}")
    return pts


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (birth, death) pairs of one homological dimension.

    Deaths may be +inf for classes that never die; births are finite.
    """

    dim: int
    points: np.ndarray

    def __post_init__(self):
        pts = _points_array(self.points)
        if pts.size:
            if not np.all(np.isfinite(pts[:, 0])):
                raise DataError("birth values must be finite")
            if np.any(np.isnan(pts[:, 1])):
                raise DataError("death values must not be NaN")
            if np.any(pts[:, 1] < pts[:, 0]):
                raise DataError("every point must satisfy birth <= death")
        order = np.lexsort((pts[:, 1], pts[:, 0])) if pts.size else []
        object.__setattr__(self, "points", pts[order] if pts.size else pts)
        self.points.setflags(write=False)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def births(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def deaths(self) -> np.ndarray:
        return self.points[:, 1]

    def persistences(self) -> np.ndarray:
        return self.points[:, 1] - self.points[:, 0]

    def finite(self) -> "PersistenceDiagram":
        """Drop points with infinite death."""
        mask = np.isfinite(self.points[:, 1]) if len(self) else slice(None)
        return PersistenceDiagram(self.dim, self.points[mask] if len(self) else self.points)

    def truncated(self, death_level: float) -> "PersistenceDiagram":
        """Replace infinite deaths by death_level."""
        if not len(self):
            return self
        pts = self.points.copy()
        inf = ~np.isfinite(pts[:, 1])
        pts[inf, 1] = death_level
        if np.any(pts[:, 1] < pts[:, 0]):
            raise DataError("death_level below a birth value")
        return PersistenceDiagram(self.dim, pts)


@dataclass(frozen=True)
class Barcode:
    """Finite bar collection; summaries operate on this form.

    Infinite classes must be truncated to a death level before a barcode can
    be built; summary statistics refuse to guess a death value.
    """

    intervals: np.ndarray

    def __post_init__(self):
        pts = _points_array(self.intervals)
        if pts.size and not np.all(np.isfinite(pts)):
            raise DataError(
                "barcode intervals must be finite; truncate infinite deaths first"
            )
        if pts.size and np.any(pts[:, 1] < pts[:, 0]):
            raise DataError("every bar must satisfy birth <= death")
        object.__setattr__(self, "intervals", pts)
        self.intervals.setflags(write=False)

    @classmethod
    def from_diagram(cls, pd: PersistenceDiagram, death_level: float | None = None) -> "Barcode":
        if death_level is not None:
            pd = pd.truncated(death_level)
        return cls(pd.points)

    def __len__(self) -> int:
        return self.intervals.shape[0]

    @property
    def births(self) -> np.ndarray:
        return self.intervals[:, 0]

    @property
    def deaths(self) -> np.ndarray:
        return self.intervals[:, 1]

    def lengths(self) -> np.ndarray:
        return self.intervals[:, 1] - self.intervals[:, 0]

    def centers(self) -> np.ndarray:
        return 0.5 * (self.intervals[:, 0] + self.intervals[:, 1])
