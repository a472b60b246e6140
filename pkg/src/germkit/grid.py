"""Cell-centered complex fields on a rectangle, with binary I/O.

A field holds one complex128 sample per cell, midpoint quadrature for
norms and pairings, bilinear interpolation with zero extension outside the
bounds, and arithmetic only between identically shaped grids. The binary
format is: xmin, ymin, xmax, ymax as little-endian float64, then nx, ny as
little-endian int32, then the values row-major (y rows ascending) as
complex128 pairs.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import GridFormatError, PreconditionError

_HEADER = struct.Struct("<ddddii")


@dataclass(frozen=True)
class GridField:
    xmin: float
    ymin: float
    xmax: float
    ymax: float
    values: np.ndarray  # complex128, shape (ny, nx), row iy covers y ascending

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise PreconditionError(f"grid values must be 2-d, got shape {v.shape}")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise PreconditionError("grid bounds must satisfy xmax > xmin, ymax > ymin")
        object.__setattr__(self, "values", v)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_function(cls, bounds: tuple, nx: int, ny: int, fn) -> "GridField":
        """Sample fn on cell centers; fn takes a complex ndarray."""
        f = cls(*bounds, values=np.zeros((ny, nx), dtype=np.complex128))
        return cls(*bounds, values=np.asarray(fn(f.centers()), dtype=np.complex128))

    @classmethod
    def constant(cls, bounds: tuple, nx: int, ny: int, value: complex) -> "GridField":
        return cls(*bounds, values=np.full((ny, nx), value, dtype=np.complex128))

    # -- geometry -----------------------------------------------------------

    @property
    def nx(self) -> int:
        return self.values.shape[1]

    @property
    def ny(self) -> int:
        return self.values.shape[0]

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.nx

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.ny

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def bounds(self) -> tuple:
        return (self.xmin, self.ymin, self.xmax, self.ymax)

    def centers(self) -> np.ndarray:
        """Complex cell centers, shape (ny, nx)."""
        xs = self.xmin + (np.arange(self.nx) + 0.5) * self.dx
        ys = self.ymin + (np.arange(self.ny) + 0.5) * self.dy
        return xs[None, :] + 1j * ys[:, None]

    def _check_same(self, other: "GridField"):
        if self.bounds != other.bounds or self.values.shape != other.values.shape:
            raise PreconditionError("grid arithmetic needs identical bounds and resolution")

    # -- arithmetic ---------------------------------------------------------

    def with_values(self, values: np.ndarray) -> "GridField":
        return GridField(*self.bounds, values=values)

    def __add__(self, other: "GridField") -> "GridField":
        self._check_same(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "GridField") -> "GridField":
        self._check_same(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: complex) -> "GridField":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "GridField":
        return self.with_values(-self.values)

    # -- norms and pairing --------------------------------------------------

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.values)) * self.cell_area)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def pair(self, other: "GridField") -> complex:
        """Bilinear pairing sum(self * other) * cellArea, no conjugation."""
        self._check_same(other)
        return complex(np.sum(self.values * other.values) * self.cell_area)

    # -- interpolation ------------------------------------------------------

    def sample(self, points: np.ndarray) -> np.ndarray:
        """Bilinear interpolation at complex points; zero outside bounds."""
        pts = np.asarray(points, dtype=np.complex128)
        u = (pts.real - self.xmin) / self.dx - 0.5
        v = (pts.imag - self.ymin) / self.dy - 0.5
        i0 = np.floor(u).astype(np.int64)
        j0 = np.floor(v).astype(np.int64)
        fu = u - i0
        fv = v - j0
        out = np.zeros(pts.shape, dtype=np.complex128)
        for di, dj, w in (
            (0, 0, (1 - fu) * (1 - fv)),
            (1, 0, fu * (1 - fv)),
            (0, 1, (1 - fu) * fv),
            (1, 1, fu * fv),
        ):
            ii = i0 + di
            jj = j0 + dj
            ok = (ii >= 0) & (ii < self.nx) & (jj >= 0) & (jj < self.ny)
            vals = np.where(ok, self.values[jj.clip(0, self.ny - 1), ii.clip(0, self.nx - 1)], 0.0)
            out = out + w * vals
        return out

    # -- binary format ------------------------------------------------------

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(self.xmin, self.ymin, self.xmax, self.ymax, self.nx, self.ny)
        return header + np.ascontiguousarray(self.values, dtype="<c16").tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "GridField":
        if len(blob) < _HEADER.size:
            raise GridFormatError(f"grid blob too short: {len(blob)} bytes")
        xmin, ymin, xmax, ymax, nx, ny = _HEADER.unpack_from(blob)
        if nx < 1 or ny < 1:
            raise GridFormatError(f"bad grid dimensions {nx} x {ny}")
        expected = _HEADER.size + 16 * nx * ny
        if len(blob) != expected:
            raise GridFormatError(f"grid blob has {len(blob)} bytes, expected {expected}")
        values = np.frombuffer(blob, dtype="<c16", offset=_HEADER.size).reshape(ny, nx)
        return cls(xmin, ymin, xmax, ymax, values=values.astype(np.complex128))

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "GridField":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())
