"""Diagonal, radially symmetric symmetric 2-tensor fields.

A field h is stored through its orthonormal-frame components
(h_r, h_1, h_1, h_3) as functions of r; the sigma_1/sigma_2 components
coincide by the ansatz symmetry.  Fields exist in closed form (callables
with optional analytic derivatives) or sampled on a RadialGrid.  Frame
components stay O(1) at the bolt where coordinate components degenerate.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .grid import RadialGrid
from .profile import BoltProfile

__all__ = ["DiagonalTensorField", "witness_field", "cutoff"]

ComponentFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DiagonalTensorField:
    """Frame components (h_r, h_1, h_1, h_3) of a diagonal radial field.

    Exactly one of (funcs, grid+values) is set.  `funcs` is a triple of
    callables (h_r, h_1, h_3); `dfuncs`/`d2funcs` optionally give analytic
    radial derivatives.  Grid fields carry a (3, N) array of node values
    ordered (h_r, h_1, h_3).
    """

    funcs: tuple[ComponentFn, ComponentFn, ComponentFn] | None = None
    dfuncs: tuple[ComponentFn, ComponentFn, ComponentFn] | None = None
    d2funcs: tuple[ComponentFn, ComponentFn, ComponentFn] | None = None
    grid: RadialGrid | None = None
    values: np.ndarray | None = None
    name: str = ""

    def __post_init__(self) -> None:
        closed = self.funcs is not None
        sampled = self.grid is not None and self.values is not None
        if closed == sampled:
            raise ValueError("field must be closed-form xor grid-sampled")
        if sampled:
            v = np.asarray(self.values, dtype=float)
            if v.shape != (3, self.grid.N):
                raise ValueError(f"grid field values must be (3, N), got {v.shape}")
            object.__setattr__(self, "values", v)

    # -- evaluation ---------------------------------------------------------

    @property
    def is_closed_form(self) -> bool:
        return self.funcs is not None

    def components(self, r) -> np.ndarray:
        """Stack (h_r, h_1, h_3) at radii r (shape (3, ...))."""
        rr = np.asarray(r, dtype=float)
        if self.is_closed_form:
            return np.stack([np.broadcast_to(f(rr), rr.shape).astype(float)
                             for f in self.funcs])
        return np.stack([np.interp(rr, self.grid.r, self.values[i])
                         for i in range(3)])

    def derivatives(self, r) -> np.ndarray:
        """d/dr of the frame components at radii r (shape (3, ...))."""
        rr = np.asarray(r, dtype=float)
        if self.is_closed_form:
            if self.dfuncs is None:
                raise ValueError("closed-form field lacks analytic derivatives")
            return np.stack([np.broadcast_to(f(rr), rr.shape).astype(float)
                             for f in self.dfuncs])
        d = np.stack([self.grid.deriv_r(self.values[i]) for i in range(3)])
        return np.stack([np.interp(rr, self.grid.r, d[i]) for i in range(3)])

    def second_derivatives(self, r) -> np.ndarray:
        rr = np.asarray(r, dtype=float)
        if not self.is_closed_form or self.d2funcs is None:
            raise ValueError("second derivatives require analytic closed form")
        return np.stack([np.broadcast_to(f(rr), rr.shape).astype(float)
                         for f in self.d2funcs])

    def sample(self, grid: RadialGrid) -> "DiagonalTensorField":
        return DiagonalTensorField(grid=grid, values=self.components(grid.r),
                                   name=self.name)

    # -- serialization ------------------------------------------------------

    CSV_COLUMNS = ("r", "s", "h_r", "h_1", "h_3")

    def to_csv(self, header_comment: str = "") -> str:
        if not self.is_closed_form:
            grid, vals = self.grid, self.values
        else:
            raise ValueError("serialize sampled fields (call .sample first)")
        buf = io.StringIO()
        if header_comment:
            buf.write(f"# {header_comment}\n")
        buf.write(",".join(self.CSV_COLUMNS) + "\n")
        for j in range(grid.N):
            buf.write(f"{grid.r[j]:.17g},{grid.s[j]:.17g},"
                      f"{vals[0, j]:.17g},{vals[1, j]:.17g},{vals[2, j]:.17g}\n")
        return buf.getvalue()

    @staticmethod
    def read_csv_columns(text: str) -> dict[str, np.ndarray]:
        rows = [ln for ln in text.splitlines()
                if ln.strip() and not ln.startswith("#")]
        names = rows[0].split(",")
        data = np.array([[float(x) for x in ln.split(",")] for ln in rows[1:]])
        return {name: data[:, k] for k, name in enumerate(names)}


def cutoff(r, n: float = 1.0):
    """The Lipschitz cutoff eta: 1 inside r < 3n, e^{3/4} e^{-r/(4n)} beyond.

    Continuous at the junction; its derivative jumps there, so integrals
    against eta are split exactly at r = 3n by the quadrature layer.
    """
    rr = np.asarray(r, dtype=float)
    return np.where(rr < 3.0 * n, 1.0, np.exp(0.75) * np.exp(-rr / (4.0 * n)))


def _cutoff_deriv(r, n: float = 1.0):
    rr = np.asarray(r, dtype=float)
    return np.where(rr < 3.0 * n, 0.0,
                    -np.exp(0.75) * np.exp(-rr / (4.0 * n)) / (4.0 * n))


def witness_field(profile: BoltProfile | None = None) -> DiagonalTensorField:
    """The explicit instability witness h-bar = eta * h with frame
    components eta * (1, -1, -1, 1) (h = a dr^2 - b (s1^2+s2^2) + c s3^2)."""
    n = 1.0 if profile is None else profile.n

    def mk(sign):
        return (lambda r: sign * cutoff(r, n)), (lambda r: sign * _cutoff_deriv(r, n))

    fr, dfr = mk(1.0)
    f1, df1 = mk(-1.0)
    f3, df3 = mk(1.0)
    return DiagonalTensorField(funcs=(fr, f1, f3), dfuncs=(dfr, df1, df3),
                               name="witness")
