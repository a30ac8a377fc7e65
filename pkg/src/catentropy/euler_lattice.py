"""Lattices with an integer Euler pairing, their radical and numerical quotient.

Endomorphism matrices use the column convention: column j holds the image of
basis vector j, so composing F after G is ``M_F @ M_G``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DimensionError
from .exact_linalg import IntMatrix, kernel_basis


@dataclass(frozen=True)
class EulerLattice:
    gram: IntMatrix
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.gram.is_square():
            raise DimensionError(f"gram must be square, got {self.gram.shape}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"v{i}" for i in range(self.gram.rows)))
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) != self.gram.rows:
            raise DimensionError("one label per basis vector required")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")

    @property
    def rank(self) -> int:
        return self.gram.rows

    def basis(self, i: int) -> tuple[int, ...]:
        return tuple(int(k == i) for k in range(self.rank))

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class LatticeEndo:
    lattice: EulerLattice
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.lattice.rank, self.lattice.rank):
            raise DimensionError(
                f"endomorphism of shape {self.matrix.shape} on a rank {self.lattice.rank} lattice"
            )

    def __matmul__(self, other: LatticeEndo) -> LatticeEndo:
        return LatticeEndo(self.lattice, self.matrix @ other.matrix)

    def __neg__(self) -> LatticeEndo:
        return LatticeEndo(self.lattice, -self.matrix)

    def __pow__(self, k: int) -> LatticeEndo:
        return LatticeEndo(self.lattice, self.matrix**k)

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.matrix @ v


def pairing(lat: EulerLattice, u: Sequence[int], v: Sequence[int]) -> int:
    """chi(u, v) = u^T . gram . v"""
    if len(u) != lat.rank or len(v) != lat.rank:
        raise DimensionError(f"vectors of length {len(u)}, {len(v)} on rank {lat.rank}")
    gv = lat.gram @ v
    return sum(a * b for a, b in zip(u, gv))


def radical(lat: EulerLattice) -> list[tuple[int, ...]]:
    """Integral basis of the two-sided radical {v : gram v = 0 = gram^T v}."""
    stacked = IntMatrix(lat.gram.tolist() + lat.gram.T.tolist())
    kernel, _ = kernel_basis(stacked)
    return kernel


def numerical_quotient(lat: EulerLattice) -> EulerLattice:
    """The lattice modulo its radical, with the induced (nondegenerate) pairing."""
    stacked = IntMatrix(lat.gram.tolist() + lat.gram.T.tolist())
    kernel, complement = kernel_basis(stacked)
    if not kernel:
        return lat
    if not complement:
        return EulerLattice(IntMatrix([]))
    c = IntMatrix.from_columns(complement)
    gram = c.T @ lat.gram @ c
    labels = []
    for k, col in enumerate(complement):
        nz = [i for i, x in enumerate(col) if x]
        if len(nz) == 1 and col[nz[0]] == 1:
            labels.append(lat.labels[nz[0]])
        else:
            labels.append(f"q{k}")
    if len(set(labels)) != len(labels):
        labels = [f"q{k}" for k in range(len(complement))]
    return EulerLattice(gram, tuple(labels))


def is_isometry(endo: LatticeEndo) -> bool:
    m, g = endo.matrix, endo.lattice.gram
    return m.T @ g @ m == g and abs(m.det()) == 1


@dataclass
class GrowthCurve:
    """s_n = (1/n) log sum_{i,j} |chi(v_i, F^n v_j)| for n = 1..len(values)."""

    values: list[float] = field(default_factory=list)
    totals: list[int] = field(default_factory=list)
    degenerate: bool = False

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        # 1-based, matching the index n of s_n
        return self.values[n - 1]


def gy_growth_curve(endo: LatticeEndo, n_max: int) -> GrowthCurve:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    g = endo.lattice.gram
    m = endo.matrix
    power = m
    curve = GrowthCurve()
    for n in range(1, n_max + 1):
        total = sum(abs(x) for row in (g @ power).entries for x in row)
        if total == 0:
            curve.degenerate = True
            break
        curve.totals.append(total)
        curve.values.append(math.log(total) / n)
        power = power @ m
    return curve
