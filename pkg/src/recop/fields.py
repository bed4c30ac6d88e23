"""Bivector and (1,1)-tensor fields over a chart, and their pointwise
differential-geometric diagnostics.

Sign convention, fixed once for the whole package: the sharp map sends a
covector to the vector with components (W alpha)^i = sum_j W^ij alpha_j,
with no leading minus. Flipping the sign of both sharp maps at once
leaves every recursion-operator quantity unchanged (the two flips cancel
in M' M^-1), so results are invariant under the opposite contraction
convention; see README "Conventions".

Antisymmetry of a bivector is structural, never trusted from input: only
the strict upper triangle is accepted, the rest is mirrored with a sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .expressions import Chart, parse_expr
from .linalg import max_abs


@dataclass(frozen=True)
class BivectorField:
    """Antisymmetric contravariant 2-tensor w^ij(z) on a chart."""

    chart: Chart
    upper: dict  # (i, j) with i < j, 0-based -> ScalarExpr

    def __post_init__(self):
        n = self.chart.dim
        for (i, j), expr in self.upper.items():
            if not (0 <= i < j < n):
                raise ValueError(f"upper-triangle index ({i}, {j}) out of range for dim {n}")
            if expr.arity != n:
                raise ValueError(f"entry ({i}, {j}) parsed against a different chart")

    @classmethod
    def from_upper_strings(cls, chart: Chart, entries: dict) -> "BivectorField":
        parsed = {key: parse_expr(text, chart) for key, text in entries.items()}
        return cls(chart=chart, upper=parsed)

    def evaluate(self, point) -> np.ndarray:
        """Numeric matrix W(z); exactly antisymmetric by construction."""
        n = self.chart.dim
        w = np.zeros((n, n))
        for (i, j), expr in self.upper.items():
            v = expr.eval(point)
            w[i, j] = v
            w[j, i] = -v
        return w

    def gradients(self, point) -> np.ndarray:
        """dW[i, j, l] = d w^ij / d z_l, antisymmetric in (i, j)."""
        n = self.chart.dim
        dw = np.zeros((n, n, n))
        for (i, j), expr in self.upper.items():
            g = expr.gradient(point)
            dw[i, j, :] = g
            dw[j, i, :] = -g
        return dw

    def is_constant(self) -> bool:
        return all(expr.is_constant() for expr in self.upper.values())


@dataclass(frozen=True)
class TensorField11:
    """Type (1,1) tensor field R^i_j(z); row index is the output slot."""

    chart: Chart
    entries: tuple  # n rows, each a tuple of n ScalarExpr

    def __post_init__(self):
        n = self.chart.dim
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise ValueError(f"entries must form an {n} x {n} matrix")
        for row in self.entries:
            for expr in row:
                if expr.arity != n:
                    raise ValueError("entry parsed against a different chart")

    @classmethod
    def from_strings(cls, chart: Chart, rows) -> "TensorField11":
        parsed = tuple(tuple(parse_expr(text, chart) for text in row) for row in rows)
        return cls(chart=chart, entries=parsed)

    def evaluate(self, point) -> np.ndarray:
        n = self.chart.dim
        a = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                a[i, j] = self.entries[i][j].eval(point)
        return a

    def gradients(self, point) -> np.ndarray:
        """D[i, j, l] = d R^i_j / d z_l."""
        n = self.chart.dim
        d = np.empty((n, n, n))
        for i in range(n):
            for j in range(n):
                d[i, j, :] = self.entries[i][j].gradient(point)
        return d


def eval_bivector(w: BivectorField, point) -> np.ndarray:
    return w.evaluate(point)


def sharp(w: BivectorField, point, alpha) -> np.ndarray:
    """Vector with components sum_j W^ij(z) alpha_j."""
    return w.evaluate(point) @ np.asarray(alpha, dtype=float)


def jacobi_residual(w: BivectorField, point) -> float:
    """Max over index triples i<j<k of the cyclic Jacobi sum

        sum_l (w^il d_l w^jk + w^jl d_l w^ki + w^kl d_l w^ij)

    which vanishes identically iff the bivector is Poisson. Derivatives
    are exact (dual numbers), so constant bivectors give exactly 0.
    """
    n = w.chart.dim
    if n < 3:
        return 0.0
    wmat = w.evaluate(point)
    dw = w.gradients(point)
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                value = (
                    wmat[i, :] @ dw[j, k, :]
                    + wmat[j, :] @ dw[k, i, :]
                    + wmat[k, :] @ dw[i, j, :]
                )
                worst = max(worst, abs(float(value)))
    return worst


def _torsion_from(a: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, float]:
    """Contract values a[k,j] and derivatives d[k,j,l] into the torsion

        N^k_ij = R^l_i d_l R^k_j - R^l_j d_l R^k_i
                 - R^k_l d_i R^l_j + R^k_l d_j R^l_i

    computing only i < j and mirroring, so antisymmetry in (i, j) is
    bit-exact.
    """
    n = a.shape[0]
    torsion = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                value = (
                    a[:, i] @ d[k, j, :]
                    - a[:, j] @ d[k, i, :]
                    - a[k, :] @ d[:, j, i]
                    + a[k, :] @ d[:, i, j]
                )
                torsion[k, i, j] = value
                torsion[k, j, i] = -value
    return torsion, max_abs(torsion)


def nijenhuis_torsion(tensor: TensorField11, point) -> tuple[np.ndarray, float]:
    """Nijenhuis torsion N^k_ij of a symbolic (1,1) tensor, derivatives
    by dual numbers. Returns (N, max abs entry)."""
    a = tensor.evaluate(point)
    d = tensor.gradients(point)
    return _torsion_from(a, d)


def nijenhuis_torsion_numeric(
    field: Callable[[np.ndarray], np.ndarray], point, h: float = 1e-5
) -> tuple[np.ndarray, float]:
    """Same torsion for a pointwise matrix field with no symbolic form,
    derivatives by central differences with step h."""
    if h <= 0:
        raise ValueError("h must be positive")
    z = np.asarray(point, dtype=float)
    a = np.asarray(field(z), dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or n != z.shape[0]:
        raise ValueError("field must return an n x n matrix for an n-vector point")
    d = np.empty((n, n, n))
    for l in range(n):
        step = np.zeros(n)
        step[l] = h
        upper = np.asarray(field(z + step), dtype=float)
        lower = np.asarray(field(z - step), dtype=float)
        d[:, :, l] = (upper - lower) / (2.0 * h)
    return _torsion_from(a, d)
