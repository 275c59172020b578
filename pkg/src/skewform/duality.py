"""Metric-dependent duality: Hodge star, codifferential, Laplace operators.

Conventions (pinned by the test suite, see docs/CONVENTIONS.md):

* the chart's variable order orients the volume form vol = sqrt|det g| dx^1..dx^n;
* the star is fixed by  alpha ^ star(beta) = <alpha, beta> vol;
* the codifferential is sign(det g) * (-1)^(n(p+1)+1) * star d star, which
  makes delta(a_i dx^i) the negative divergence on Euclidean 1-forms;
* `laplacian` is the combination d(delta a) - delta(d a); the classical
  d delta + delta d composition is exposed as `hodge_laplacian`.

Metrics are accepted only when sqrt|det g| simplifies to an exact rational
expression (constant diagonal, squares like x^2, ...); anything else is
rejected at construction so the kernel stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .symexpr import Expr, ExprError, ONE, ZERO, zero_test, _poly_sqrt
from .exterior import Chart, ChartError, DiffForm, FormError, ext_d
from .manifold import Connection


class MetricError(ExprError):
    pass


def det_expr(rows):
    """Determinant of a square matrix of Exprs by Laplace expansion."""
    n = len(rows)
    if n == 0:
        return ONE
    if n == 1:
        return rows[0][0]
    total = ZERO
    for j in range(n):
        if rows[0][j].is_zero_struct():
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j] * det_expr(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def _adjugate(rows):
    n = len(rows)
    adj = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            cof = det_expr(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def sqrt_expr(e):
    """Exact square root of an Expr, or None when not a perfect square."""
    rn = _poly_sqrt(e.num)
    if rn is None:
        return None
    rd = _poly_sqrt(e.den)
    if rd is None:
        return None
    return Expr.make(rn, rd)


class Metric:
    """Symmetric invertible matrix of Exprs over a chart, with the inverse
    and the exact volume factor cached at construction."""

    __slots__ = ("chart", "rows", "inverse", "det", "volume", "sign_det", "signature")

    def __init__(self, chart, rows, seed=0):
        n = chart.dim
        if len(rows) != n or any(len(r) != n for r in rows):
            raise MetricError(f"metric must be {n}x{n}")
        rows = tuple(tuple(e if isinstance(e, Expr) else Expr.const(e) for e in r) for r in rows)
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise MetricError(f"metric not symmetric at ({i + 1},{j + 1})")
        d = det_expr(rows)
        if zero_test(d, seed=seed).value:
            raise MetricError("metric determinant is identically zero")
        vol = sqrt_expr(d)
        if vol is None:
            vol = sqrt_expr(-d)
        if vol is None:
            raise MetricError(
                "sqrt|det g| does not simplify to a rational expression; metric rejected"
            )
        adj = _adjugate(rows)
        inv = tuple(tuple(adj[i][j] / d for j in range(n)) for i in range(n))
        self.chart = chart
        self.rows = rows
        self.det = d
        self.inverse = inv
        self.volume = vol
        self.signature = self._signature_at_sample(seed)
        self.sign_det = 1 if (self.signature[1] % 2 == 0) else -1

    def _signature_at_sample(self, seed):
        import random

        rng = random.Random(f"skewform-metric:{seed}:{[str(e) for r in self.rows for e in r]}")
        names = sorted({v for r in self.rows for e in r for v in e.variables()})
        for _ in range(64):
            point = {v: Fraction(rng.randint(1, 4000), 1000) for v in names}
            try:
                mat = np.array(
                    [[float(e.eval(point)) for e in row] for row in self.rows], dtype=float
                )
            except ExprError:
                continue
            if abs(np.linalg.det(mat)) < 1e-9:
                continue
            eig = np.linalg.eigvalsh(mat)
            return (int(np.sum(eig > 0)), int(np.sum(eig < 0)))
        raise MetricError("could not find a sample point with invertible metric")

    @staticmethod
    def euclidean(chart):
        n = chart.dim
        return Metric(chart, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @staticmethod
    def minkowski(chart):
        """Signature (+, -, ..., -) with the chart's first variable timelike."""
        n = chart.dim
        if n < 2:
            raise MetricError("Minkowski metric needs dimension >= 2")
        return Metric(
            chart,
            [
                [(ONE if i == 0 else Expr.const(-1)) if i == j else ZERO for j in range(n)]
                for i in range(n)
            ],
        )

    @staticmethod
    def diagonal(chart, entries):
        n = chart.dim
        entries = list(entries)
        if len(entries) != n:
            raise MetricError("diagonal metric needs one entry per chart variable")
        return Metric(
            chart,
            [
                [
                    (entries[i] if isinstance(entries[i], Expr) else Expr.const(entries[i]))
                    if i == j
                    else ZERO
                    for j in range(n)
                ]
                for i in range(n)
            ],
        )

    def __repr__(self):
        return f"Metric({self.chart}, signature {self.signature})"


def _require_metric_chart(a, g):
    if a.chart != g.chart:
        raise ChartError(f"chart mismatch: {a.chart} vs {g.chart}")


def _perm_sign(first, second):
    """Sign of the permutation (first + second) of 0..n-1, both increasing."""
    inv = sum(1 for i in first for j in second if i > j)
    return -1 if inv % 2 else 1


def hodge_star(a, g):
    """The metric dual (n-p)-form, fixed by alpha ^ star(beta) = <alpha,beta> vol."""
    _require_metric_chart(a, g)
    n = g.chart.dim
    p = a.degree
    if p > n:
        return DiffForm.zero(g.chart, max(n - p, 0))
    res = {}
    for J in combinations(range(n), p):
        s = ZERO
        for I, coeff in a.terms.items():
            minor = [[g.inverse[j][i] for i in I] for j in J]
            m = det_expr(minor)
            if not m.is_zero_struct():
                s = s + coeff * m
        if s.is_zero_struct():
            continue
        K = tuple(i for i in range(n) if i not in J)
        val = s * g.volume
        if _perm_sign(J, K) < 0:
            val = -val
        res[K] = res.get(K, ZERO) + val
    return DiffForm(g.chart, n - p, res)


def dual_closure_check(a, g, seed=0):
    """True iff the dual form is closed: d(star a) = 0."""
    d = ext_d(hodge_star(a, g))
    return all(zero_test(c, seed=seed).value for c in d.terms.values())


def codifferential(a, g):
    """Degree-lowering operator, the signed star-d-star composition; on
    Euclidean 1-forms it is the negative divergence, and its square is zero."""
    _require_metric_chart(a, g)
    p = a.degree
    if p < 1:
        raise FormError("codifferential of a 0-form is undefined")
    n = g.chart.dim
    if p > n:
        return DiffForm.zero(g.chart, p - 1)
    sign = g.sign_det * (-1) ** (n * (p + 1) + 1)
    out = hodge_star(ext_d(hodge_star(a, g)), g)
    return out.scale(sign)


def laplacian(a, g):
    """The operator d(delta a) - delta(d a) (see module docstring for how
    it relates to the classical Laplacian / d'Alembertian)."""
    return _laplace_combination(a, g, -1)


def hodge_laplacian(a, g):
    """The classical Laplace-de Rham combination d(delta a) + delta(d a)."""
    return _laplace_combination(a, g, +1)


def _laplace_combination(a, g, sign):
    _require_metric_chart(a, g)
    n = g.chart.dim
    p = a.degree
    if p >= 1:
        term1 = ext_d(codifferential(a, g))
    else:
        term1 = DiffForm.zero(g.chart, p)
    if p < n:
        term2 = codifferential(ext_d(a), g)
    else:
        term2 = DiffForm.zero(g.chart, p)
    return term1 + term2.scale(sign)


def christoffel(g):
    """Levi-Civita connection of a metric (test-fixture helper):
    G^k_{ij} = (1/2) g^{kl} (dg_{lj}/dx^i + dg_{il}/dx^j - dg_{ij}/dx^l)."""
    chart = g.chart
    n = chart.dim
    half = Expr.const(Fraction(1, 2))
    gamma = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                val = ZERO
                for l in range(n):
                    if g.inverse[k][l].is_zero_struct():
                        continue
                    piece = (
                        g.rows[l][j].diff(chart.variables[i])
                        + g.rows[i][l].diff(chart.variables[j])
                        - g.rows[i][j].diff(chart.variables[l])
                    )
                    val = val + g.inverse[k][l] * piece
                gamma[k][i][j] = half * val
    return Connection(chart, gamma)
