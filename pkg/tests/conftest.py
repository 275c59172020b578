"""Shared randomized-fixture builders (seeded, deterministic)."""

from itertools import combinations

from skewform.symexpr import Expr
from skewform.exterior import Chart, DiffForm
from skewform.manifold import Connection


def random_poly(rng, names, max_terms=3, max_total_deg=4, coeff_range=4):
    """Random polynomial Expr over the given variables with bounded total degree."""
    e = Expr.const(0)
    for _ in range(rng.randint(1, max_terms)):
        c = rng.randint(-coeff_range, coeff_range)
        if c == 0:
            c = 1
        t = Expr.const(c)
        budget = rng.randint(0, max_total_deg)
        for v in names:
            if budget <= 0:
                break
            d = rng.randint(0, budget)
            budget -= d
            if d:
                t = t * Expr.var(v) ** d
        e = e + t
    return e


def random_form(rng, chart, degree, density=0.8, **kw):
    terms = {}
    for idx in combinations(range(chart.dim), degree):
        if rng.random() < density:
            terms[idx] = random_poly(rng, chart.variables, **kw)
    return DiffForm(chart, degree, terms)


def random_symmetric_connection(rng, chart, **kw):
    n = chart.dim
    gamma = [[[None] * n for _ in range(n)] for _ in range(n)]
    for s in range(n):
        for a in range(n):
            for b in range(a, n):
                e = random_poly(rng, chart.variables, **kw)
                gamma[s][a][b] = e
                gamma[s][b][a] = e
    return Connection(chart, gamma)


def random_connection(rng, chart, **kw):
    n = chart.dim
    gamma = [
        [[random_poly(rng, chart.variables, **kw) for _ in range(n)] for _ in range(n)]
        for _ in range(n)
    ]
    return Connection(chart, gamma)
