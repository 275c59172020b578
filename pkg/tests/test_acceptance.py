"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here, nothing is deferred.
"""

import json
import random
import subprocess
import sys
import time
import textwrap

import numpy as np
import pytest

from skewform.symexpr import Expr, parse_expr
from skewform.exterior import (
    Chart,
    DiffForm,
    commutator1,
    ext_d,
    homotopy_antiderivative,
    is_closed,
    parse_form,
)
from skewform.manifold import Connection, bianchi_first_check, evo_commutator, riemann
from skewform.duality import Metric, codifferential, hodge_star, laplacian
from skewform.relations import (
    CLOSED_RHS,
    NONIDENTICAL,
    Pseudostructure,
    Relation,
    classify,
    classify_on,
    degenerate_scan,
    integrate_chain,
    interior_d,
    pullback,
)
from skewform.catalog import canonical_check, green_check, legendre_transform
from conftest import (
    random_form,
    random_poly,
    random_symmetric_connection,
)


def _report(num, label, ok):
    print(f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {label}")
    assert ok, f"criterion {num}: {label}"


def _population_dd(seed=100, count=200):
    rng = random.Random(seed)
    forms = []
    while len(forms) < count:
        dim = rng.randint(2, 4)
        chart = Chart([f"x{i}" for i in range(1, dim + 1)])
        degree = rng.randint(0, min(3, dim))
        forms.append(random_form(rng, chart, degree, max_total_deg=4))
    return forms


def test_criterion_1_dd_zero_suite():
    start = time.monotonic()
    forms = _population_dd()
    ok = all(ext_d(ext_d(a)).is_zero_form() for a in forms)
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 10.0
    _report(1, f"dd = 0 on {len(forms)} randomized forms in {elapsed:.2f}s (< 10 s)", ok)


def test_criterion_2_exact_implies_closed():
    forms = _population_dd()  # the criterion-1 population
    ok = all(is_closed(ext_d(a)) for a in forms)
    _report(2, "is_closed(ext_d(a)) on the same randomized population", ok)


def test_criterion_3_torsion_reduction():
    rng = random.Random(102)
    ch = Chart(["x", "y"])
    ok = True
    for _ in range(100):
        dim = rng.randint(2, 3)
        chart = Chart([f"x{i}" for i in range(1, dim + 1)])
        a = random_form(rng, chart, 1, max_total_deg=3)
        c = random_symmetric_connection(rng, chart, max_total_deg=2)
        K = evo_commutator(a, c)
        K0 = commutator1(a)
        ok = ok and all(
            K[i][j] == K0[i][j] for i in range(chart.dim) for j in range(chart.dim)
        )
    fixture_a = parse_form("y*d[x]", ch)
    fixture_c = Connection.from_entries(ch, {(1, 2, 1): "x"})
    K = evo_commutator(fixture_a, fixture_c)
    ok = ok and K[0][1] == parse_expr("-1 + x*y")
    _report(3, "evo_commutator = commutator1 for 100 symmetric connections; K12 = -1 + x*y", ok)


def test_criterion_4_homotopy_inverse():
    rng = random.Random(103)
    ok = True
    for _ in range(100):
        dim = rng.randint(2, 4)
        chart = Chart([f"x{i}" for i in range(1, dim + 1)])
        beta = random_form(rng, chart, rng.randint(0, min(2, dim - 1)), max_total_deg=3)
        a = ext_d(beta)
        ok = ok and ext_d(homotopy_antiderivative(a)) == a
    _report(4, "d(homotopy_antiderivative(d(beta))) = d(beta) on 100 closed forms", ok)


def test_criterion_5_naturality():
    rng = random.Random(104)
    ok = True
    for _ in range(100):
        dim = rng.randint(2, 4)
        m = rng.randint(1, dim - 1)
        ambient = Chart([f"x{i}" for i in range(1, dim + 1)])
        params = Chart([f"u{i}" for i in range(1, m + 1)])
        mapping = {}
        for i, name in enumerate(ambient.variables):
            mapping[name] = Expr.var(params.variables[i % m]) + random_poly(
                rng, params.variables, max_terms=2, max_total_deg=2
            )
        s = Pseudostructure(ambient, params, mapping)
        a = random_form(rng, ambient, rng.randint(0, min(2, dim)), max_total_deg=2)
        ok = ok and interior_d(a, s) == pullback(ext_d(a), s)
    _report(5, "pullback commutes with d on 100 (form, pseudostructure) pairs", ok)


def test_criterion_6_hodge_involution_and_delta_squared():
    rng = random.Random(105)
    ok = True
    for dim in (2, 3, 4):
        chart = Chart([f"x{i}" for i in range(1, dim + 1)])
        for g in (Metric.euclidean(chart), Metric.minkowski(chart)):
            for p in range(0, dim + 1):
                a = random_form(rng, chart, p, max_total_deg=3)
                expected = a.scale((-1) ** (p * (dim - p)) * g.sign_det)
                ok = ok and hodge_star(hodge_star(a, g), g) == expected
                if p >= 2:
                    ok = ok and codifferential(codifferential(a, g), g).is_zero_form()
    _report(6, "star-star involution and delta-delta = 0, Euclidean+Minkowski dims 2-4", ok)


def test_criterion_7_operator_identification():
    ch = Chart(["x", "y"])
    chm = Chart(["t", "x"])
    lap = laplacian(DiffForm.scalar(ch, parse_expr("x^2 + y^2")), Metric.euclidean(ch)).as_scalar()
    wave = laplacian(
        DiffForm.scalar(chm, parse_expr("t^2 - x^2")), Metric.minkowski(chm)
    ).as_scalar()
    # convention pinned by the divergence test: delta(x dx + y dy) = -2
    pin = codifferential(
        DiffForm(ch, 1, {(0,): Expr.var("x"), (1,): Expr.var("y")}), Metric.euclidean(ch)
    ).as_scalar()
    ok = pin == Expr.const(-2) and lap == Expr.const(4) and wave == Expr.const(4) and lap == wave
    _report(7, "laplacian gives +4 on x^2+y^2 (Euclidean) and t^2-x^2 (Minkowski), one sign", ok)


def test_criterion_8_bianchi_suite():
    rng = random.Random(106)
    ok = True
    for _ in range(50):
        dim = rng.choice([2, 3])
        chart = Chart([f"x{i}" for i in range(1, dim + 1)])
        c = random_symmetric_connection(rng, chart, max_total_deg=2)
        ok = ok and bianchi_first_check(c)
    # finite-difference curvature oracle at 10 random points
    ch = Chart(["x", "y"])
    c = Connection.from_entries(
        ch, {(1, 1, 1): "x*y", (1, 2, 2): "x^2 - y", (2, 1, 2): "y^2", (2, 2, 1): "x"}
    )
    R = riemann(c)
    h = 1e-4

    def gamma_at(pt):
        return np.array(
            [[[float(c.gamma[s][a][b].eval(pt)) for b in range(2)] for a in range(2)] for s in range(2)]
        )

    for _ in range(10):
        pt = {"x": rng.uniform(-2, 2), "y": rng.uniform(-2, 2)}
        g0 = gamma_at(pt)
        dg = np.zeros((2, 2, 2, 2))
        for mu, name in enumerate(ch.variables):
            up, dn = dict(pt), dict(pt)
            up[name] += h
            dn[name] -= h
            dg[mu] = (gamma_at(up) - gamma_at(dn)) / (2 * h)
        for r in range(2):
            for s in range(2):
                for mu in range(2):
                    for nu in range(2):
                        fd = dg[mu][r][nu][s] - dg[nu][r][mu][s]
                        for lam in range(2):
                            fd += g0[r][mu][lam] * g0[lam][nu][s] - g0[r][nu][lam] * g0[lam][mu][s]
                        ok = ok and abs(float(R[r][s][mu][nu].eval(pt)) - fd) < 1e-6
    _report(8, "first Bianchi on 50 symmetric connections; riemann vs FD oracle < 1e-6", ok)


def test_criterion_9_poincare_narrative():
    chart = Chart(["t", "q", "p"])
    omega = parse_form("p*d[q] - (p^2/2)*d[t]", chart)
    relation = Relation(DiffForm.zero(chart, 0), omega)
    ambient = classify(relation)
    expected_comm = parse_form("p*d[t]^d[p] - d[q]^d[p]", chart)  # dp^dq - p dp^dt
    traj = Pseudostructure(
        chart,
        Chart(["u", "c"]),
        {"t": Expr.var("u"), "q": Expr.var("c") * Expr.var("u"), "p": Expr.var("c")},
    )
    restricted = classify_on(relation, traj)
    steps = integrate_chain(relation, traj)
    ok = (
        ambient.classification == NONIDENTICAL
        and ambient.commutator == expected_comm
        and restricted.classification == CLOSED_RHS
        and restricted.pi_closure is True
        and not restricted.probabilistic
        and len(steps) == 1
        and steps[0].degree == 0
        and steps[0].right.as_scalar() == parse_expr("c^2*u/2")
        and ext_d(steps[0].right) == pullback(omega, traj)
    )
    _report(9, "Poincare entry: NONIDENTICAL ambient, d_pi closure, one-degree descent", ok)


def test_criterion_10_degenerate_scan_fixtures():
    chart = Chart(["q", "p"])
    rep = degenerate_scan(
        [parse_expr("q^2 + p^2"), parse_expr("q*p")], "poisson", chart, pairing=[("q", "p")]
    )
    ok = rep.expression == parse_expr("2*(q^2 - p^2)")
    hess = degenerate_scan([[parse_expr("2*qdot")]], "determinant", Chart(["qdot"]))
    ok = ok and not hess.identically_zero and len(hess.zero_points) > 0
    ok = ok and all(abs(2 * pt["qdot"]) < 1e-9 for pt in hess.zero_points)
    _report(10, "{q^2+p^2, qp} = 2(q^2-p^2); Hessian locus |2*qdot| < 1e-9", ok)


def test_criterion_11_legendre_demo():
    rng = random.Random(107)
    ok = True
    for _ in range(5):
        V = random_poly(rng, ["q"], max_terms=3, max_total_deg=4)
        res = legendre_transform(parse_expr("qdot^2/2") - V)
        ok = ok and res.H == parse_expr("p^2/2") + V
    can = canonical_check("p", "-q")
    diff_w = can.W - parse_expr("p*q")
    const = diff_w.diff("p").is_zero_struct() and diff_w.diff("q").is_zero_struct()
    ok = ok and can.is_canonical and const
    _report(11, "H = p^2/2 + V(q) exactly; canonical (p,-q) with W = pq + const", ok)


def test_criterion_12_green_numeric():
    start = time.monotonic()
    rep = green_check("-y^3", "x^3", grid_n=256)
    ok = abs(rep.circulation - 2.0) < 1e-8 and rep.abs_diff < 1e-8
    # Simpson is exact on the cubic pair, so the order-4 halving ratio is
    # measured on the quintic pair (same exact value 2, nonzero 4th derivative)
    e128 = abs(green_check("-y^5", "x^5", grid_n=128).area_integral - 2.0)
    e256 = abs(green_check("-y^5", "x^5", grid_n=256).area_integral - 2.0)
    ratio = e128 / e256 if e256 else float("inf")
    elapsed = time.monotonic() - start
    ok = ok and 8.0 <= ratio <= 32.0 and elapsed < 5.0
    _report(
        12,
        f"|circulation - 2| < 1e-8 at n=256; halving ratio {ratio:.1f} in [8, 32]; {elapsed:.2f}s",
        ok,
    )


SESSION = textwrap.dedent(
    """\
    chart t q p
    form omega = p*d[q] - (p^2/2)*d[t]
    pseudo traj(u, c): t = u, q = c*u, p = c
    relation r = 0 => omega
    classify r expect NONIDENTICAL
    classify r on traj expect CLOSED_RHS
    scan poisson q^2 + p^2, q*p with (q:p) expect nonzero
    chain r on traj
    catalog run --all
    """
)


def test_criterion_13_determinism(tmp_path):
    f = tmp_path / "suite.sf"
    f.write_text(SESSION)

    def run(args):
        return subprocess.run(
            [sys.executable, "-m", "skewform", *args], capture_output=True, text=True
        )

    a = run(["check", str(f), "--json", "--seed", "7"])
    b = run(["check", str(f), "--json", "--seed", "7"])
    c = run(["catalog", "run", "--all", "--json", "--seed", "7"])
    d = run(["catalog", "run", "--all", "--json", "--seed", "7"])
    ok = (
        a.returncode == 0
        and a.stdout == b.stdout
        and c.returncode == 0
        and c.stdout == d.stdout
        and json.loads(a.stdout)["ok"] is True
    )
    _report(13, "two --seed 7 runs produce byte-identical JSON (session and catalog)", ok)
