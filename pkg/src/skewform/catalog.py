"""Executable corpus of named identical/nonidentical relations.

Each entry builds its fixtures, runs the relevant engine operations, and
reports one pass/fail record per check, reproducible bit-for-bit for a
fixed seed.  The mechanics helpers (Legendre transform with degeneracy
reporting, canonical-transformation test with generating-function
recovery) and the Green-theorem quadrature harness live here as well.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .symexpr import Expr, ExprError, ZERO, ONE, parse_expr
from .exterior import (
    Chart,
    DiffForm,
    ext_d,
    form_to_text,
    homotopy_antiderivative,
    is_closed,
    parse_form,
)
from .manifold import Connection, TorsionError, bianchi_first_check, riemann
from .duality import Metric, christoffel, codifferential, hodge_star, laplacian
from .relations import (
    CLOSED_RHS,
    IDENTICAL,
    NONIDENTICAL,
    Pseudostructure,
    Relation,
    classify,
    classify_on,
    degenerate_scan,
    integrate_chain,
)


class CatalogError(ExprError):
    pass


# -- mechanics helpers ---------------------------------------------------------------


class LegendreResult:
    """Momentum, Hamiltonian (None when elimination is refused), the
    degeneracy expression, and a zero-locus report for refusals."""

    __slots__ = ("p", "H", "degeneracy", "locus")

    def __init__(self, p, H, degeneracy, locus=None):
        self.p = p
        self.H = H
        self.degeneracy = degeneracy
        self.locus = locus

    def __repr__(self):
        h = self.H if self.H is not None else "<refused>"
        return f"LegendreResult(p={self.p}, H={h}, degeneracy={self.degeneracy})"


def _poly_degree_in(e, name):
    deg = 0
    for m in e.num.terms:
        for g, ge in m.items:
            if g == name:
                deg = max(deg, ge)
    return deg


def legendre_transform(L, qdot="qdot", momentum="p", seed=0):
    """Passage from a Lagrangian L(q, qdot) to the Hamiltonian side.

    For L at most quadratic in qdot the velocity is eliminated exactly and
    H = p*qdot - L is returned with the position coordinate passing
    through untouched.  For cubic L the degeneracy d^2L/dqdot^2 still
    depends on the velocity: its vanishing locus is sampled and
    elimination is refused.  An identically vanishing degeneracy is an
    error (nothing to invert).
    """
    if isinstance(L, str):
        L = parse_expr(L)
    if not L.is_polynomial_in({qdot}):
        raise CatalogError(f"Lagrangian must be polynomial in {qdot}")
    deg = _poly_degree_in(L, qdot)
    if deg > 3:
        raise CatalogError(f"Lagrangian degree {deg} in {qdot} exceeds the supported 3")
    p_expr = L.diff(qdot)
    degeneracy = p_expr.diff(qdot)
    if degeneracy.is_zero_struct():
        raise CatalogError("degenerate Lagrangian: d^2 L / d qdot^2 vanishes identically")
    if deg == 3:
        locus = degenerate_scan([[degeneracy]], "determinant", Chart([qdot]), seed=seed)
        return LegendreResult(p_expr, None, degeneracy, locus)
    p_sym = Expr.var(momentum)
    b = p_expr.subst({qdot: ZERO})
    qdot_sol = (p_sym - b) / degeneracy
    H = (p_sym * Expr.var(qdot) - L).subst({qdot: qdot_sol})
    return LegendreResult(p_expr, H, degeneracy)


class CanonicalCheckResult:
    __slots__ = ("is_canonical", "sigma", "W")

    def __init__(self, is_canonical, sigma, W):
        self.is_canonical = is_canonical
        self.sigma = sigma
        self.W = W

    def __repr__(self):
        w = f", W={self.W}" if self.W is not None else ""
        return f"CanonicalCheckResult({self.is_canonical}{w})"


def canonical_check(Q, P, q="q", p="p", seed=0):
    """Is (q,p) -> (Q(q,p), P(q,p)) canonical?  Tests closedness of
    sigma = p dq - P dQ and, for closed polynomial sigma, recovers the
    generating function W with dW = sigma."""
    if isinstance(Q, str):
        Q = parse_expr(Q)
    if isinstance(P, str):
        P = parse_expr(P)
    chart = Chart([q, p])
    p_sym = Expr.var(p)
    coeff_dq = p_sym - P * Q.diff(q)
    coeff_dp = -P * Q.diff(p)
    terms = {}
    if not coeff_dq.is_zero_struct():
        terms[(0,)] = coeff_dq
    if not coeff_dp.is_zero_struct():
        terms[(1,)] = coeff_dp
    sigma = DiffForm(chart, 1, terms)
    canonical = is_closed(sigma, seed=seed)
    W = None
    if canonical:
        if sigma.is_zero_form():
            W = ZERO
        elif sigma.is_polynomial():
            W = homotopy_antiderivative(sigma, seed=seed).as_scalar()
    return CanonicalCheckResult(canonical, sigma, W)


# -- quadrature (Green's theorem) -----------------------------------------------------


def _py_source(e):
    """Render an Expr as a numpy-evaluable Python expression string."""

    def mono_src(m, c):
        factors = []
        if c != 1 or not m.items:
            factors.append(f"({c.numerator}/{c.denominator})")
        for g, ge in m.items:
            if isinstance(g, str):
                base = g
            else:
                fn = {"sin": "np.sin", "cos": "np.cos", "exp": "np.exp", "ln": "np.log"}[g.fn]
                base = f"{fn}({_py_source(g.arg)})"
            factors.append(base if ge == 1 else f"{base}**{ge}")
        return "*".join(factors)

    def poly_src(p):
        if p.is_zero():
            return "0.0"
        return "(" + " + ".join(mono_src(m, c) for m, c in sorted(p.terms.items(), key=lambda t: t[0].sort_key())) + ")"

    src = poly_src(e.num)
    if not (e.den.is_const() and e.den.const_value() == 1):
        src = f"({src})/({poly_src(e.den)})"
    return src


def _compile_xy(e):
    src = f"lambda x, y: (({_py_source(e)}) + 0.0*x + 0.0*y)"
    return eval(src, {"np": np})


def _simpson_weights(n, h):
    if n % 2 or n < 2:
        raise CatalogError(f"composite Simpson needs an even panel count, got {n}")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


class GreenReport:
    __slots__ = ("circulation", "area_integral", "abs_diff", "grid_n")

    def __init__(self, circulation, area_integral, grid_n):
        self.circulation = circulation
        self.area_integral = area_integral
        self.abs_diff = abs(circulation - area_integral)
        self.grid_n = grid_n

    def to_json(self):
        return {
            "circulation": repr(self.circulation),
            "area_integral": repr(self.area_integral),
            "abs_diff": repr(self.abs_diff),
            "grid_n": self.grid_n,
        }

    def __repr__(self):
        return (
            f"GreenReport(circulation={self.circulation!r}, area={self.area_integral!r}, "
            f"diff={self.abs_diff:.3e}, n={self.grid_n})"
        )


def green_check(P, Q, grid_n=256):
    """Circulation of P dx + Q dy around the unit square against the area
    integral of dQ/dx - dP/dy, both by composite Simpson with grid_n panels."""
    if isinstance(P, str):
        P = parse_expr(P)
    if isinstance(Q, str):
        Q = parse_expr(Q)
    extra = (P.variables() | Q.variables()) - {"x", "y"}
    if extra:
        raise CatalogError(f"integrands must be functions of x and y only, found {sorted(extra)}")
    fP = _compile_xy(P)
    fQ = _compile_xy(Q)
    curl = Q.diff("x") - P.diff("y")
    fC = _compile_xy(curl)

    s = np.linspace(0.0, 1.0, grid_n + 1)
    w = _simpson_weights(grid_n, 1.0 / grid_n)
    with np.errstate(all="ignore"):
        edges = (
            fP(s, np.zeros_like(s)) @ w
            + fQ(np.ones_like(s), s) @ w
            - fP(s, np.ones_like(s)) @ w
            - fQ(np.zeros_like(s), s) @ w
        )
        X, Y = np.meshgrid(s, s, indexing="ij")
        vals = fC(X, Y)
    if not np.all(np.isfinite(vals)) or not np.isfinite(edges):
        raise CatalogError("singular integrand on the unit square")
    area = w @ vals @ w
    return GreenReport(float(edges), float(area), grid_n)


# -- entry machinery ------------------------------------------------------------------


class EntryReport:
    __slots__ = ("name", "title", "checks")

    def __init__(self, name, title):
        self.name = name
        self.title = title
        self.checks = []

    def add(self, label, ok, expected=None, actual=None):
        self.checks.append(
            {
                "label": label,
                "ok": bool(ok),
                "expected": None if expected is None else str(expected),
                "actual": None if actual is None else str(actual),
            }
        )

    @property
    def passed(self):
        return all(c["ok"] for c in self.checks)

    def to_json(self):
        return {
            "name": self.name,
            "title": self.title,
            "passed": self.passed,
            "checks": self.checks,
        }

    def __repr__(self):
        status = "pass" if self.passed else "FAIL"
        return f"EntryReport({self.name}: {status}, {len(self.checks)} checks)"


def _entry_poincare(seed):
    rep = EntryReport("poincare-invariant", "Momentum 1-form p dq - H dt along trajectories")
    chart = Chart(["t", "q", "p"])
    omega = parse_form("p*d[q] - (p^2/2)*d[t]", chart)
    r = Relation(DiffForm.zero(chart, 0), omega)
    v = classify(r, seed=seed)
    rep.add("ambient classification", v.classification == NONIDENTICAL, NONIDENTICAL, v.classification)
    expected_comm = parse_form("p*d[t]^d[p] - d[q]^d[p]", chart)
    rep.add(
        "ambient commutator d(omega)",
        v.commutator == expected_comm,
        form_to_text(expected_comm),
        form_to_text(v.commutator),
    )
    params = Chart(["u", "c"])
    traj = Pseudostructure(
        chart,
        params,
        {"t": Expr.var("u"), "q": Expr.var("c") * Expr.var("u"), "p": Expr.var("c")},
        seed=seed,
    )
    von = classify_on(r, traj, seed=seed)
    rep.add("restricted classification", von.classification == CLOSED_RHS, CLOSED_RHS, von.classification)
    rep.add("restricted closure d_pi(omega_pi) = 0", von.pi_closure is True, True, von.pi_closure)
    steps = integrate_chain(r, traj, seed=seed)
    rep.add("chain descends one degree", len(steps) == 1 and steps[0].degree == 0, "1 step to degree 0", f"{len(steps)} steps")
    if steps:
        theta = steps[0].right
        expected_theta = DiffForm.scalar(params, parse_expr("c^2*u/2"))
        rep.add("integrated scalar", theta == expected_theta, form_to_text(expected_theta), form_to_text(theta))
        from .relations import pullback

        rep.add(
            "antiderivative verified: d_pi(theta) = omega_pi",
            ext_d(theta) == pullback(omega, traj),
        )
    return rep


def _entry_cauchy_riemann(seed):
    rep = EntryReport("cauchy-riemann", "Closure of the 1-forms attached to an analytic pair")
    chart = Chart(["x", "y"])
    u = parse_expr("x^2 - y^2")
    v = parse_expr("2*x*y")
    omega1 = DiffForm(chart, 1, {(0,): u, (1,): -v})
    omega2 = DiffForm(chart, 1, {(0,): v, (1,): u})
    rep.add("u dx - v dy closed", is_closed(omega1, seed=seed), True, is_closed(omega1, seed=seed))
    rep.add("v dx + u dy closed", is_closed(omega2, seed=seed), True, is_closed(omega2, seed=seed))
    bad = DiffForm(chart, 1, {(0,): parse_expr("x*y"), (1,): u})
    rep.add("non-conjugate pair is not closed", not is_closed(bad, seed=seed), False, is_closed(bad, seed=seed))
    return rep


def _entry_vital_force(seed):
    rep = EntryReport("vital-force", "Kinetic energy differential against a potential force field")
    chart = Chart(["v1", "v2"])
    m = Expr.var("m")
    T = m * (Expr.var("v1") ** 2 + Expr.var("v2") ** 2) / 2
    omega = DiffForm(chart, 1, {(0,): m * Expr.var("v1"), (1,): m * Expr.var("v2")})
    v = classify(Relation(DiffForm.scalar(chart, T), omega), seed=seed)
    rep.add("potential force: identical", v.classification == IDENTICAL, IDENTICAL, v.classification)
    rotational = omega + DiffForm(chart, 1, {(0,): -Expr.var("v2"), (1,): Expr.var("v1")})
    v2 = classify(Relation(DiffForm.scalar(chart, T), rotational), seed=seed)
    rep.add("rotational extra force: nonidentical", v2.classification == NONIDENTICAL, NONIDENTICAL, v2.classification)
    expected = parse_form("2*d[v1]^d[v2]", chart)
    rep.add("rotational commutator", v2.commutator == expected, form_to_text(expected), form_to_text(v2.commutator))
    return rep


def _entry_thermo_first(seed):
    rep = EntryReport("thermo-first-principle", "Heat 1-form dE + p dV is unclosed")
    chart = Chart(["E", "V", "p"])
    omega = parse_form("d[E] + p*d[V]", chart)
    v = classify(Relation(DiffForm.zero(chart, 0), omega), seed=seed)
    rep.add("classification", v.classification == NONIDENTICAL, NONIDENTICAL, v.classification)
    expected = parse_form("-d[V]^d[p]", chart)
    rep.add("commutator dp ^ dV", v.commutator == expected, form_to_text(expected), form_to_text(v.commutator))
    return rep


def _entry_thermo_second(seed):
    rep = EntryReport(
        "thermo-second-principle", "Entropy form (dE + p dV)/T on the ideal-gas state surface"
    )
    chart = Chart(["E", "V", "p", "T"])
    omega = parse_form("(1/T)*d[E] + (p/T)*d[V]", chart)
    r = Relation(DiffForm.zero(chart, 0), omega)
    v = classify(r, seed=seed)
    rep.add("ambient classification", v.classification == NONIDENTICAL, NONIDENTICAL, v.classification)
    params = Chart(["a", "b"])
    a, b = Expr.var("a"), Expr.var("b")
    third2 = Expr.const(Fraction(2, 3))
    gas = Pseudostructure(
        chart,
        params,
        {"E": a, "V": b, "p": third2 * a / b, "T": third2 * a},
        seed=seed,
    )
    von = classify_on(r, gas, seed=seed)
    rep.add("state-surface closure", von.pi_closure is True, True, von.pi_closure)
    rep.add("state-surface classification", von.classification == CLOSED_RHS, CLOSED_RHS, von.classification)
    from .relations import pullback
    from .symexpr import ln

    entropy = Expr.const(Fraction(3, 2)) * ln(a) + ln(b)
    witness = classify(
        Relation(DiffForm.scalar(params, entropy), pullback(omega, gas)), seed=seed
    )
    rep.add("entropy witness: identical", witness.classification == IDENTICAL, IDENTICAL, witness.classification)
    rep.add("witness verdict is exact", not witness.probabilistic, False, witness.probabilistic)
    return rep


def _entry_bianchi(seed):
    rep = EntryReport("bianchi-identity", "First Bianchi identity and a flat-metric curvature check")
    ch2 = Chart(["x", "y"])
    sym2 = Connection.from_entries(
        ch2,
        {
            (1, 1, 1): "x*y",
            (1, 1, 2): "x^2",
            (1, 2, 1): "x^2",
            (1, 2, 2): "y",
            (2, 1, 1): "x + y",
            (2, 1, 2): "y^2",
            (2, 2, 1): "y^2",
            (2, 2, 2): "x",
        },
    )
    rep.add("cyclic sum vanishes (2D)", bianchi_first_check(sym2, seed=seed), True)
    ch3 = Chart(["x", "y", "z"])
    sym3 = Connection.from_entries(
        ch3,
        {
            (1, 1, 2): "z",
            (1, 2, 1): "z",
            (2, 3, 3): "x*y",
            (3, 1, 3): "y",
            (3, 3, 1): "y",
            (2, 2, 2): "x + z",
        },
    )
    rep.add("cyclic sum vanishes (3D)", bianchi_first_check(sym3, seed=seed), True)
    torsionful = Connection.from_entries(ch2, {(1, 2, 1): "x"})
    try:
        bianchi_first_check(torsionful, seed=seed)
        rep.add("torsionful connection rejected", False, "TorsionError", "no error")
    except TorsionError:
        rep.add("torsionful connection rejected", True, "TorsionError", "TorsionError")
    polar_like = Metric.diagonal(ch2, [ONE, parse_expr("x^2")])
    con = christoffel(polar_like)
    rep.add("Christoffel 1/x entry", con[(1, 0, 1)] == parse_expr("1/x"), "1/x", con[(1, 0, 1)])
    R = riemann(con)
    flat = all(
        R[r][s][mu][nu].is_zero_struct()
        for r in range(2)
        for s in range(2)
        for mu in range(2)
        for nu in range(2)
    )
    rep.add("diag(1, x^2) is flat", flat, True, flat)
    return rep


def _entry_canonical(seed):
    rep = EntryReport("canonical-transformation", "Generating-function test p dq = P dQ + dW")
    res = canonical_check("p", "-q", seed=seed)
    rep.add("(Q,P)=(p,-q) canonical", res.is_canonical, True, res.is_canonical)
    rep.add("W = p*q", res.W == parse_expr("p*q"), "p*q", res.W)
    res2 = canonical_check("q", "p", seed=seed)
    rep.add("identity map canonical", res2.is_canonical and res2.W == ZERO, "W = 0", res2.W)
    res3 = canonical_check("q^2", "p", seed=seed)
    rep.add("(Q,P)=(q^2,p) not canonical", not res3.is_canonical, False, res3.is_canonical)
    return rep


def _entry_legendre(seed):
    rep = EntryReport("legendre-hamilton", "Velocity elimination and its degenerate locus")
    res = legendre_transform("qdot^2/2 - q^2/2", seed=seed)
    rep.add("p = qdot", res.p == parse_expr("qdot"), "qdot", res.p)
    rep.add(
        "H = p^2/2 + q^2/2",
        res.H == parse_expr("p^2/2 + q^2/2"),
        "p^2/2 + q^2/2",
        res.H,
    )
    rep.add("degeneracy = 1", res.degeneracy == ONE, "1", res.degeneracy)
    cubic = legendre_transform("qdot^3/3", seed=seed)
    rep.add("cubic: elimination refused", cubic.H is None, None, cubic.H)
    rep.add("cubic degeneracy = 2*qdot", cubic.degeneracy == parse_expr("2*qdot"), "2*qdot", cubic.degeneracy)
    locus_ok = cubic.locus is not None and cubic.locus.zero_points and all(
        abs(2 * pt["qdot"]) < 1e-9 for pt in cubic.locus.zero_points
    )
    rep.add("cubic locus at qdot = 0", locus_ok, "|2*qdot| < 1e-9", f"{len(cubic.locus.zero_points)} samples")
    try:
        legendre_transform("qdot", seed=seed)
        rep.add("linear Lagrangian rejected", False, "CatalogError", "no error")
    except CatalogError:
        rep.add("linear Lagrangian rejected", True, "CatalogError", "CatalogError")
    return rep


def _entry_green(seed):
    rep = EntryReport("green-theorem", "Boundary circulation against the curl integral")
    lin = green_check("-y", "x", grid_n=64)
    rep.add("curl 2 circulation", abs(lin.circulation - 2.0) < 1e-12, 2.0, lin.circulation)
    rep.add("curl 2 match", lin.abs_diff < 1e-12, "< 1e-12", lin.abs_diff)
    closed = green_check("x^2", "y^2", grid_n=64)
    rep.add("closed case: both sides 0", abs(closed.circulation) < 1e-12 and abs(closed.area_integral) < 1e-12)
    cubic = green_check("-y^3", "x^3", grid_n=256)
    rep.add("cubic circulation = 2", abs(cubic.circulation - 2.0) < 1e-8, 2.0, cubic.circulation)
    rep.add("cubic abs_diff < 1e-8", cubic.abs_diff < 1e-8, "< 1e-8", cubic.abs_diff)
    e128 = abs(green_check("-y^5", "x^5", grid_n=128).area_integral - 2.0)
    e256 = abs(green_check("-y^5", "x^5", grid_n=256).area_integral - 2.0)
    ratio = e128 / e256 if e256 else float("inf")
    rep.add("Simpson-order halving ratio in [8, 32]", 8.0 <= ratio <= 32.0, "[8, 32]", ratio)
    return rep


def _entry_duality(seed):
    rep = EntryReport("duality-operators", "Hodge duals, codifferential and the wave/Laplace operators")
    ch = Chart(["x", "y"])
    g = Metric.euclidean(ch)
    dx, dy = DiffForm.basis(ch, "x"), DiffForm.basis(ch, "y")
    rep.add("star dx = dy", hodge_star(dx, g) == dy, "d[y]", form_to_text(hodge_star(dx, g)))
    rep.add("star dy = -dx", hodge_star(dy, g) == -dx, "-d[x]", form_to_text(hodge_star(dy, g)))
    div_form = DiffForm(ch, 1, {(0,): Expr.var("x"), (1,): Expr.var("y")})
    delta = codifferential(div_form, g).as_scalar()
    rep.add("delta(x dx + y dy) = -2", delta == Expr.const(-2), -2, delta)
    lap = laplacian(DiffForm.scalar(ch, parse_expr("x^2 + y^2")), g).as_scalar()
    rep.add("laplacian(x^2 + y^2) = 4", lap == Expr.const(4), 4, lap)
    chm = Chart(["t", "x"])
    gm = Metric.minkowski(chm)
    wave = laplacian(DiffForm.scalar(chm, parse_expr("t^2 - x^2")), gm).as_scalar()
    rep.add("laplacian(t^2 - x^2) = 4 on diag(1,-1)", wave == Expr.const(4), 4, wave)
    rep.add("consistent operator sign", lap == wave, str(lap), str(wave))
    vol = hodge_star(DiffForm.scalar(ch, 1), g)
    rep.add("star 1 = volume form", vol == parse_form("d[x]^d[y]", ch))
    return rep


CATALOG = {
    "poincare-invariant": _entry_poincare,
    "cauchy-riemann": _entry_cauchy_riemann,
    "vital-force": _entry_vital_force,
    "thermo-first-principle": _entry_thermo_first,
    "thermo-second-principle": _entry_thermo_second,
    "bianchi-identity": _entry_bianchi,
    "canonical-transformation": _entry_canonical,
    "legendre-hamilton": _entry_legendre,
    "green-theorem": _entry_green,
    "duality-operators": _entry_duality,
}

_TITLES = {
    "poincare-invariant": "Momentum 1-form p dq - H dt along trajectories",
    "cauchy-riemann": "Closure of the 1-forms attached to an analytic pair",
    "vital-force": "Kinetic energy differential against a potential force field",
    "thermo-first-principle": "Heat 1-form dE + p dV is unclosed",
    "thermo-second-principle": "Entropy form (dE + p dV)/T on the ideal-gas state surface",
    "bianchi-identity": "First Bianchi identity and a flat-metric curvature check",
    "canonical-transformation": "Generating-function test p dq = P dQ + dW",
    "legendre-hamilton": "Velocity elimination and its degenerate locus",
    "green-theorem": "Boundary circulation against the curl integral",
    "duality-operators": "Hodge duals, codifferential and the wave/Laplace operators",
}


def list_entries():
    return [(name, _TITLES[name]) for name in CATALOG]


def run_entry(name, seed=0):
    if name not in CATALOG:
        raise CatalogError(f"unknown catalog entry {name!r}; try one of {sorted(CATALOG)}")
    return CATALOG[name](seed)


def run_all(seed=0, parallel=True):
    """Run every entry; entries are independent, so they may fan out across
    a thread pool, with reports reassembled in catalog order."""
    names = list(CATALOG)
    if parallel:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=min(8, len(names))) as pool:
            futures = {name: pool.submit(run_entry, name, seed) for name in names}
            return [futures[name].result() for name in names]
    return [run_entry(name, seed) for name in names]
