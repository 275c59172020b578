"""Hodge duals, the codifferential, and the Laplace / d'Alembert operators
for Euclidean and Minkowski metrics.

Run as: python3 demos/03_hodge_duality.py
"""

from skewform import (
    Chart,
    DiffForm,
    Metric,
    codifferential,
    dual_closure_check,
    hodge_laplacian,
    hodge_star,
    laplacian,
    parse_expr,
    parse_form,
)

chart = Chart(["x", "y"])
g = Metric.euclidean(chart)
dx = DiffForm.basis(chart, "x")
dy = DiffForm.basis(chart, "y")

print("== 2D Euclidean star ==")
print("*1  =", hodge_star(DiffForm.scalar(chart, 1), g))
print("*dx =", hodge_star(dx, g))
print("*dy =", hodge_star(dy, g))
print("**dx =", hodge_star(hodge_star(dx, g), g), " (involution, sign (-1)^{p(n-p)} sgn det g)")

print("\n== dual-form closure (the pseudostructure condition) ==")
print("d(*dx) = 0:", dual_closure_check(dx, g))
print("d(*(x dx)) = 0:", dual_closure_check(dx.scale(parse_expr("x")), g))

print("\n== codifferential: minus the divergence on 1-forms ==")
w = parse_form("x*d[x] + y*d[y]", chart)
print("delta(x dx + y dy) =", codifferential(w, g).as_scalar())

print("\n== the d(delta) - delta(d) operator ==")
f = DiffForm.scalar(chart, parse_expr("x^2 + y^2"))
print("on x^2 + y^2 (Euclidean):", laplacian(f, g).as_scalar())
print("classical d(delta)+delta(d) combination:", hodge_laplacian(f, g).as_scalar())

chm = Chart(["t", "x"])
gm = Metric.minkowski(chm)
wave = DiffForm.scalar(chm, parse_expr("t^2 - x^2"))
print("on t^2 - x^2 with diag(1,-1): ", laplacian(wave, gm).as_scalar(), " (the wave operator)")

print("\n== a variable metric with an exact volume factor ==")
gv = Metric.diagonal(chart, [parse_expr("1"), parse_expr("x^2")])
print("sqrt|det g| for diag(1, x^2):", gv.volume)
print("*dx in that metric:", hodge_star(dx, gv))
