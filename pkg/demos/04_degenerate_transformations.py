"""From a nonidentical relation to an identical one: restriction to a
pseudostructure where the right side closes, then integration down a degree.

The running example is the momentum 1-form omega = p dq - (p^2/2) dt: its
differential never vanishes in the full chart, but along the trajectory
family (t, q, p) = (u, c*u, c) the restricted form closes and integrates
to the scalar c^2 u / 2.

Run as: python3 demos/04_degenerate_transformations.py
"""

from skewform import (
    Chart,
    DiffForm,
    Expr,
    Pseudostructure,
    Relation,
    classify,
    classify_on,
    degenerate_scan,
    ext_d,
    form_to_text,
    integrate_chain,
    parse_expr,
    parse_form,
    pullback,
)

chart = Chart(["t", "q", "p"])
omega = parse_form("p*d[q] - (p^2/2)*d[t]", chart)
relation = Relation(DiffForm.zero(chart, 0), omega)

print("== ambient classification ==")
verdict = classify(relation)
print("relation d(psi) =", form_to_text(omega))
print("verdict:", verdict.classification)
print("commutator d(omega):", form_to_text(verdict.commutator))

print("\n== restriction to the trajectory family ==")
traj = Pseudostructure(
    chart,
    Chart(["u", "c"]),
    {"t": Expr.var("u"), "q": Expr.var("c") * Expr.var("u"), "p": Expr.var("c")},
)
print("pseudostructure:", traj)
print("omega restricted:", form_to_text(pullback(omega, traj)))
restricted = classify_on(relation, traj)
print("verdict on the surface:", restricted.classification)
print("d_pi(omega_pi) = 0:", restricted.pi_closure)

print("\n== sequential integration ==")
for step in integrate_chain(relation, traj):
    print(f"degree {step.degree}:  {form_to_text(step.left)} = {form_to_text(step.right)} + const")
    print("   antiderivative verified:", ext_d(step.right) == pullback(omega, traj))

print("\n== the functional expressions whose zeros enable the transition ==")
qp = Chart(["q", "p"])
bracket = degenerate_scan(
    [parse_expr("q^2 + p^2"), parse_expr("q*p")], "poisson", qp, pairing=[("q", "p")]
)
print("poisson bracket {q^2+p^2, qp} =", bracket.expression)
pt = bracket.zero_points[0]
print(f"a sampled point of its zero locus: q = {pt['q']:.6f}, p = {pt['p']:.6f}")
hess = degenerate_scan([[parse_expr("2*qdot")]], "determinant", Chart(["qdot"]))
print("Hessian determinant 2*qdot vanishes at qdot ~", f"{hess.zero_points[0]['qdot']:.2e}")
