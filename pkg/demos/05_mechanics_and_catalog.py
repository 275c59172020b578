"""Mechanics helpers and the built-in relation catalog: Legendre transform
with its degenerate locus, canonical-transformation checks, Green's-theorem
quadrature, and the full named-relation corpus.

Run as: python3 demos/05_mechanics_and_catalog.py
"""

from skewform import (
    canonical_check,
    green_check,
    legendre_transform,
    list_entries,
    run_all,
)

print("== Legendre transform ==")
res = legendre_transform("qdot^2/2 - q^2/2")
print("L = qdot^2/2 - q^2/2  ->  p =", res.p, ",  H =", res.H)

cubic = legendre_transform("qdot^3/3")
print("L = qdot^3/3: degeneracy", cubic.degeneracy, "-> elimination refused;")
print(
    "   sampled degenerate locus (first point): qdot =",
    f"{cubic.locus.zero_points[0]['qdot']:.2e}",
)

print("\n== canonical transformations ==")
swap = canonical_check("p", "-q")
print("(Q, P) = (p, -q): canonical =", swap.is_canonical, ", generating function W =", swap.W)
bad = canonical_check("q^2", "p")
print("(Q, P) = (q^2, p): canonical =", bad.is_canonical)

print("\n== Green's theorem by quadrature ==")
rep = green_check("-y^3", "x^3", grid_n=256)
print(f"P = -y^3, Q = x^3 on the unit square: circulation = {rep.circulation:.12f}")
print(f"area integral of dQ/dx - dP/dy       = {rep.area_integral:.12f}")
print(f"difference: {rep.abs_diff:.2e}")

print("\n== the catalog ==")
for name, title in list_entries():
    print(f"  {name:26s} {title}")
print()
for report in run_all(seed=0):
    status = "pass" if report.passed else "FAIL"
    print(f"{status}  {report.name} ({len(report.checks)} checks)")
