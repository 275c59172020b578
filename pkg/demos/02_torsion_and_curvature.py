"""Connections with torsion: how the commutator of a 1-form picks up a
basis-variation term, and what survives when the connection is symmetric.

Run as: python3 demos/02_torsion_and_curvature.py
"""

from skewform import (
    Chart,
    Connection,
    bianchi_first_check,
    commutator1,
    covariant_deriv,
    evo_commutator,
    evo_d,
    ext_d,
    parse_form,
    riemann,
    torsion,
)

chart = Chart(["x", "y"])
a = parse_form("y*d[x]", chart)

print("== ordinary (flat) setting ==")
K0 = commutator1(a)
print("plain commutator K12 of y*dx:", K0[0][1])
print("matches d:", ext_d(a))

print("\n== a connection with torsion: G^1_{21} = x ==")
c = Connection.from_entries(chart, {(1, 2, 1): "x"})
T = torsion(c)
print("torsion T^1_{12} =", T[0][0][1], "  T^1_{21} =", T[0][1][0])
m = covariant_deriv(a, c)
print("covariant derivatives: a_{1;2} =", m[0][1], "  a_{2;1} =", m[1][0])
K = evo_commutator(a, c)
print("commutator with the torsion term: K12 =", K[0][1])
print("the differential acquires the same term:", evo_d(a, c))

print("\n== symmetric connections change nothing ==")
sym = Connection.from_entries(chart, {(1, 1, 2): "x*y", (1, 2, 1): "x*y"})
print("evo_d == ext_d:", evo_d(a, sym) == ext_d(a))

print("\n== curvature and the first Bianchi identity ==")
c3 = Connection.from_entries(
    Chart(["x", "y", "z"]),
    {(1, 1, 2): "z", (1, 2, 1): "z", (2, 3, 3): "x*y", (3, 1, 3): "y", (3, 3, 1): "y"},
)
R = riemann(c3)
print("a curvature component R^1_{212}:", R[0][1][0][1])
print("cyclic sum vanishes:", bianchi_first_check(c3))
