"""Forms, wedge products, exterior derivatives, and antiderivatives.

Run as: python3 demos/01_exterior_calculus.py
"""

from skewform import (
    Chart,
    DiffForm,
    ext_d,
    homotopy_antiderivative,
    is_closed,
    is_exact,
    parse_expr,
    parse_form,
    wedge,
)

chart = Chart(["x", "y"])
dx = DiffForm.basis(chart, "x")
dy = DiffForm.basis(chart, "y")

print("== wedge products ==")
print("dx ^ dx =", wedge(dx, dx))
print("dx ^ dy =", wedge(dx, dy))
print("dy ^ dx =", wedge(dy, dx), "   (sign flips on transposition)")
print("x*dy ^ y*dx =", wedge(dy.scale(parse_expr("x")), dx.scale(parse_expr("y"))))

print("\n== exterior derivative ==")
f = DiffForm.scalar(chart, parse_expr("x^2"))
print("d(x^2) =", ext_d(f))
print("d(x dy) =", ext_d(parse_form("x*d[y]", chart)))
print("dd(x*y) =", ext_d(ext_d(DiffForm.scalar(chart, parse_expr("x*y")))), "  (always zero)")

print("\n== closed vs unclosed ==")
closed_form = parse_form("y*d[x] + x*d[y]", chart)
rotational = parse_form("-y*d[x] + x*d[y]", chart)
print(f"{closed_form}  closed? {is_closed(closed_form)}")
print(f"{rotational}  closed? {is_closed(rotational)}")
print("the failure is measured by d:", ext_d(rotational))

print("\n== antiderivatives on a star-shaped domain ==")
area = parse_form("d[x]^d[y]", chart)
theta = homotopy_antiderivative(area)
print("d-antiderivative of dx^dy:", theta)
print("check: d of that =", ext_d(theta))
potential = homotopy_antiderivative(closed_form)
print(f"line integral of {closed_form} from the origin: {potential}")
print("unclosed form has no witness:", is_exact(rotational))
