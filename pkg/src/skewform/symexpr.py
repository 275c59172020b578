"""Exact symbolic scalars used as differential-form coefficients.

An Expr is a canonical quotient of two multivariate polynomials over Q.
Generators of the polynomial ring are plain variables plus applications of
the elementary functions sin, cos, exp, ln (treated as opaque atoms whose
arguments are themselves Exprs).  Two equal rational functions always
canonicalize to the same tree: numerator/denominator are reduced by their
polynomial GCD and the denominator is made monic under a fixed monomial
order (graded lexicographic over generator names).

Zero testing is exact for pure rational functions (canonical zero is the
unique empty numerator).  When elementary-function atoms are present the
test degrades to evaluation at seeded random rational points and the
verdict is flagged as probabilistic.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction


class ExprError(Exception):
    """Base class for symbolic-kernel errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class PoleError(ExprError):
    """Evaluation hit a zero denominator or a function-domain boundary."""


class UnboundVariableError(ExprError):
    pass


class ZeroTestError(ExprError):
    """The randomized zero test could not find pole-free sample points."""


FUNCTIONS = ("sin", "cos", "exp", "ln")

_MATH_FN = {"sin": math.sin, "cos": math.cos, "exp": math.exp, "ln": math.log}


def _frac_sqrt(q):
    """Exact square root of a nonnegative Fraction, or None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


class Atom:
    """An elementary-function application treated as a polynomial generator."""

    __slots__ = ("fn", "arg", "_key", "_hash")

    def __init__(self, fn, arg):
        self.fn = fn
        self.arg = arg
        self._key = ("b", fn, arg.sort_key())
        self._hash = hash(self._key)

    def sort_key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Atom) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.fn}({self.arg})"


def _gen_key(gen):
    if isinstance(gen, str):
        return ("a", gen)
    return gen.sort_key()


class Monomial:
    """Product of generator powers, stored as (generator, exponent) pairs
    sorted by generator key.  Ordering is graded lex."""

    __slots__ = ("items", "degree", "_hash")

    def __init__(self, items):
        self.items = tuple(items)
        self.degree = sum(e for _, e in self.items)
        self._hash = hash(tuple((_gen_key(g), e) for g, e in self.items))

    @staticmethod
    def unit():
        return _MONO_UNIT

    @staticmethod
    def of(gen, exp=1):
        return Monomial(((gen, exp),))

    def __eq__(self, other):
        return self._hash == other._hash and self.items == other.items

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if self.degree != other.degree:
            return self.degree < other.degree
        a, b = self.items, other.items
        i = j = 0
        while i < len(a) and j < len(b):
            ka, kb = _gen_key(a[i][0]), _gen_key(b[j][0])
            if ka == kb:
                if a[i][1] != b[j][1]:
                    return a[i][1] < b[j][1]
                i += 1
                j += 1
            elif ka < kb:
                # self has a positive power at an earlier generator
                return False
            else:
                return True
        if i < len(a):
            return False
        return j < len(b)

    def __le__(self, other):
        return self == other or self < other

    def mul(self, other):
        merged = {}
        for g, e in self.items:
            merged[g] = e
        for g, e in other.items:
            merged[g] = merged.get(g, 0) + e
        return Monomial(sorted(merged.items(), key=lambda t: _gen_key(t[0])))

    def divide(self, other):
        """Exact monomial quotient, or None when not divisible."""
        merged = dict(self.items)
        for g, e in other.items:
            r = merged.get(g, 0) - e
            if r < 0:
                return None
            if r == 0:
                merged.pop(g, None)
            else:
                merged[g] = r
        return Monomial(sorted(merged.items(), key=lambda t: _gen_key(t[0])))

    def sort_key(self):
        return tuple((_gen_key(g), e) for g, e in self.items)


_MONO_UNIT = Monomial(())


class Poly:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms", "_hash", "_key")

    def __init__(self, terms):
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None
        self._key = None

    @staticmethod
    def zero():
        return _POLY_ZERO

    @staticmethod
    def one():
        return _POLY_ONE

    @staticmethod
    def const(q):
        q = Fraction(q)
        return Poly({_MONO_UNIT: q}) if q else Poly({})

    @staticmethod
    def gen(g):
        return Poly({Monomial.of(g): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and _MONO_UNIT in self.terms)

    def const_value(self):
        if not self.terms:
            return Fraction(0)
        return self.terms[_MONO_UNIT]

    def __eq__(self, other):
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.sort_key())
        return self._hash

    def sort_key(self):
        if self._key is None:
            items = sorted(self.terms.items(), key=lambda t: t[0].sort_key())
            self._key = tuple((m.sort_key(), (c.numerator, c.denominator)) for m, c in items)
        return self._key

    def __add__(self, other):
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, _F0) + c
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        return Poly(res)

    def __sub__(self, other):
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, _F0) - c
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        return Poly(res)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        res = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1.mul(m2)
                s = res.get(m, _F0) + c1 * c2
                if s:
                    res[m] = s
                else:
                    res.pop(m, None)
        return Poly(res)

    def scale(self, q):
        if not q:
            return Poly({})
        return Poly({m: c * q for m, c in self.terms.items()})

    def __pow__(self, n):
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def leading(self):
        m = max(self.terms)
        return m, self.terms[m]

    def generators(self):
        gens = set()
        for m in self.terms:
            for g, _ in m.items:
                gens.add(g)
        return gens

    def variables(self):
        out = set()
        for g in self.generators():
            if isinstance(g, str):
                out.add(g)
            else:
                out |= g.arg.variables()
        return out

    def atoms(self):
        out = set()
        for g in self.generators():
            if isinstance(g, Atom):
                out.add(g)
                out |= g.arg.num.atoms() | g.arg.den.atoms()
        return out

    def total_degree(self):
        return max((m.degree for m in self.terms), default=0)


_F0 = Fraction(0)
_POLY_ZERO = Poly({})
_POLY_ONE = Poly({_MONO_UNIT: Fraction(1)})


class NotExactDivision(ExprError):
    pass


def _poly_divexact(f, g):
    """Exact polynomial quotient f/g; raises NotExactDivision otherwise.

    Leading-term elimination terminates because the remainder's leading
    monomial strictly decreases in the (well-founded) monomial order.
    """
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if f.is_zero():
        return _POLY_ZERO
    if g.is_const():
        return f.scale(1 / g.const_value())
    gm, gc = g.leading()
    quotient = {}
    rem = dict(f.terms)
    while rem:
        rm = max(rem)
        rc = rem[rm]
        qm = rm.divide(gm)
        if qm is None:
            raise NotExactDivision("inexact polynomial division")
        qc = rc / gc
        quotient[qm] = quotient.get(qm, _F0) + qc
        for m, c in g.terms.items():
            key = qm.mul(m)
            s = rem.get(key, _F0) - qc * c
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return Poly(quotient)


def _frac_content(p):
    """Positive rational c with p/c having integer, setwise-coprime coeffs."""
    num_gcd = 0
    den_lcm = 1
    for c in p.terms.values():
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    if num_gcd == 0:
        return Fraction(1)
    return Fraction(num_gcd, den_lcm)


def _to_univar(p, x):
    """View p as univariate in generator x with Poly coefficients."""
    coeffs = {}
    for m, c in p.terms.items():
        e = 0
        rest = []
        for g, ge in m.items:
            if g == x:
                e = ge
            else:
                rest.append((g, ge))
        rest_m = Monomial(rest)
        bucket = coeffs.setdefault(e, {})
        bucket[rest_m] = bucket.get(rest_m, _F0) + c
    out = {}
    for e, bucket in coeffs.items():
        poly = Poly(bucket)
        if not poly.is_zero():
            out[e] = poly
    return out


def _from_univar(u, x):
    res = _POLY_ZERO
    for e, coeff in u.items():
        xe = Poly({Monomial.of(x, e): Fraction(1)}) if e else _POLY_ONE
        res = res + coeff * xe
    return res


def _univar_content(u):
    c = _POLY_ZERO
    for coeff in u.values():
        c = poly_gcd(c, coeff)
    return c


def _univar_prem(f, g):
    """Pseudo-remainder of univariate-view polynomials (Poly coefficients).

    The classical lc(g)^k premultiplier is irrelevant here because callers
    take primitive parts immediately afterwards.
    """
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    guard = 0
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        shift = dr - dg
        new = {}
        for e, c in r.items():
            new[e] = lg * c
        for e, c in g.items():
            term = lr * c
            cur = new.get(e + shift, _POLY_ZERO)
            cur = cur - term
            new[e + shift] = cur
        r = {e: c for e, c in new.items() if not c.is_zero()}
        guard += 1
        if guard > 10000:
            raise ExprError("pseudo-division runaway")
    return r


def _prs_gcd(f, g):
    """Primitive-PRS multivariate GCD (fallback path; exact but can swell)."""
    if f.is_zero():
        return _gcd_normalize(g)
    if g.is_zero():
        return _gcd_normalize(f)
    gens = sorted(f.generators() | g.generators(), key=_gen_key)
    if not gens:
        return _POLY_ONE
    x = gens[0]
    fu = _to_univar(f, x)
    gu = _to_univar(g, x)
    cf = _univar_content(fu)
    cg = _univar_content(gu)
    c = _prs_gcd(cf, cg)
    fp = {e: _poly_divexact(p, cf) for e, p in fu.items()}
    gp = {e: _poly_divexact(p, cg) for e, p in gu.items()}
    if max(fp) < max(gp):
        fp, gp = gp, fp
    while gp:
        r = _univar_prem(fp, gp)
        fp = gp
        if not r:
            break
        rc = _univar_content(r)
        gp = {e: _poly_divexact(p, rc) for e, p in r.items()}
        if max(r) == 0:
            # remainder is a nonzero "constant" in x: gcd has no x part
            fp = {0: _POLY_ONE}
            break
    result = c * _from_univar(fp, x)
    return _gcd_normalize(result)


class _HeuristicFailed(Exception):
    pass


def _poly_maxnorm(p):
    return max((abs(c.numerator) for c in p.terms.values()), default=0)


def _poly_eval_gen(p, gen, a):
    """Substitute the integer a for one generator (exact)."""
    res = {}
    for m, c in p.terms.items():
        e = 0
        rest = []
        for g, ge in m.items:
            if g == gen:
                e = ge
            else:
                rest.append((g, ge))
        val = c * a ** e
        mm = Monomial(tuple(rest))
        s = res.get(mm, _F0) + val
        if s:
            res[mm] = s
        else:
            res.pop(mm, None)
    return Poly(res)


def _poly_smod(p, m):
    """Coefficientwise symmetric remainder mod m (integer coefficients)."""
    res = {}
    for mono, c in p.terms.items():
        r = ((c.numerator + m // 2) % m) - m // 2
        if r:
            res[mono] = Fraction(r)
    return Poly(res)


def _divides(h, f):
    try:
        _poly_divexact(f, h)
        return True
    except NotExactDivision:
        return False


def _int_primitive(p):
    c = _frac_content(p)
    return p.scale(1 / c) if c != 1 else p


def _gcd_interpolate(he, xi, x):
    """Recover the generator-x structure from base-xi digits of he's
    integer coefficients (symmetric remainders)."""
    h = _POLY_ZERO
    e = he
    k = 0
    while not e.is_zero():
        digit = _poly_smod(e, xi)
        if not digit.is_zero():
            xk = Poly({(Monomial.of(x, k) if k else _MONO_UNIT): Fraction(1)})
            h = h + digit * xk
        e = (e - digit).scale(Fraction(1, xi))
        k += 1
        if k > 1024:
            return None
    return h


def _gcdheu(f, g, gens):
    """Heuristic GCD by evaluation at a large integer point and digitwise
    reconstruction, verified by trial division; exact when it returns.

    The common integer content is pulled out per level and multiplied back
    onto the verified result: after extraction the sought gcd is
    ground-primitive, which is what makes the per-level primitive-part
    step safe, while the lower level's content carries this level's
    encoded coefficients.
    """
    cf = _frac_content(f)
    cg = _frac_content(g)
    common = Fraction(math.gcd(cf.numerator, cg.numerator))
    if common != 1:
        f = f.scale(1 / common)
        g = g.scale(1 / common)
    if not gens or f.is_const() or g.is_const():
        # after extraction the residual gcd of a constant with anything is 1
        return Poly.const(common)
    x = gens[0]
    norm = min(_poly_maxnorm(f), _poly_maxnorm(g))
    xi = 2 * norm + 29
    for _ in range(8):
        fe = _poly_eval_gen(f, x, xi)
        ge = _poly_eval_gen(g, x, xi)
        if not fe.is_zero() and not ge.is_zero():
            try:
                he = _gcdheu(fe, ge, gens[1:])
            except _HeuristicFailed:
                he = None
            if he is not None and not he.is_zero():
                h = _gcd_interpolate(he, xi, x)
                if h is not None and not h.is_zero():
                    h = _int_primitive(h)
                    if _divides(h, f) and _divides(h, g):
                        return h.scale(common)
        xi = 73794 * xi // 27011 + 7
    raise _HeuristicFailed


def poly_gcd(f, g):
    """GCD of multivariate polynomials over Q, monic in the monomial order.

    Heuristic evaluate-and-reconstruct GCD first (verified exactly by trial
    division), with the primitive PRS as a correctness fallback.
    """
    if f.is_zero():
        return _gcd_normalize(g)
    if g.is_zero():
        return _gcd_normalize(f)
    if f.is_const() or g.is_const():
        return _POLY_ONE
    if f == g:
        return _gcd_normalize(f)
    gens = sorted(f.generators() | g.generators(), key=_gen_key)
    fi = _int_primitive(f)
    gi = _int_primitive(g)
    try:
        return _gcd_normalize(_gcdheu(fi, gi, gens))
    except _HeuristicFailed:
        return _prs_gcd(fi, gi)


def _gcd_normalize(p):
    if p.is_zero():
        return _POLY_ZERO
    _, lc = p.leading()
    return p.scale(1 / lc)


def _poly_sqrt(p):
    """Return q with q*q == p, or None when p is not a perfect square."""
    if p.is_zero():
        return _POLY_ZERO
    lm, lc = p.leading()
    if any(e % 2 for _, e in lm.items):
        return None
    rc = _frac_sqrt(lc)
    if rc is None:
        return None
    root_m = Monomial(tuple((g, e // 2) for g, e in lm.items))
    q = Poly({root_m: rc})
    guard = 0
    while True:
        r = p - q * q
        if r.is_zero():
            return q
        rm, rcoef = r.leading()
        tm = rm.divide(root_m)
        if tm is None:
            return None
        q = q + Poly({tm: rcoef / (2 * rc)})
        guard += 1
        if guard > len(p.terms) * 4 + 16:
            return None


class Expr:
    """Canonical rational function.  Immutable; safe to share."""

    __slots__ = ("num", "den", "_hash", "_text", "_key")

    def __init__(self, num, den, _canonical=False):
        if not _canonical:
            raise ExprError("use Expr.make / parse_expr to build expressions")
        self.num = num
        self.den = den
        self._hash = None
        self._text = None
        self._key = None

    # -- construction -----------------------------------------------------

    @staticmethod
    def make(num, den=None):
        den = _POLY_ONE if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return ZERO
        if not den.is_const():
            g = poly_gcd(num, den)
            if not (g.is_const() and g.const_value() == 1):
                num = _poly_divexact(num, g)
                den = _poly_divexact(den, g)
        _, lc = den.leading()
        if lc != 1:
            inv = 1 / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return Expr(num, den, _canonical=True)

    @staticmethod
    def const(q):
        return Expr.make(Poly.const(q))

    @staticmethod
    def var(name):
        return Expr.make(Poly.gen(name))

    # -- predicates --------------------------------------------------------

    def is_zero_struct(self):
        """Structural test: canonical zero (exact for rational Exprs)."""
        return self.num.is_zero()

    def is_rational_constant(self):
        return self.num.is_const() and self.den.is_const()

    def as_fraction(self):
        if not self.is_rational_constant():
            raise ExprError(f"not a rational constant: {self}")
        return self.num.const_value() / self.den.const_value()

    def is_integer_constant(self):
        return self.is_rational_constant() and self.as_fraction().denominator == 1

    def has_atoms(self):
        return bool(self.num.atoms() or self.den.atoms())

    def variables(self):
        return frozenset(self.num.variables() | self.den.variables())

    def is_polynomial_in(self, names):
        """True when self is polynomial in the given variables: they appear
        neither in the denominator nor inside elementary-function atoms."""
        names = set(names)
        if self.den.variables() & names:
            return False
        for atom in self.num.atoms():
            if atom.arg.variables() & names:
                return False
        return True

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, Expr):
            return x
        if isinstance(x, (int, Fraction)):
            return Expr.const(x)
        return NotImplemented

    def __add__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Expr.make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Expr.make(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Expr.make(-self.num, self.den)

    def __mul__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Expr.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero expression")
        return Expr.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ExprError("exponents must be integers")
        if n == 0:
            return ONE
        if n < 0:
            if self.num.is_zero():
                raise ZeroDivisionError("zero to a negative power")
            return Expr.make(self.den ** (-n), self.num ** (-n))
        return Expr.make(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def sort_key(self):
        if self._key is None:
            self._key = ("q", self.num.sort_key(), self.den.sort_key())
        return self._key

    # -- calculus ------------------------------------------------------------

    def diff(self, v):
        """Partial derivative with respect to the variable named v."""
        dn = _poly_diff_expr(self.num, v)
        if self.den.is_const():
            # canonical constant denominators are always 1
            return dn
        dd = _poly_diff_expr(self.den, v)
        den_e = Expr.make(self.den)
        return (dn * den_e - Expr.make(self.num) * dd) / (den_e * den_e)

    def subst(self, mapping):
        """Substitute variables by Exprs (mapping: name -> Expr)."""
        num = _poly_subst(self.num, mapping)
        den = _poly_subst(self.den, mapping)
        if den.num.is_zero():
            raise PoleError("substitution produced a zero denominator")
        return num / den

    def eval(self, point=None):
        """Evaluate at a point (name -> number).  Exact Fraction arithmetic
        for rational Exprs; floats once elementary functions are involved."""
        point = dict(point or {})
        missing = self.variables() - set(point)
        if missing:
            raise UnboundVariableError(f"unbound variables: {sorted(missing)}")
        numeric = self.has_atoms() or any(isinstance(v, float) for v in point.values())
        n = _poly_eval(self.num, point, numeric)
        d = _poly_eval(self.den, point, numeric)
        if d == 0:
            raise PoleError(f"evaluation at a pole of {self}")
        return n / d

    # -- presentation ---------------------------------------------------------

    def __str__(self):
        if self._text is None:
            self._text = _expr_text(self)
        return self._text

    def __repr__(self):
        return f"Expr({self})"


ZERO = Expr(_POLY_ZERO, _POLY_ONE, _canonical=True)
ONE = Expr(_POLY_ONE, _POLY_ONE, _canonical=True)


def _make_atom_expr(fn, arg):
    if arg.is_rational_constant():
        q = arg.as_fraction()
        if fn in ("sin",) and q == 0:
            return ZERO
        if fn == "cos" and q == 0:
            return ONE
        if fn == "exp" and q == 0:
            return ONE
        if fn == "ln":
            if q == 1:
                return ZERO
            if q <= 0:
                raise PoleError("ln of a nonpositive constant")
    return Expr.make(Poly.gen(Atom(fn, arg)))


def sin(e):
    return _make_atom_expr("sin", Expr._coerce(e))


def cos(e):
    return _make_atom_expr("cos", Expr._coerce(e))


def exp(e):
    return _make_atom_expr("exp", Expr._coerce(e))


def ln(e):
    return _make_atom_expr("ln", Expr._coerce(e))


def _atom_derivative(atom):
    if atom.fn == "sin":
        return cos(atom.arg)
    if atom.fn == "cos":
        return -sin(atom.arg)
    if atom.fn == "exp":
        return exp(atom.arg)
    if atom.fn == "ln":
        return ONE / atom.arg
    raise ExprError(f"unknown function {atom.fn}")


def _poly_diff_expr(p, v):
    """Derivative of a Poly as an Expr (atoms pull in the chain rule)."""
    total = ZERO
    for m, c in p.terms.items():
        for idx, (g, e) in enumerate(m.items):
            if isinstance(g, str):
                if g != v:
                    continue
                dgen = ONE
            else:
                darg = g.arg.diff(v)
                if darg.is_zero_struct():
                    continue
                dgen = _atom_derivative(g) * darg
            rest = list(m.items)
            if e == 1:
                rest.pop(idx)
            else:
                rest[idx] = (g, e - 1)
            base = Poly({Monomial(tuple(rest)): c * e})
            total = total + Expr.make(base) * dgen
    return total


def _poly_subst(p, mapping):
    total = ZERO
    for m, c in p.terms.items():
        term = Expr.const(c)
        for g, e in m.items:
            if isinstance(g, str):
                val = mapping.get(g)
                gen_e = val if val is not None else Expr.var(g)
            else:
                gen_e = _make_atom_expr(g.fn, g.arg.subst(mapping))
            term = term * gen_e ** e
        total = total + term
    return total


def _poly_eval(p, point, numeric):
    total = 0.0 if numeric else Fraction(0)
    for m, c in p.terms.items():
        val = float(c) if numeric else c
        for g, e in m.items:
            if isinstance(g, str):
                gv = point[g]
                gv = float(gv) if numeric else Fraction(gv)
            else:
                arg = g.arg.eval(point)
                try:
                    gv = _MATH_FN[g.fn](float(arg))
                except (ValueError, OverflowError) as exc:
                    raise PoleError(f"{g.fn} undefined at argument {arg}") from exc
            val = val * gv ** e
        total = total + val
    return total


def integrate_unit_interval(e, t):
    """Definite integral over t in [0, 1] of an Expr polynomial in t."""
    if not e.is_polynomial_in({t}):
        raise ExprError(f"not polynomial in {t}: {e}")
    total = ZERO
    for m, c in e.num.terms.items():
        k = 0
        rest = []
        for g, ge in m.items:
            if g == t:
                k = ge
            else:
                rest.append((g, ge))
        piece = Expr.make(Poly({Monomial(tuple(rest)): c / (k + 1)}), e.den)
        total = total + piece
    return total


# -- zero testing -------------------------------------------------------------


class ZeroDecision:
    """Outcome of a zero test; truthy when the expression is (probably) zero."""

    __slots__ = ("value", "probabilistic")

    def __init__(self, value, probabilistic):
        self.value = value
        self.probabilistic = probabilistic

    def __bool__(self):
        return self.value

    def __repr__(self):
        tag = "probabilistic" if self.probabilistic else "exact"
        return f"ZeroDecision({self.value}, {tag})"


ZERO_TEST_SAMPLES = 32
ZERO_TEST_TOL = 1e-9


def zero_test(e, seed=0, samples=ZERO_TEST_SAMPLES, tol=ZERO_TEST_TOL):
    """Decide whether e is identically zero.

    Exact via the canonical form when e is purely rational; with elementary
    functions present, falls back to seeded sampling at random rational
    points in [-10, 10] (poles are resampled, bounded retries).
    """
    if e.num.is_zero():
        return ZeroDecision(True, False)
    if not e.has_atoms():
        return ZeroDecision(False, False)
    names = sorted(e.variables())
    rng = random.Random(f"skewform-zero:{seed}:{e}")
    for _ in range(samples):
        for attempt in range(8):
            point = {v: Fraction(rng.randint(-10000, 10000), 1000) for v in names}
            try:
                val = e.eval(point)
            except PoleError:
                continue
            break
        else:
            raise ZeroTestError(f"could not sample {e} away from poles")
        if abs(float(val)) >= tol:
            return ZeroDecision(False, True)
    return ZeroDecision(True, True)


def is_zero(e, seed=0):
    return zero_test(e, seed=seed).value


def diff(e, v):
    return e.diff(v)


def evaluate(e, point=None):
    return e.eval(point)


# -- parsing -------------------------------------------------------------------


class Token:
    __slots__ = ("kind", "value", "pos")

    def __init__(self, kind, value, pos):
        self.kind = kind
        self.value = value
        self.pos = pos

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r}, {self.pos})"


_SINGLE = "+-*/^(),[]="


def tokenize(text):
    """Tokenize expression text into NUMBER / IDENT / operator tokens."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            tokens.append(Token("number", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], i))
            i = j
            continue
        if ch in _SINGLE:
            tokens.append(Token(ch, ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, variables=None):
        self.tokens = tokens
        self.i = 0
        self.variables = None if variables is None else set(variables)

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t.kind != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {t.value!r}", t.pos)
        return t

    def parse_expr(self):
        e = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            rhs = self.parse_term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def parse_term(self):
        e = self.parse_factor()
        while self.peek().kind in ("*", "/"):
            t = self.next()
            rhs = self.parse_factor()
            if t.kind == "*":
                e = e * rhs
            else:
                if rhs.is_zero_struct():
                    raise ExprSyntaxError("division by zero", t.pos)
                e = e / rhs
        return e

    def parse_factor(self):
        if self.peek().kind == "-":
            self.next()
            return -self.parse_factor()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_primary()
        if self.peek().kind == "^":
            t = self.next()
            exponent = self.parse_factor()
            if not exponent.is_integer_constant():
                raise ExprSyntaxError("exponent must be an integer constant", t.pos)
            n = int(exponent.as_fraction())
            if n < 0 and base.is_zero_struct():
                raise ExprSyntaxError("zero to a negative power", t.pos)
            return base ** n
        return base

    def parse_primary(self):
        t = self.next()
        if t.kind == "number":
            return Expr.const(Fraction(t.value))
        if t.kind == "(":
            e = self.parse_expr()
            self.expect(")")
            return e
        if t.kind == "ident":
            if self.peek().kind == "(":
                if t.value not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {t.value!r}", t.pos)
                self.next()
                arg = self.parse_expr()
                self.expect(")")
                return _make_atom_expr(t.value, arg)
            return self._variable(t)
        raise ExprSyntaxError(f"unexpected token {t.value!r}", t.pos)

    def _variable(self, t):
        name = t.value
        if self.variables is not None and name not in self.variables:
            hint = ""
            if len(name) > 1 and name.startswith("d") and name[1:] in self.variables:
                hint = f"; differentials are written d[{name[1:]}] in form syntax"
            raise ExprSyntaxError(f"{name!r} is not a declared scalar{hint}", t.pos)
        return Expr.var(name)


def parse_expr(text, variables=None):
    """Parse infix expression text into a canonical Expr.

    When `variables` is given, identifiers outside it (and outside the
    function table) are rejected.
    """
    p = _Parser(tokenize(text), variables)
    e = p.parse_expr()
    end = p.next()
    if end.kind != "end":
        raise ExprSyntaxError(f"trailing input {end.value!r}", end.pos)
    return e


# -- printing ------------------------------------------------------------------


def _mono_text(m):
    parts = []
    for g, e in m.items:
        base = g if isinstance(g, str) else f"{g.fn}({g.arg})"
        parts.append(base if e == 1 else f"{base}^{e}")
    return "*".join(parts)


def _poly_text(p):
    if p.is_zero():
        return "0"
    pieces = []
    for m in sorted(p.terms, reverse=True):
        c = p.terms[m]
        mono = _mono_text(m)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _expr_text(e):
    num = _poly_text(e.num)
    if e.den.is_const() and e.den.const_value() == 1:
        return num
    if len(e.num.terms) > 1:
        num = f"({num})"
    return f"{num}/({_poly_text(e.den)})"
