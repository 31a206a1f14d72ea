"""Exact operator algebra of the auxiliary-pair (KvN) formulation.

Operators are finite combinations of normally ordered monomials in four
generators with exact symbolic coefficients (sympy expressions in I, hbar,
t, alpha, rationals). Two instances of the same engine are used:

* the position algebra with generators q, p, lq, lp, canonical pairs
  [q, lq] = i and [p, lp] = i, all other pairs commuting;
* the split basis with generators Q, Qbar, P, Pbar, [Q, P] = i*hbar and
  [Qbar, Pbar] = -i*hbar, bars commuting with unbarred.

The split basis is reached through the shifts

    Q = q - (hbar/2) lp,   P    = p + (hbar/2) lq,
    Qbar = q + (hbar/2) lp,   Pbar = p - (hbar/2) lq,

which embed a Heisenberg pair and its opposite-sign copy inside the
classical operator algebra. hbar and t stay formal symbols; nothing in this
module evaluates to floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import sympy as sp

from .core import MonomialPotential
from .errors import (
    HarmonicCaseError,
    InexactHbarDivision,
    NonPolynomialPotential,
    NonQuadraticGenerator,
)

hbar = sp.Symbol("hbar", positive=True)
t_sym = sp.Symbol("t", real=True)
alpha_sym = sp.Symbol("alpha", real=True)

# Commuting stand-ins for writing polynomial observables C(q, p).
q_c = sp.Symbol("q_c", real=True)
p_c = sp.Symbol("p_c", real=True)


@dataclass(frozen=True)
class Algebra:
    """Four generators in normal order; slots (0,2) and (1,3) are the
    canonical pairs, with central commutators c02 = [g0, g2] and
    c13 = [g1, g3]. Every other pair of generators commutes."""

    names: tuple
    c02: object
    c13: object


KVN = Algebra(("q", "p", "lq", "lp"), sp.I, sp.I)
BOPP = Algebra(("Q", "Qbar", "P", "Pbar"), sp.I * hbar, -sp.I * hbar)


def _norm_coeff(c):
    return sp.expand(sp.sympify(c))


class OperatorPoly:
    """Normally ordered operator polynomial over a fixed algebra.

    terms maps exponent keys (a, b, c, d) for g0^a g1^b g2^c g3^d to
    nonzero sympy coefficients.
    """

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms=None):
        self.algebra = algebra
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                self._accumulate(tuple(int(e) for e in key), coeff)

    def _accumulate(self, key, coeff):
        c = _norm_coeff(self.terms.get(key, 0) + coeff)
        if c == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = c

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(algebra: Algebra) -> "OperatorPoly":
        return OperatorPoly(algebra)

    @staticmethod
    def scalar(algebra: Algebra, value) -> "OperatorPoly":
        return OperatorPoly(algebra, {(0, 0, 0, 0): value})

    @staticmethod
    def generator(algebra: Algebra, slot: int) -> "OperatorPoly":
        key = [0, 0, 0, 0]
        key[slot] = 1
        return OperatorPoly(algebra, {tuple(key): 1})

    def copy(self) -> "OperatorPoly":
        out = OperatorPoly(self.algebra)
        out.terms = dict(self.terms)
        return out

    # -- ring structure -----------------------------------------------

    def _check_same(self, other):
        if self.algebra is not other.algebra:
            raise ValueError("operands live in different algebras")

    def __add__(self, other):
        if not isinstance(other, OperatorPoly):
            other = OperatorPoly.scalar(self.algebra, other)
        self._check_same(other)
        out = self.copy()
        for key, coeff in other.terms.items():
            out._accumulate(key, coeff)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = OperatorPoly(self.algebra)
        out.terms = {k: _norm_coeff(-c) for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, OperatorPoly):
            other = OperatorPoly.scalar(self.algebra, other)
        return self + (-other)

    def __rsub__(self, other):
        return OperatorPoly.scalar(self.algebra, other) - self

    def scale(self, factor) -> "OperatorPoly":
        factor = sp.sympify(factor)
        out = OperatorPoly(self.algebra)
        for key, coeff in self.terms.items():
            out._accumulate(key, coeff * factor)
        return out

    def __mul__(self, other):
        if not isinstance(other, OperatorPoly):
            return self.scale(other)
        self._check_same(other)
        out = OperatorPoly(self.algebra)
        k02 = -self.algebra.c02
        k13 = -self.algebra.c13
        for (a1, b1, c1, d1), x in self.terms.items():
            for (a2, b2, c2, d2), y in other.terms.items():
                xy = x * y
                for j in range(min(c1, a2) + 1):
                    cj = (
                        math.comb(c1, j)
                        * math.comb(a2, j)
                        * math.factorial(j)
                    ) * k02**j
                    for l in range(min(d1, b2) + 1):
                        cl = (
                            math.comb(d1, l)
                            * math.comb(b2, l)
                            * math.factorial(l)
                        ) * k13**l
                        out._accumulate(
                            (a1 + a2 - j, b1 + b2 - l, c1 + c2 - j, d1 + d2 - l),
                            xy * cj * cl,
                        )
        return out

    def __rmul__(self, other):
        return self.scale(other)

    def power(self, k: int) -> "OperatorPoly":
        if k < 0:
            raise ValueError("negative operator power")
        out = OperatorPoly.scalar(self.algebra, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- involution and coefficient maps --------------------------------

    def dagger(self) -> "OperatorPoly":
        """Adjoint: conjugate coefficients, reverse factor order.

        All four generators are self-adjoint, so each monomial reverses to
        g3^d g2^c g1^b g0^a, which is re-normal-ordered by the product."""
        out = OperatorPoly.zero(self.algebra)
        for (a, b, c, d), coeff in self.terms.items():
            left = OperatorPoly(self.algebra, {(0, 0, c, d): 1})
            right = OperatorPoly(self.algebra, {(a, b, 0, 0): 1})
            out = out + (left * right).scale(sp.conjugate(coeff))
        return out

    def subs_coeffs(self, mapping) -> "OperatorPoly":
        out = OperatorPoly(self.algebra)
        for key, coeff in self.terms.items():
            out._accumulate(key, sp.sympify(coeff).subs(mapping))
        return out

    def hbar_limit(self) -> "OperatorPoly":
        """Coefficient-wise hbar -> 0 part."""
        return self.subs_coeffs({hbar: 0})

    def coefficient(self, key) -> sp.Expr:
        return self.terms.get(tuple(key), sp.Integer(0))

    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def equals(self, other, strong: bool = False) -> bool:
        """Exact equality of normal forms.

        Coefficients are compared after expansion; strong=True routes the
        comparison through simplify for transcendental coefficients
        (exp/sinh from finite adjoints)."""
        if not isinstance(other, OperatorPoly):
            other = OperatorPoly.scalar(self.algebra, other)
        diff = self - other
        if diff.is_zero():
            return True
        if not strong:
            return False
        return all(
            sp.simplify(sp.expand(c.rewrite(sp.exp))) == 0
            for c in diff.terms.values()
        )

    def __eq__(self, other):
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return self.algebra is other.algebra and self.equals(other)

    def __hash__(self):
        raise TypeError("OperatorPoly is mutable-by-construction; not hashable")

    # -- display --------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.algebra.names
        parts = []
        for key in sorted(self.terms, key=lambda k: (sum(k), k)):
            coeff = self.terms[key]
            factors = "*".join(
                name if e == 1 else f"{name}**{e}"
                for name, e in zip(names, key)
                if e > 0
            )
            cs = sp.sstr(coeff)
            fenced = ("+" in cs) or ("-" in cs[1:]) or (" " in cs)
            if factors:
                if coeff == 1:
                    parts.append(factors)
                elif coeff == -1:
                    parts.append(f"-{factors}")
                else:
                    parts.append(f"({cs})*{factors}" if fenced else f"{cs}*{factors}")
            else:
                parts.append(f"({cs})" if fenced else cs)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"OperatorPoly[{self}]"


def op_mul(a: OperatorPoly, b: OperatorPoly) -> OperatorPoly:
    return a * b


def commutator(a: OperatorPoly, b: OperatorPoly) -> OperatorPoly:
    return a * b - b * a


# Generator shorthands for the position algebra.
def q_op():
    return OperatorPoly.generator(KVN, 0)


def p_op():
    return OperatorPoly.generator(KVN, 1)


def lq_op():
    return OperatorPoly.generator(KVN, 2)


def lp_op():
    return OperatorPoly.generator(KVN, 3)


def bopp_operators():
    """The shifted pairs (Q, P, Qbar, Pbar) as position-algebra operators."""
    q, p, lq, lp = q_op(), p_op(), lq_op(), lp_op()
    half = sp.Rational(1, 2) * hbar
    Q = q - lp.scale(half)
    P = p + lq.scale(half)
    Qbar = q + lp.scale(half)
    Pbar = p - lq.scale(half)
    return Q, P, Qbar, Pbar


# -- conversions between the two bases ----------------------------------


def kvn_to_bopp(x: OperatorPoly) -> OperatorPoly:
    """Rewrite a position-algebra operator over (Q, Qbar, P, Pbar).

    Uses q = (Q+Qbar)/2, p = (P+Pbar)/2, lq = (P-Pbar)/hbar,
    lp = (Qbar-Q)/hbar; coefficients may pick up powers of 1/hbar."""
    if x.algebra is not KVN:
        raise ValueError("expected a position-algebra operator")
    Q = OperatorPoly.generator(BOPP, 0)
    Qb = OperatorPoly.generator(BOPP, 1)
    P = OperatorPoly.generator(BOPP, 2)
    Pb = OperatorPoly.generator(BOPP, 3)
    half = sp.Rational(1, 2)
    images = [
        (Q + Qb).scale(half),
        (P + Pb).scale(half),
        (P - Pb).scale(1 / hbar),
        (Qb - Q).scale(1 / hbar),
    ]
    return _substitute(x, BOPP, images)


def bopp_to_kvn(x: OperatorPoly) -> OperatorPoly:
    """Inverse rewrite, back over (q, p, lq, lp)."""
    if x.algebra is not BOPP:
        raise ValueError("expected a split-basis operator")
    Q, P, Qb, Pb = bopp_operators()
    return _substitute(x, KVN, [Q, Qb, P, Pb])


def _substitute(x, target, images):
    out = OperatorPoly.zero(target)
    for key, coeff in x.terms.items():
        term = OperatorPoly.scalar(target, coeff)
        for slot, e in enumerate(key):
            if e:
                term = term * images[slot].power(e)
        out = out + term
    return out


# -- polynomial observables and their operator versions ------------------


def _as_qp_poly(expr):
    expr = sp.sympify(expr)
    try:
        poly = sp.Poly(expr, q_c, p_c)
    except sp.PolynomialError as exc:
        raise NonPolynomialPotential(f"not polynomial in (q, p): {expr}") from exc
    return poly


def _qp_poly_to_operator(expr) -> OperatorPoly:
    """Commuting polynomial in (q_c, p_c) as an operator (q before p)."""
    poly = _as_qp_poly(expr)
    out = OperatorPoly.zero(KVN)
    for (a, b), coeff in poly.terms():
        out._accumulate((a, b, 0, 0), coeff)
    return out


def weyl_substitute(expr, X: OperatorPoly, Y: OperatorPoly) -> OperatorPoly:
    """Symmetric-ordered substitution of (X, Y) into C(q, p).

    Each monomial q^a p^b maps to 2^(-a) * sum_k C(a,k) X^k Y^b X^(a-k),
    the symmetric ordering in closed form. For polynomials without mixed
    q-p monomials this reduces to plain substitution."""
    X._check_same(Y)
    poly = _as_qp_poly(expr)
    out = OperatorPoly.zero(X.algebra)
    xpow = {0: OperatorPoly.scalar(X.algebra, 1)}
    ypow = {0: OperatorPoly.scalar(X.algebra, 1)}

    def _pow(cache, base, k):
        if k not in cache:
            cache[k] = _pow(cache, base, k - 1) * base
        return cache[k]

    for (a, b), coeff in poly.terms():
        yb = _pow(ypow, Y, b)
        if a == 0:
            out = out + yb.scale(coeff)
            continue
        acc = OperatorPoly.zero(X.algebra)
        for k in range(a + 1):
            acc = acc + (
                _pow(xpow, X, k) * yb * _pow(xpow, X, a - k)
            ).scale(math.comb(a, k))
        out = out + acc.scale(coeff * sp.Rational(1, 2**a))
    return out


def _require_monomial_exponent(pot: MonomialPotential) -> int:
    n = pot.n
    if not (float(n).is_integer() and n >= 1):
        raise NonPolynomialPotential(f"operator constructions need integer n >= 1, got {n}")
    return int(n)


def _exact_coupling(pot: MonomialPotential):
    return sp.nsimplify(pot.g, rational=True)


def _divide_by_hbar(x: OperatorPoly) -> OperatorPoly:
    out = OperatorPoly.zero(x.algebra)
    for key, coeff in x.terms.items():
        quot = sp.cancel(coeff / hbar)
        num, den = sp.fraction(sp.together(quot))
        if hbar in den.free_symbols:
            raise InexactHbarDivision(
                f"coefficient {coeff} of {key} is not divisible by hbar"
            )
        out._accumulate(key, quot)
    return out


def build_G(pot: MonomialPotential) -> OperatorPoly:
    """Evolution generator [H(Q, P) - H(Qbar, Pbar)] / hbar.

    H(x, y) = y^2/2 + g x^n / n is ordering-unambiguous (separable), the
    difference is divisible by hbar exactly, and the hbar -> 0 part is the
    classical generator lq p - lp V'(q)."""
    n = _require_monomial_exponent(pot)
    g = _exact_coupling(pot)
    Q, P, Qb, Pb = bopp_operators()
    half = sp.Rational(1, 2)
    gn = g * sp.Rational(1, n)
    h_unbarred = P.power(2).scale(half) + Q.power(n).scale(gn)
    h_barred = Pb.power(2).scale(half) + Qb.power(n).scale(gn)
    return _divide_by_hbar(h_unbarred - h_barred)


def _hbar_series(expr, jmax: int) -> OperatorPoly:
    """Odd-order derivative series for a polynomial observable C(q, p).

    Term j carries hbar^(2j) / (2^(2j) (2j+1)!) times the (2j+1)-fold
    contraction of the auxiliary pair with the symplectic-dual derivatives
    of C, with the auxiliary factors ordered to the left:

        sum_k C(2j+1, k) (-1)^k lq^(2j+1-k) lp^k d_p^(2j+1-k) d_q^k C.

    The k-th summand pairs each lq with a d_p and each lp with a -d_q."""
    expr = sp.sympify(expr)
    out = OperatorPoly.zero(KVN)
    for j in range(jmax + 1):
        order = 2 * j + 1
        pref = hbar ** (2 * j) * sp.Rational(1, 2 ** (2 * j) * math.factorial(order))
        for k in range(order + 1):
            deriv = sp.diff(expr, p_c, order - k, q_c, k)
            if deriv == 0:
                continue
            lam = OperatorPoly(KVN, {(0, 0, order - k, k): 1})
            term = lam * _qp_poly_to_operator(deriv)
            out = out + term.scale(pref * math.comb(order, k) * (-1) ** k)
    return out


def build_series_G(pot: MonomialPotential, jmax: int) -> OperatorPoly:
    """Series route to the evolution generator; terminates for monomials.

    With H = p^2/2 + g q^n / n every term with 2j+1 > n vanishes because
    the (2j+1)-th derivatives of H are zero, so any jmax of at least
    floor((n-1)/2) reproduces build_G exactly."""
    n = _require_monomial_exponent(pot)
    g = _exact_coupling(pot)
    h_expr = p_c**2 / 2 + g * q_c**n * sp.Rational(1, n)
    return _hbar_series(h_expr, jmax)


def build_C_hbar(expr) -> OperatorPoly:
    """Operator version [C(Q, P) - C(Qbar, Pbar)] / hbar of a polynomial
    observable, with symmetric-ordered substitution; equals its own
    odd-derivative series and reduces to the classical vector field of C
    as hbar -> 0."""
    Q, P, Qb, Pb = bopp_operators()
    diff = weyl_substitute(expr, Q, P) - weyl_substitute(expr, Qb, Pb)
    return _divide_by_hbar(diff)


def c_hbar_series(expr, jmax: int) -> OperatorPoly:
    """Series route to build_C_hbar for cross-validation."""
    return _hbar_series(expr, jmax)


def classical_vector_field(expr) -> OperatorPoly:
    """lq dC/dp - lp dC/dq with auxiliary factors ordered to the left."""
    return _hbar_series(expr, 0)


# -- similarity generator and adjoints -----------------------------------


def lms_quantum_generator(pot: MonomialPotential) -> OperatorPoly:
    """Hermitian generator of the similarity transformation.

    For n != 2:  t*G - (lq q + q lq)/(2-n) - n (lp p + p lp)/(2(2-n)).
    For n = 2 the time-free harmonic form lq q + p lp is returned."""
    n = _require_monomial_exponent(pot)
    q, p, lq, lp = q_op(), p_op(), lq_op(), lp_op()
    if n == 2:
        return lq * q + p * lp
    cG = build_G(pot)
    c1 = sp.Rational(1, 2 - n)
    c2 = sp.Rational(n, 2 * (2 - n))
    return cG.scale(t_sym) - (lq * q + q * lq).scale(c1) - (lp * p + p * lp).scale(c2)


def adjoint_infinitesimal(
    A: OperatorPoly, X: OperatorPoly, alpha=alpha_sym, mode: str = "kvn"
) -> OperatorPoly:
    """First-order adjoint X + i alpha [A, X] (mode "kvn") or the
    hbar-weighted X + i alpha [A, X]/hbar (mode "qm")."""
    comm = commutator(A, X)
    if mode == "kvn":
        return X + comm.scale(sp.I * alpha)
    if mode == "qm":
        return X + comm.scale(sp.I * alpha / hbar)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class LeakReport:
    """Split-basis decomposition of an operator.

    converted is the operator over (Q, Qbar, P, Pbar); barred collects the
    monomials with at least one barred factor; leaks is True when barred
    is nonzero, i.e. the operator does not stay in the unbarred
    observable algebra."""

    converted: OperatorPoly
    barred: OperatorPoly
    leaks: bool


def leak_detect(x: OperatorPoly) -> LeakReport:
    conv = kvn_to_bopp(x)
    barred = OperatorPoly.zero(BOPP)
    for key, coeff in conv.terms.items():
        if key[1] > 0 or key[3] > 0:
            barred._accumulate(key, coeff)
    return LeakReport(converted=conv, barred=barred, leaks=not barred.is_zero())


class LinearOpBasis:
    """Coordinates of an affine-linear operator over (q, p, lq, lp, 1)."""

    BASIS_KEYS = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 0, 0, 0))

    def __init__(self, coords):
        self.coords = sp.Matrix([sp.sympify(c) for c in coords])

    @staticmethod
    def from_poly(x: OperatorPoly) -> "LinearOpBasis":
        if x.algebra is not KVN:
            raise ValueError("expected a position-algebra operator")
        if x.total_degree() > 1:
            raise NonQuadraticGenerator(f"operator {x} is not affine-linear")
        return LinearOpBasis([x.coefficient(k) for k in LinearOpBasis.BASIS_KEYS])

    def to_poly(self) -> OperatorPoly:
        out = OperatorPoly.zero(KVN)
        for key, coeff in zip(self.BASIS_KEYS, list(self.coords)):
            if coeff != 0:
                out._accumulate(key, coeff)
        return out


def adjoint_finite_quadratic(
    A: OperatorPoly, X: OperatorPoly, alpha=alpha_sym
) -> OperatorPoly:
    """Exact finite adjoint exp(i alpha A) X exp(-i alpha A).

    A must be quadratic so that i[A, .] closes on affine-linear operators;
    the 5x5 matrix of that map is exponentiated symbolically."""
    if A.total_degree() > 2:
        raise NonQuadraticGenerator(f"generator degree {A.total_degree()} > 2")
    x_vec = LinearOpBasis.from_poly(X).coords
    cols = []
    for key in LinearOpBasis.BASIS_KEYS:
        basis_op = OperatorPoly(KVN, {key: 1})
        image = commutator(A, basis_op).scale(sp.I)
        try:
            cols.append(LinearOpBasis.from_poly(image).coords)
        except NonQuadraticGenerator as exc:
            raise NonQuadraticGenerator(
                f"i[A, {basis_op}] leaves the affine-linear span"
            ) from exc
    m = sp.Matrix.hstack(*cols)
    flowed = (alpha * m).exp() * x_vec
    return LinearOpBasis([sp.expand(c) for c in flowed]).to_poly()


@dataclass(frozen=True)
class NoGoResult:
    """Outcome of the square-bracket consistency conditions.

    alpha_tilde is the common solution when both conditions agree (only at
    n = -2); gap = n/(2-n) + 2/(2-n) is the obstruction otherwise."""

    alpha_tilde: object
    gap: object
    consistent: bool


def no_go_standard_qm(n) -> NoGoResult:
    """Solve the two closure conditions for a pure (qhat, phat) generator.

    The candidate A0 = c qhat phat must satisfy
    (i/hbar) [A0, qhat] = -(2/(2-n)) qhat  and
    (i/hbar) [A0, phat] = -(n/(2-n)) phat.
    Both linear conditions are solved on the unbarred Heisenberg pair of
    the split basis; they agree only at n = -2."""
    ns = sp.nsimplify(n, rational=True)
    if ns == 2:
        raise HarmonicCaseError("n = 2 has its own similarity generator")
    c = sp.Symbol("c")
    qh = OperatorPoly.generator(BOPP, 0)
    ph = OperatorPoly.generator(BOPP, 2)
    a0 = (qh * ph).scale(c)

    def solve_condition(target_op, coeff_rhs):
        lhs = commutator(a0, target_op).scale(sp.I / hbar) - target_op.scale(coeff_rhs)
        eqs = [sp.Eq(v, 0) for v in lhs.terms.values()]
        sols = sp.solve(eqs, c, dict=True)
        if len(sols) != 1:
            raise ValueError(f"condition did not pin c uniquely: {sols}")
        return sols[0][c]

    c_q = solve_condition(qh, -2 / (2 - ns))
    c_p = solve_condition(ph, -ns / (2 - ns))
    gap = sp.simplify(c_p - c_q)
    if gap == 0:
        return NoGoResult(alpha_tilde=c_q, gap=sp.Integer(0), consistent=True)
    return NoGoResult(alpha_tilde=None, gap=gap, consistent=False)
