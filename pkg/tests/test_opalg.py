"""Operator algebra: normal ordering, generators, adjoints, obstruction."""

import pytest
import sympy as sp

from kvnlab.core import MonomialPotential
from kvnlab.errors import (
    HarmonicCaseError,
    InexactHbarDivision,
    NonPolynomialPotential,
    NonQuadraticGenerator,
)
from kvnlab.opalg import (
    BOPP,
    KVN,
    LinearOpBasis,
    OperatorPoly,
    adjoint_finite_quadratic,
    adjoint_infinitesimal,
    alpha_sym,
    bopp_operators,
    bopp_to_kvn,
    build_C_hbar,
    build_G,
    build_series_G,
    c_hbar_series,
    classical_vector_field,
    commutator,
    hbar,
    kvn_to_bopp,
    leak_detect,
    lms_quantum_generator,
    lq_op,
    lp_op,
    no_go_standard_qm,
    p_c,
    p_op,
    q_c,
    q_op,
    weyl_substitute,
)


def _rand_poly(rng, algebra, max_deg=2, terms=3):
    out = OperatorPoly.zero(algebra)
    for _ in range(terms):
        key = tuple(int(rng.integers(0, max_deg + 1)) for _ in range(4))
        coeff = int(rng.integers(-3, 4))
        if coeff:
            out._accumulate(key, sp.Integer(coeff))
    return out


class TestRingAxioms:
    def test_associativity_random(self):
        import numpy as np

        rng = np.random.default_rng(0)
        for algebra in (KVN, BOPP):
            for _ in range(100):
                a = _rand_poly(rng, algebra)
                b = _rand_poly(rng, algebra)
                c = _rand_poly(rng, algebra)
                assert ((a * b) * c).equals(a * (b * c))

    def test_jacobi_identity_random(self):
        import numpy as np

        rng = np.random.default_rng(1)
        for algebra in (KVN, BOPP):
            for _ in range(60):
                a = _rand_poly(rng, algebra, max_deg=1)
                b = _rand_poly(rng, algebra, max_deg=1)
                c = _rand_poly(rng, algebra, max_deg=2)
                total = (
                    commutator(a, commutator(b, c))
                    + commutator(b, commutator(c, a))
                    + commutator(c, commutator(a, b))
                )
                assert total.is_zero()

    def test_distributivity(self):
        q, p, lq = q_op(), p_op(), lq_op()
        assert ((q + p) * lq).equals(q * lq + p * lq)

    def test_mixed_algebra_rejected(self):
        with pytest.raises(ValueError):
            q_op() * OperatorPoly.generator(BOPP, 0)

    def test_dagger_is_involution(self):
        import numpy as np

        rng = np.random.default_rng(2)
        for _ in range(20):
            a = _rand_poly(rng, KVN)
            assert a.dagger().dagger().equals(a)

    def test_dagger_reverses_products(self):
        q, lq = q_op(), lq_op()
        assert (q * lq).dagger().equals(lq.dagger() * q.dagger())

    def test_hash_refused(self):
        with pytest.raises(TypeError):
            hash(q_op())


class TestCanonicalPairs:
    def test_position_algebra_commutators(self):
        q, p, lq, lp = q_op(), p_op(), lq_op(), lp_op()
        i_one = OperatorPoly.scalar(KVN, sp.I)
        assert commutator(q, lq).equals(i_one)
        assert commutator(p, lp).equals(i_one)
        for a, b in ((q, p), (q, lp), (p, lq), (lq, lp)):
            assert commutator(a, b).is_zero()

    def test_shifted_pairs_close_two_heisenberg_copies(self):
        Q, P, Qb, Pb = bopp_operators()
        i_hb = OperatorPoly.scalar(KVN, sp.I * hbar)
        assert commutator(Q, P).equals(i_hb)
        assert commutator(Qb, Pb).equals(i_hb.scale(-1))
        for a, b in ((Q, Qb), (Q, Pb), (P, Qb), (P, Pb)):
            assert commutator(a, b).is_zero()

    def test_basis_roundtrip(self):
        import numpy as np

        rng = np.random.default_rng(3)
        for _ in range(20):
            a = _rand_poly(rng, KVN)
            assert bopp_to_kvn(kvn_to_bopp(a)).equals(a)

    def test_abstract_split_roundtrip(self):
        import numpy as np

        rng = np.random.default_rng(4)
        for _ in range(20):
            a = _rand_poly(rng, BOPP)
            assert kvn_to_bopp(bopp_to_kvn(a)).equals(a)

    def test_position_is_not_unbarred(self):
        rep = leak_detect(q_op())
        assert rep.leaks
        # q = (Q + Qbar)/2
        half = sp.Rational(1, 2)
        assert rep.converted.coefficient((1, 0, 0, 0)) == half
        assert rep.converted.coefficient((0, 1, 0, 0)) == half


class TestGeneratorConstruction:
    def test_quartic_generator_closed_form(self):
        G = build_G(MonomialPotential(1.0, 4.0))
        q, p, lq, lp = q_op(), p_op(), lq_op(), lp_op()
        expected = (
            lq * p
            - lp * q.power(3)
            - (lp.power(3) * q).scale(hbar**2 * sp.Rational(1, 4))
        )
        assert G.equals(expected)

    def test_harmonic_generator_is_classical(self):
        G = build_G(MonomialPotential(1.0, 2.0))
        assert G.equals(G.hbar_limit())

    @pytest.mark.parametrize("n,jmax", [(1, 0), (2, 0), (3, 1), (4, 1), (5, 2)])
    def test_series_terminates(self, n, jmax):
        pot = MonomialPotential(1.0, float(n))
        assert build_G(pot).equals(build_series_G(pot, jmax))

    def test_series_stable_past_termination(self):
        pot = MonomialPotential(1.0, 4.0)
        assert build_series_G(pot, 1).equals(build_series_G(pot, 5))

    def test_fractional_exponent_rejected(self):
        with pytest.raises(NonPolynomialPotential):
            build_G(MonomialPotential(1.0, 2.5))
        with pytest.raises(NonPolynomialPotential):
            build_G(MonomialPotential(1.0, -2.0))

    def test_observable_qp_needs_symmetric_ordering(self):
        # C = qp: plain QP-ordered substitution leaves a spurious constant;
        # the symmetric route lands exactly on q lq - p lp
        got = build_C_hbar(q_c * p_c)
        q, p, lq, lp = q_op(), p_op(), lq_op(), lp_op()
        assert got.equals(q * lq - p * lp)

    def test_observable_q_moves_lp(self):
        assert build_C_hbar(q_c).equals(lp_op().scale(-1))

    def test_observable_p_moves_lq(self):
        assert build_C_hbar(p_c).equals(lq_op())

    def test_chbar_equals_own_series(self):
        import numpy as np

        rng = np.random.default_rng(5)
        for _ in range(30):
            expr = sum(
                int(rng.integers(-2, 3)) * q_c ** int(rng.integers(0, 4))
                * p_c ** int(rng.integers(0, 3))
                for _ in range(3)
            )
            expr = sp.expand(expr)
            if expr == 0:
                continue
            deg = sp.total_degree(expr, q_c, p_c)
            jmax = max(0, (deg - 1) // 2)
            assert build_C_hbar(expr).equals(c_hbar_series(expr, jmax))

    def test_hbar_limit_is_classical_field(self):
        import numpy as np

        rng = np.random.default_rng(6)
        for _ in range(30):
            expr = sum(
                int(rng.integers(-2, 3)) * q_c ** int(rng.integers(0, 4))
                * p_c ** int(rng.integers(0, 3))
                for _ in range(3)
            )
            expr = sp.expand(expr)
            if expr == 0:
                continue
            lhs = build_C_hbar(expr).hbar_limit()
            assert lhs.equals(classical_vector_field(expr))

    def test_weyl_symmetrizes(self):
        q, p = q_op(), p_op()
        # for XY the symmetric product is (XY + YX)/2; with [q, p] = 0 in
        # this algebra the orderings coincide, so probe with q and lq
        got = weyl_substitute(q_c * p_c, q, lq_op())
        sym = (q * lq_op() + lq_op() * q).scale(sp.Rational(1, 2))
        assert got.equals(sym)

    def test_inexact_division_raises(self):
        # q alone is not divisible by hbar
        with pytest.raises(InexactHbarDivision):
            from kvnlab.opalg import _divide_by_hbar

            _divide_by_hbar(q_op())


class TestSimilarityGenerator:
    @pytest.mark.parametrize("n", [1, 3, 4])
    def test_hermitian(self, n):
        a = lms_quantum_generator(MonomialPotential(1.0, float(n)))
        assert a.equals(a.dagger())

    def test_harmonic_variant_hermitian_commutes(self):
        harm = MonomialPotential(1.0, 2.0)
        a = lms_quantum_generator(harm)
        assert a.equals(a.dagger())
        assert commutator(a, build_G(harm)).is_zero()

    def test_harmonic_variant_form(self):
        a = lms_quantum_generator(MonomialPotential(1.0, 2.0))
        q, p, lq, lp = q_op(), p_op(), lq_op(), lp_op()
        # lq q + p lp = q lq + p lp - i
        expected = q * lq + p * lp - OperatorPoly.scalar(KVN, sp.I)
        assert a.equals(expected)

    @pytest.mark.parametrize("n,qbar_coeff", [
        (1, sp.Rational(-3, 2)),
        (3, sp.Rational(5, 2)),
        (4, sp.Rational(3, 2)),
        (5, sp.Rational(7, 6)),
    ])
    def test_position_adjoint_leaks(self, n, qbar_coeff):
        pot = MonomialPotential(1.0, float(n))
        a = lms_quantum_generator(pot)
        Q = bopp_operators()[0]
        moved = kvn_to_bopp(adjoint_infinitesimal(a, Q))
        got = sp.expand(moved.coefficient((0, 1, 0, 0)))
        assert sp.expand(got - qbar_coeff * alpha_sym) == 0
        rep_barred = [k for k in moved.terms if k[1] > 0 or k[3] > 0]
        assert rep_barred

    def test_unbarred_observables_stay_unbarred_under_G(self):
        # the evolution generator maps the (Q, P) algebra into itself
        pot = MonomialPotential(1.0, 4.0)
        G = build_G(pot)
        Q, P = bopp_operators()[0], bopp_operators()[1]
        obs = Q * Q + P.scale(sp.Integer(2))
        moved = commutator(G, obs)
        assert not leak_detect(moved).leaks

    def test_finite_harmonic_adjoint_hyperbolic(self):
        harm = MonomialPotential(1.0, 2.0)
        a = lms_quantum_generator(harm)
        Q, P, Qb, Pb = bopp_operators()
        ch, sh = sp.cosh(alpha_sym), sp.sinh(alpha_sym)

        movedQ = kvn_to_bopp(adjoint_finite_quadratic(a, Q))
        qa = OperatorPoly.generator(BOPP, 0)
        qba = OperatorPoly.generator(BOPP, 1)
        assert movedQ.equals(qa.scale(ch) + qba.scale(sh), strong=True)

        movedP = kvn_to_bopp(adjoint_finite_quadratic(a, P))
        pa = OperatorPoly.generator(BOPP, 2)
        pba = OperatorPoly.generator(BOPP, 3)
        assert movedP.equals(pa.scale(ch) + pba.scale(sh), strong=True)

    def test_finite_matches_infinitesimal_to_second_order(self):
        harm = MonomialPotential(1.0, 2.0)
        a = lms_quantum_generator(harm)
        Q = bopp_operators()[0]
        fin = adjoint_finite_quadratic(a, Q)
        lin = adjoint_infinitesimal(a, Q)
        for key in set(fin.terms) | set(lin.terms):
            diff = sp.expand(fin.coefficient(key) - lin.coefficient(key))
            series = sp.series(diff.rewrite(sp.exp), alpha_sym, 0, 2).removeO()
            assert sp.simplify(series) == 0, key

    def test_nonquadratic_generator_rejected(self):
        quart = lms_quantum_generator(MonomialPotential(1.0, 4.0))
        with pytest.raises(NonQuadraticGenerator):
            adjoint_finite_quadratic(quart, bopp_operators()[0])


class TestLinearBasis:
    def test_roundtrip(self):
        q, p, lq, lp = q_op(), p_op(), lq_op(), lp_op()
        x = q.scale(2) + p.scale(-3) + lq + lp.scale(sp.I) + OperatorPoly.scalar(
            KVN, sp.Rational(1, 2)
        )
        assert LinearOpBasis.from_poly(x).to_poly().equals(x)

    def test_rejects_quadratic(self):
        with pytest.raises(NonQuadraticGenerator):
            LinearOpBasis.from_poly(q_op() * q_op())


class TestNoGo:
    def test_inverse_square_is_the_exception(self):
        res = no_go_standard_qm(-2)
        assert res.consistent
        assert res.gap == 0
        assert sp.simplify(res.alpha_tilde - sp.Rational(-1, 2)) == 0

    @pytest.mark.parametrize("n,gap", [(1, 3), (3, -5), (4, -3)])
    def test_generic_exponents_obstructed(self, n, gap):
        res = no_go_standard_qm(n)
        assert not res.consistent
        assert sp.simplify(res.gap - gap) == 0
        assert res.alpha_tilde is None

    def test_harmonic_not_covered(self):
        with pytest.raises(HarmonicCaseError):
            no_go_standard_qm(2)
