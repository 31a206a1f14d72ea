"""Why the rescaling has no unitary on the usual observables.

Works entirely symbolically. The shifted pair (Q, P) obeys the usual
commutator, its barred copy commutes with it, and the evolution
generator splits over the two copies. The similarity generator is
Hermitian but its adjoint action pushes Q out of the (Q, P) algebra for
every exponent except n = -2.
"""

import sympy as sp

from kvnlab import opalg
from kvnlab.core import MonomialPotential

Q, P, Qb, Pb = opalg.bopp_operators()

print("commutators of the shifted pairs:")
print("  [Q, P]   =", opalg.commutator(Q, P))
print("  [Qb, Pb] =", opalg.commutator(Qb, Pb))
print("  [Q, Pb]  =", opalg.commutator(Q, Pb))

g4 = opalg.build_G(MonomialPotential(1.0, 4.0))
print("\nquartic evolution generator (note the hbar^2 tail):")
print(" ", g4)
print("  classical part:", g4.hbar_limit())

g2 = opalg.build_G(MonomialPotential(1.0, 2.0))
print("harmonic generator has no hbar corrections:", g2.equals(g2.hbar_limit()))

print("\nadjoint action on Q under the similarity generator:")
for n in (1, 3, 4):
    A = opalg.lms_quantum_generator(MonomialPotential(1.0, n))
    moved = opalg.kvn_to_bopp(opalg.adjoint_infinitesimal(A, Q))
    cf = sp.simplify(moved.coefficient((0, 1, 0, 0)))
    print(f"  n={n}: barred-position coefficient {cf}  "
          f"(closed form {sp.Rational(-(n + 2), 2 * (2 - n)) * opalg.alpha_sym})")

A2 = opalg.lms_quantum_generator(MonomialPotential(1.0, 2.0))
fin = opalg.adjoint_finite_quadratic(A2, Q)
print("\nharmonic finite adjoint of Q:", opalg.kvn_to_bopp(fin))

print("\nsearch for a generator built from (Q, P) alone:")
for n in (-2.0, 1.0, 3.0, 4.0):
    res = opalg.no_go_standard_qm(n)
    if res.consistent:
        print(f"  n={n:g}: consistent, parameter {res.alpha_tilde}")
    else:
        print(f"  n={n:g}: obstructed, condition gap {res.gap}")
