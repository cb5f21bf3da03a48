"""Two classical bits in one qubit: the 2->1 random access code.

Computes the optimal per-bit decoding, compares it with the pretty good
measurement, and places it against the entropy-based success bounds.
"""

import math

from minsample import bounds
from minsample import quantum as qm

enc = qm.qrac_2to1()
hel = qm.rac_success(enc, 1, qm.helstrom_strategies(enc))
pgm = qm.rac_success(enc, 1, qm.pgm_strategies(enc, 1))
print("2->1 QRAC, decoding one uniformly chosen bit")
print(f"  optimal (Helstrom) : {hel:.6f}   cos^2(pi/8) = {math.cos(math.pi / 8) ** 2:.6f}")
print(f"  pretty good meas.  : {pgm:.6f}   (averaged states sum to I, so PGM = tr rho^2)")
print(f"  Nayak ceiling      : {bounds.nayak_max_p(2, 1):.6f}")

ket0, plus = qm.pure([1, 0]), qm.pure([1, 1])
ens = qm.CqEnsemble.uniform([ket0, plus])
chk = qm.verify_lemma1(ens)
print(f"\n|0> vs |+>: guess {chk.pguess:.6f} <= 1/2 + distance {0.5 + chk.distance:.6f}")

print("\nsuccess bounds for k-out-of-n codes with n=100, m=50 qubits:")
print("   k  entropy-bound  BRW-form (C_eta=1, eta=1.4)")
for k in (5, 10, 20, 40):
    cor = bounds.rac_success_bound(100, 50, k)
    brw = bounds.brw_bound(100, 50, k, 1.4)
    print(f"  {k:3d}  {cor.value:12.4g}{'*' if cor.vacuous else ' '}  {brw.value:.4g}")
print("  * vacuous: the constants need k in the thousands before this bound bites")
