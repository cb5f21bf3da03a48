"""Guessing k sampled bits versus guessing parities of them.

For an adversary holding W = f(X), the probability of guessing X_T for a
random k-subset T is bounded by a combination of parity-guessing
probabilities.  This script shows the bound, its tight case, and the
Fourier view of the guessing error.
"""

import numpy as np

from minsample import guess_oracle as go
from minsample.guess_oracle import ClassicalJoint, SubsetStrategy

j = ClassicalJoint.revealing_bits(2, [1], exact=True)
chk = go.verify_brw(j, 1)
print("X uniform on 2 bits, adversary sees X1")
print(f"  guess one random bit: {chk.lhs}   parity bound: {chk.rhs}   (tight)")

j3 = ClassicalJoint.from_function(3, lambda x: (x >> 2) ^ (x & 1), 2)
print("\nX uniform on 3 bits, adversary sees X1 xor X3")
for k in (1, 2, 3):
    c = go.verify_brw(j3, k)
    ps = ", ".join(f"{float(p):.3f}" for p in c.p_list)
    print(f"  k={k}: subset {float(c.lhs):.4f} <= bound {float(c.rhs):.4f}   parities p_0..p_k = {ps}")

strategy = SubsetStrategy.optimal(j3, 2)
for t in [(1, 2), (1, 3)]:
    p_err = go.error_distribution(strategy, j3, t)
    spec = go.walsh_transform(p_err)
    print(f"\n  error string distribution on t={t}: {np.round(p_err.astype(float), 4)}")
    print(f"  Walsh coefficients: {np.round(spec.q_s.astype(float), 4)}  sum = P(no error) = {float(spec.q_s.sum()):.4f}")

worst = np.inf
for f in go.enumerate_storage_functions(3, 1):
    for k in (1, 2, 3):
        worst = min(worst, float(go.verify_brw(f, k).slack))
print(f"\nover all 256 one-bit storage functions on 3 bits the smallest slack is {worst:.3g}")
