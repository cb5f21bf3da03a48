"""Sampling bits one at a time reduces to sampling a fixed target after a
random relabelling of positions.  The two guessing problems coincide."""

from minsample import guess_oracle as go
from minsample import sampler_sim as ss
from minsample.guess_oracle import ClassicalJoint

plan = ss.SamplePlan("bitwise", n=8, k=3, seed=2024)
rng = ss.make_rng(plan.seed)
print("five draws of 3 of 8 bit positions:", [ss.sample_subset(plan, rng) for _ in range(5)])
blocks = ss.SamplePlan("blockwise", n=12, k=2, seed=7, block_size=4)
print("two blocks of 4 out of 12 bits:     ", ss.sample_subset(blocks))

j = ClassicalJoint.from_function(3, lambda x: x >> 1, 4)
print("\nadversary sees the first two bits of a uniform 3-bit X")
for k in (1, 2, 3):
    for t in [(1,), (3,), (1, 2), (2, 3), (1, 2, 3)]:
        if len(t) != k:
            continue
        c = ss.verify_theorem3(j, k, t)
        print(f"  k={k} target {t}: random subset {c.lhs:.4f}  permuted target {c.rhs:.4f}")

print("\nMonte Carlo with a fixed seed reproduces the exact value:")
for trials in (2_000, 8_000, 32_000):
    est = ss.monte_carlo_pguess_subset(j, 2, trials, seed=11)
    print(f"  {trials:6d} trials: {est.estimate:.4f} +- {est.stderr:.4f}   exact {go.pguess_subset(j, 2):.4f}")
