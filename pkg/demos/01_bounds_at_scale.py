"""How much min-entropy survives uniform sampling of k out of n bits?

Walks the sampling threshold, its inverse, the rate corollary, and shows
why the older block-sampling bounds are vacuous at these sizes.
"""

import numpy as np

from minsample import bounds

n, k = 10**6, 1200

report = bounds.main_sampling_threshold(n, k, 2.0**-10)
print(f"to guarantee p_guess <= 2^-10 on {k} sampled bits of a {n}-bit source")
print(f"  the source needs H_min >= {report.required_hmin:,.1f} bits (rate {report.required_hmin / n:.3f})")
for pre in report.preconditions:
    print(f"  {'ok  ' if pre.satisfied else 'FAIL'} {pre.name}  (margin {pre.margin:.3g})")

# going the other way: a perfect source still only certifies ~92.6 bits
best = bounds.best_sampled_rate(n, k, n)
print(f"\nfull-entropy source, k={k}: best certified log(1/p) = {best.max_log_inv_p:.4f}"
      f" (cap k/12-5 = {k / 12 - 5:.0f}, binds: {best.cap_binds})")

print("\nrate corollary: sampled entropy from a source of rate c")
for c in (0.25, 0.5, 0.75, 1.0):
    r = bounds.corollary1_bound(n, 6000, c)
    print(f"  c={c:4.2f}: {r.sampled_hmin:7.2f} bits{'  (vacuous)' if r.vacuous else ''}")

print("\nsmoothing error the block-sampling bounds can offer for a 1000-bit sample:")
for name in ("blockwise", "recursive"):
    print(f"  {name:9s}: {bounds.smoothness_floor(name, n, 1000):.3f}  (anything >= 1 says nothing)")

ks = np.arange(200, 2001, 200)
needed = [bounds.main_sampling_threshold(n, int(kk), 2.0**-10).required_hmin / n for kk in ks]
print("\nrequired source rate for p = 2^-10 as k grows:")
for kk, rate in zip(ks, needed):
    print(f"  k={kk:5d}  rate {rate:.3f}")
