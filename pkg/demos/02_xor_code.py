"""The (n, k)-XOR code: every codeword bit is the parity of one k-subset.

Encodes a few messages, then checks list-decodability exhaustively at the
sizes where that is still feasible.
"""

from minsample import bounds
from minsample.entropy_math import bits_str
from minsample.xor_code import XorCode, check_list_decodable, encode, subset_unrank

code = XorCode(4, 2)
print(f"(4,2)-XOR code: {code.m} codeword bits, one per pair")
print("  positions:", [subset_unrank(4, 2, i) for i in range(1, code.m + 1)])
for msg in ("1000", "1100", "1111", "1010"):
    print(f"  {msg} -> {bits_str(encode(code, msg))}")

print("\nlist sizes when decoding up to (1/2 - eps) m errors, radius delta*n balls:")
for n, k in [(3, 1), (3, 2), (4, 2), (4, 3)]:
    c = XorCode(n, k)
    for eps, delta in [(0.1, 0.25), (0.25, 0.5)]:
        res = check_list_decodable(c, eps, delta, L=4)
        print(f"  n={n} k={k} eps={eps:<4} delta={delta:<4}: greedy list {res.greedy_list_size}, "
              f"L=4 {'holds' if res.holds else 'fails at ' + bits_str(res.witness)}")

p = bounds.lemma42_params(10, 2, 0.5)
print(f"\nparameter lemma at n=10, k=2, eps=1/2: delta={p.delta:.4f}, L={p.L}, precondition {p.preconditions_hold}")
print(f"same at n=4: precondition {bounds.lemma42_params(4, 2, 0.5).preconditions_hold} (2k^2/2^n = 1/2 is not < 1/2)")
