# Core separation walkthrough: build a small 2-matching game, test a few
# allocations, and look at the certificates that come back.

from fractions import Fraction

from corematch import Allocation, parse_instance, separate, verify_violation
from corematch.matching import b_matching_value, max_weight_b_matching

# A 6-player game: a square of capacity-2 players with two capacity-1
# pendants. Weights chosen so the square carries most of the value.
inst = parse_instance("""
game 6 6
vertex 0 2
vertex 1 2
vertex 2 2
vertex 3 2
vertex 4 1
vertex 5 1
edge 0 1 4
edge 1 2 4
edge 2 3 4
edge 3 0 4
edge 0 4 1
edge 2 5 1
""")

print("grand coalition value nu(N) =", b_matching_value(inst))
best = max_weight_b_matching(inst)
print("one optimal b-matching:", [f"{inst.edges[i].u}-{inst.edges[i].v}" for i in best.edges])
print()

# nu(N) = 16: the full square; it already saturates vertices 0 and 2, so the
# pendant edges stay out. Try to pay everyone equally.
n = inst.n
nu_n = b_matching_value(inst)
equal = Allocation(tuple(Fraction(nu_n, n) for _ in range(n)))
print("equal split", tuple(str(x) for x in equal.values))
verdict = separate(inst, equal)
print("verdict:", "in core" if verdict.in_core else f"violated: {verdict.violation.describe()}")
print()

# The square players can do better on their own, and the oracle hands us the
# exact coalition plus the structure (here: the 4-cycle) that beats the offer.
v = verdict.violation
print("certificate re-verifies:", verify_violation(inst, equal, v))
print("witness edges:", [f"{inst.edges[i].u}-{inst.edges[i].v}" for i in v.witness_edges])
print()

# Pay the square what the cycle earns and the pendants nothing.
targeted = Allocation(tuple(Fraction(x) for x in (4, 4, 4, 4, 0, 0)))
print("targeted split", tuple(str(x) for x in targeted.values))
print("verdict:", "in core" if separate(inst, targeted).in_core else "violated")
print()

# Paying a pendant's neighbor nothing breaks the pendant edge constraint
# (a length-1 path): that pair walks away together.
lopsided = Allocation(tuple(Fraction(x) for x in (0, 8, 4, 4, 0, 0)))
verdict = separate(inst, lopsided)
print("lopsided split", tuple(str(x) for x in lopsided.values))
print("verdict:", verdict.violation.describe())
