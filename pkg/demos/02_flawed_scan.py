# Why layered-graph path separation goes wrong, and the 5-player game that
# exposes it.
#
# The legacy procedure hunts for a negative i0-j0 path of length k inside the
# product of the game graph with a path: layer r holds a fresh copy of every
# capacity-2 vertex, and arc weights transfer allocation shares to the edges.
# The catch: a walk through the product may revisit the SAME underlying
# vertex in different layers, and then its total weight no longer equals
# p(P) - w(P) for any simple path P.

from corematch import demo_counterexample, flawed_separate_paths
from corematch.flawed import (
    COUNTEREXAMPLE_NAMES,
    build_layered,
    counterexample_allocation,
    counterexample_instance,
    shortest_layered_path,
)

inst = counterexample_instance()
p = counterexample_allocation()
names = COUNTEREXAMPLE_NAMES

# s and t each hold one unit-weight edge to u; u-v carries weight 10; the
# allocation pays u 2 and v 10, which covers every coalition exactly.
print(demo_counterexample())

# Zoom into the layered graph that produces the bogus witness: endpoints s,t
# with k = 4 layers.
lg = build_layered(inst, p, 0, 1, 4)
for r, level in enumerate(lg.arcs, start=1):
    rendered = ", ".join(f"{names[i]}->{names[j]}: {w}" for i, j, w in level)
    print(f"layer {r}: {rendered}")
print()

best = shortest_layered_path(lg)
walk = ",".join(names[v] for v in best.vertices)
print(f"shortest layered walk: ({walk}) with weight {best.weight}")
print("the walk uses u twice, charging u's allocation twice but the heavy")
print("u-v edge twice as well: 14 - 22 = -8, a 'violation' no simple path has")
print()

# The full scan stops at the first negative cell, which is exactly this one.
hit = flawed_separate_paths(inst, p)
print(f"scan result: endpoints ({names[hit.i0]},{names[hit.j0]}), k={hit.k}, weight {hit.weight}")
