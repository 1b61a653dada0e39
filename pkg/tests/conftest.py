import random
from fractions import Fraction

import pytest

from corematch import flawed, model


@pytest.fixture
def counterexample():
    return flawed.counterexample_instance()


@pytest.fixture
def counterexample_core_p():
    return flawed.counterexample_allocation()


def random_allocation(rng: random.Random, inst: model.Instance,
                      lo: int = -4, hi: int = 14, max_den: int = 4) -> model.Allocation:
    return model.Allocation(
        tuple(
            Fraction(rng.randint(lo, hi), rng.randint(1, max_den))
            for _ in range(inst.n)
        )
    )


def normalized(p: model.Allocation, target: Fraction) -> model.Allocation:
    """Shift every entry equally so the total hits `target` exactly."""
    shift = (target - p.total()) / len(p)
    return model.Allocation(tuple(x + shift for x in p.values))


def random_cost_graph(rng: random.Random, n: int, density: float = 0.5,
                      cmax: int = 10):
    from corematch.negcycle import CostedGraph, CostEdge

    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                edges.append(CostEdge(u, v, Fraction(rng.randint(-cmax, cmax)), len(edges)))
    return CostedGraph(vertices=tuple(range(n)), edges=tuple(edges))
