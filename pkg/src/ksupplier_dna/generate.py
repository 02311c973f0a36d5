"""Seeded random k-supplier instances on connected weighted graphs."""

from __future__ import annotations

import random

from .model import Instance, validate_instance


def random_instance_dict(n: int, rng: random.Random, density: float = 0.3, max_weight: int = 9,
                         clients: int | None = None, facilities: int | None = None,
                         k: int | None = None) -> dict:
    """Random spanning tree plus extra edges kept with probability ``density``.

    Client and facility counts are drawn at random unless given; the two
    sets are always disjoint and nonempty.
    """
    if n < 2:
        raise ValueError("need n >= 2 for disjoint nonempty client and facility sets")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = {}
    for pos in range(1, n):
        u, v = order[pos], order[rng.randrange(pos)]
        edges[(min(u, v), max(u, v))] = rng.randint(1, max_weight)
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (u, v) not in edges and rng.random() < density:
                edges[(u, v)] = rng.randint(1, max_weight)

    vertices = list(range(1, n + 1))
    rng.shuffle(vertices)
    n_c = clients if clients is not None else rng.randint(1, n - 1)
    n_f = facilities if facilities is not None else rng.randint(1, n - n_c)
    if n_c < 1 or n_f < 1 or n_c + n_f > n:
        raise ValueError(f"cannot fit {n_c} clients and {n_f} facilities on {n} vertices")
    cs = sorted(vertices[:n_c])
    fs = sorted(vertices[n_c:n_c + n_f])
    kk = k if k is not None else rng.randint(1, n_f)
    return {
        "n": n,
        "edges": [[u, v, w] for (u, v), w in sorted(edges.items())],
        "clients": cs,
        "facilities": fs,
        "k": kk,
    }


def random_instance(n: int, seed: int, **kwargs) -> Instance:
    return validate_instance(random_instance_dict(n, random.Random(seed), **kwargs))


def campaign_instances(count: int, n_range: tuple[int, int], seed: int, density: float = 0.3,
                       max_weight: int = 9) -> list[tuple[int, Instance]]:
    """``count`` instances with n drawn from ``n_range``; returns (instance_seed, instance) pairs."""
    lo, hi = n_range
    master = random.Random(seed)
    out = []
    for _ in range(count):
        inst_seed = master.randrange(2**31)
        rng = random.Random(inst_seed)
        n = rng.randint(lo, hi)
        out.append((inst_seed, validate_instance(random_instance_dict(n, rng, density, max_weight))))
    return out
