"""Random and named instances for property suites and demos."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .complexes import SimplicialComplex, closure
from .covers import Cover, DowkerRelation, FiniteMetricSpace
from .nervethm import check_hypotheses

# six-vertex minimal triangulation of the real projective plane
RP2_TRIANGLES = [
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
    (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6),
]

# seven-vertex torus
TORUS_TRIANGLES = [t for i in range(7) for t in (
    (i, (i + 1) % 7, (i + 3) % 7),
    (i, (i + 2) % 7, (i + 3) % 7),
)]


def simplex_boundary(n: int) -> SimplicialComplex:
    """Boundary of the n-simplex on vertices 0..n."""
    return closure(combinations(range(n + 1), n))


def rp2() -> SimplicialComplex:
    return closure(RP2_TRIANGLES)


def torus() -> SimplicialComplex:
    return closure(TORUS_TRIANGLES)


def triangle_cover() -> Cover:
    """Hollow triangle covered by its three closed edges, labeled a, b, c."""
    return Cover.from_maximal(
        [["a", "b"], ["b", "c"], ["a", "c"]],
        {"a": [["a", "b"]], "b": [["b", "c"]], "c": [["a", "c"]]},
    )


def hexagon_cover() -> Cover:
    """Hexagon covered by two arcs meeting in two points (vertices 1 and 4)."""
    edges = [[i, i % 6 + 1] for i in range(1, 7)]
    return Cover.from_maximal(
        edges,
        {"U1": [[1, 2], [2, 3], [3, 4]], "U2": [[4, 5], [5, 6], [6, 1]]},
    )


def random_complex(rng: random.Random, max_simplices: int = 30, n_vertices: int | None = None, max_dim: int = 3) -> SimplicialComplex:
    """Closure of random simplices, capped at ``max_simplices``.

    Low-dimensional tops dominate so that cycles and several components
    show up often.
    """
    weights = [5, 3, 1][:max_dim]
    while True:
        n = n_vertices or rng.randint(3, 9)
        verts = list(range(n))
        tops = []
        for _ in range(rng.randint(1, n + 2)):
            d = rng.choices(range(1, len(weights) + 1), weights)[0]
            tops.append(rng.sample(verts, min(d, n - 1) + 1))
        K = closure(tops)
        if 0 < len(K) <= max_simplices:
            return K


def star(K: SimplicialComplex, v: str) -> SimplicialComplex:
    return closure(s for s in K.maximal_simplices if v in s)


def random_cover(rng: random.Random, K: SimplicialComplex, max_parts: int = 5) -> Cover:
    """A cover mixing closed vertex stars and unions of maximal simplices."""
    maximal = list(K.maximal_simplices)
    parts = {}
    kind = rng.random()
    if kind < 0.4:
        verts = K.vertices
        rng.shuffle(verts)
        covered: set = set()
        for v in verts:
            if len(parts) >= max_parts and covered >= set(maximal):
                break
            st = star(K, v)
            parts[f"S{v}"] = st
            covered |= {m for m in maximal if m in st.simplices}
            if covered >= set(maximal) and rng.random() < 0.5:
                break
    else:
        n_parts = rng.randint(min(2, len(maximal)), min(max_parts, len(maximal)))
        groups: list[list] = [[] for _ in range(n_parts)]
        for i, m in enumerate(rng.sample(maximal, len(maximal))):
            groups[i % n_parts if i < n_parts else rng.randrange(n_parts)].append(m)
        # occasional overlaps
        for g in groups:
            if rng.random() < 0.3:
                g.append(rng.choice(maximal))
        parts = {f"U{i}": closure(g) for i, g in enumerate(groups)}
    # top up so every maximal simplex is covered
    covered = set().union(*(p.simplices for p in parts.values())) if parts else set()
    missing = [m for m in maximal if m not in covered]
    if missing:
        parts[f"U{len(parts)}x"] = closure(missing)
    return Cover(K, parts)


def maximal_simplex_cover(K: SimplicialComplex) -> Cover:
    """Cover by closed maximal simplices; every intersection is a face or empty."""
    return Cover(K, {f"M{i}": closure([m]) for i, m in enumerate(K.maximal_simplices)})


def random_good_cover(rng: random.Random, k: int, max_simplices: int = 30, max_parts: int = 6, attempts: int = 200) -> Cover:
    """A random cover satisfying the nerve-theorem hypotheses at level ``k``."""
    for _ in range(attempts):
        K = random_complex(rng, max_simplices=max_simplices)
        if rng.random() < 0.5 and len(K.maximal_simplices) <= max_parts:
            cover = maximal_simplex_cover(K)
        else:
            cover = random_cover(rng, K, max_parts=max_parts)
        if len(cover.parts) <= max_parts and check_hypotheses(cover, k).passed:
            return cover
    raise RuntimeError(f"no good cover found at level {k} in {attempts} attempts")


def random_relation(rng: random.Random, max_rows: int = 6, max_cols: int = 6, density: float | None = None) -> DowkerRelation:
    rows = [f"x{i}" for i in range(rng.randint(1, max_rows))]
    cols = [f"A{j}" for j in range(rng.randint(1, max_cols))]
    p = rng.uniform(0.2, 0.7) if density is None else density
    pairs = frozenset((r, c) for r in rows for c in cols if rng.random() < p)
    return DowkerRelation(tuple(rows), tuple(cols), pairs)


def random_metric_space(rng: random.Random, n: int = 8, denominator: int = 4, max_value: int = 20) -> FiniteMetricSpace:
    """Random symmetric rational distance table (triangle inequality not imposed)."""
    table = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            d = Fraction(rng.randint(1, max_value), denominator)
            table[i][j] = table[j][i] = d
    return FiniteMetricSpace(tuple(str(i) for i in range(n)), tuple(map(tuple, table)))
