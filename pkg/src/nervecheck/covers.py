"""Covers by subcomplexes, nerves, Dowker complexes and Vietoris-Rips complexes."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .complexes import (
    HomologyGroup,
    Simplex,
    SimplicialComplex,
    closure,
    homology,
    make_simplex,
    simplex_key,
    vertex_key,
)

__all__ = [
    "Cover",
    "DowkerRelation",
    "FiniteMetricSpace",
    "InvalidCoverError",
    "dowker_pair",
    "good_up_to_level",
    "intersection",
    "nerve",
    "nf_complex",
    "vietoris_rips",
]


class InvalidCoverError(ValueError):
    """Raised when parts are not subcomplexes or fail to cover the base."""

    def __init__(self, message: str, uncovered: Sequence[Simplex] = (), bad_parts: Sequence[str] = ()):
        super().__init__(message)
        self.uncovered = list(uncovered)
        self.bad_parts = list(bad_parts)


class Cover:
    """A family of subcomplexes of ``base`` whose union is all of ``base``."""

    def __init__(self, base: SimplicialComplex, parts: Mapping[str, SimplicialComplex]):
        self.base = base
        self.parts = {str(k): v for k, v in parts.items()}
        bad = [label for label, part in self.parts.items() if not part.is_subcomplex_of(base)]
        if bad:
            raise InvalidCoverError(f"parts are not subcomplexes of the base: {bad}", bad_parts=bad)
        covered = set()
        for part in self.parts.values():
            covered |= part.simplices
        missing = sorted(base.simplices - covered, key=lambda s: (len(s), simplex_key(s)))
        if missing:
            raise InvalidCoverError(f"{len(missing)} simplices of the base are not covered", uncovered=missing)

    @classmethod
    def from_maximal(cls, base: Iterable[Iterable], parts: Mapping[str, Iterable[Iterable]]) -> "Cover":
        return cls(closure(base), {k: closure(v) for k, v in parts.items()})

    @cached_property
    def labels(self) -> list[str]:
        """Part labels in vertex order (the order used for nerve simplices)."""
        return sorted(self.parts, key=vertex_key)

    def intersection(self, sigma: Iterable[str]) -> SimplicialComplex:
        return intersection(self, sigma)

    def __repr__(self) -> str:
        return f"Cover(base={self.base!r}, parts={len(self.parts)})"


def intersection(cover: Cover, sigma: Iterable[str]) -> SimplicialComplex:
    """The subcomplex ``U_sigma`` of simplices common to every named part."""
    sigma = [str(s) for s in sigma]
    if not sigma:
        raise ValueError("intersection over an empty set of parts")
    unknown = [s for s in sigma if s not in cover.parts]
    if unknown:
        raise KeyError(f"unknown part labels: {unknown}")
    common = cover.parts[sigma[0]].simplices
    for s in sigma[1:]:
        common = common & cover.parts[s].simplices
    return SimplicialComplex._trusted(common)


def nerve(cover: Cover, max_dim: int | None = None) -> SimplicialComplex:
    """Complex on part labels spanned by sets of parts with a common simplex."""
    labels = [l for l in cover.labels if not cover.parts[l].is_empty()]
    # a nonempty intersection of subcomplexes always shares a vertex
    verts = {l: frozenset(s for s in cover.parts[l].simplices if len(s) == 1) for l in labels}
    found: list[Simplex] = []
    frontier = [((l,), verts[l]) for l in labels]
    pos = {l: i for i, l in enumerate(labels)}
    d = 0
    while frontier:
        found.extend(s for s, _ in frontier)
        if max_dim is not None and d >= max_dim:
            break
        nxt = []
        for s, common in frontier:
            for l in labels[pos[s[-1]] + 1:]:
                c = common & verts[l]
                if c:
                    nxt.append((s + (l,), c))
        frontier = nxt
        d += 1
    return SimplicialComplex._trusted(found)


def nf_complex(cover: Cover, tau: Iterable) -> SimplicialComplex:
    """Full simplex on the labels of the parts that contain ``tau``."""
    tau = make_simplex(tau)
    if tau not in cover.base.simplices:
        raise ValueError(f"{tau} is not a simplex of the base")
    labels = [l for l in cover.labels if tau in cover.parts[l].simplices]
    return closure([labels]) if labels else SimplicialComplex()


@dataclass(frozen=True)
class GoodCoverViolation:
    sigma: tuple[str, ...]
    degree: int
    group: HomologyGroup


def good_up_to_level(cover: Cover, n: int, up_to: int) -> list[GoodCoverViolation]:
    """Sets of at most ``n`` parts whose nonempty intersection has reduced
    homology in some degree ``<= up_to``. An empty list means the cover is
    good up to level ``n`` as far as homology can tell."""
    if n < 1:
        raise ValueError("level must be at least 1")
    out = []
    for sigma in nerve(cover, max_dim=n - 1):
        u = intersection(cover, sigma)
        top = min(up_to, u.dim)
        for j, g in enumerate(homology(u, reduced=True, degrees=range(top + 1))):
            if g:
                out.append(GoodCoverViolation(sigma, j, g))
    return out


@dataclass(frozen=True)
class DowkerRelation:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    pairs: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "row_labels", tuple(str(r) for r in self.row_labels))
        object.__setattr__(self, "col_labels", tuple(str(c) for c in self.col_labels))
        object.__setattr__(self, "pairs", frozenset((str(r), str(c)) for r, c in self.pairs))
        rows, cols = set(self.row_labels), set(self.col_labels)
        bad = [(r, c) for r, c in self.pairs if r not in rows or c not in cols]
        if bad:
            raise ValueError(f"pairs reference undeclared labels: {sorted(bad)}")

    @classmethod
    def membership(cls, cover: Cover) -> "DowkerRelation":
        """Relation ``x in U_i`` between base vertices and part labels."""
        pairs = {(s[0], l) for l, part in cover.parts.items() for s in part.simplices if len(s) == 1}
        return cls(tuple(cover.base.vertices), tuple(cover.labels), frozenset(pairs))

    def transpose(self) -> "DowkerRelation":
        return DowkerRelation(self.col_labels, self.row_labels, frozenset((c, r) for r, c in self.pairs))


def dowker_pair(rel: DowkerRelation, max_dim: int | None = None) -> tuple[SimplicialComplex, SimplicialComplex]:
    """(row complex, column complex) of a relation.

    A set of rows spans a simplex when some column relates to all of them,
    and symmetrically for columns.
    """
    by_col: dict[str, list[str]] = {}
    by_row: dict[str, list[str]] = {}
    for r, c in rel.pairs:
        by_col.setdefault(c, []).append(r)
        by_row.setdefault(r, []).append(c)
    return closure(by_col.values(), max_dim), closure(by_row.values(), max_dim)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labeled points with a symmetric table of rational distances.

    When ``squared`` is set the table holds squared distances (as produced
    from coordinates), and radii are squared before comparison.
    """

    points: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]
    squared: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))
        object.__setattr__(self, "dist", tuple(tuple(Fraction(x) for x in row) for row in self.dist))
        n = len(self.points)
        if len(set(self.points)) != n:
            raise ValueError("point labels must be distinct")
        if len(self.dist) != n or any(len(row) != n for row in self.dist):
            raise ValueError("distance table must be square and match the points")
        for i in range(n):
            if self.dist[i][i] != 0:
                raise ValueError(f"nonzero self-distance at {self.points[i]}")
            for j in range(i):
                if self.dist[i][j] != self.dist[j][i]:
                    raise ValueError(f"asymmetric distance between {self.points[j]} and {self.points[i]}")
                if self.dist[i][j] < 0:
                    raise ValueError("distances must be nonnegative")

    @classmethod
    def from_coordinates(cls, coords: Sequence[Sequence], labels: Sequence[str] | None = None) -> "FiniteMetricSpace":
        pts = [tuple(Fraction(x) for x in c) for c in coords]
        if len({len(p) for p in pts}) > 1:
            raise ValueError("points have differing dimensions")
        labels = labels or [str(i) for i in range(len(pts))]
        table = [[sum((a - b) ** 2 for a, b in zip(p, q)) for q in pts] for p in pts]
        return cls(tuple(labels), tuple(map(tuple, table)), squared=True)

    def closer_than(self, i: int, j: int, r: Fraction) -> bool:
        if self.squared:
            return self.dist[i][j] < r * r
        return self.dist[i][j] < r


def vietoris_rips(ms: FiniteMetricSpace, r, max_dim: int) -> SimplicialComplex:
    """Sets of points of diameter strictly less than ``r``, up to ``max_dim``."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    n = len(ms.points)
    order = sorted(range(n), key=lambda i: vertex_key(ms.points[i]))
    nbrs = {i: {j for j in range(n) if j != i and ms.closer_than(i, j, r)} for i in range(n)}
    out: list[Simplex] = []

    def grow(clique: list[int], candidates: list[int]) -> None:
        out.append(tuple(ms.points[i] for i in clique))
        if len(clique) > max_dim:
            return
        for a, v in enumerate(candidates):
            grow(clique + [v], [w for w in candidates[a + 1:] if w in nbrs[v]])

    for a, v in enumerate(order):
        grow([v], [w for w in order[a + 1:] if w in nbrs[v]])
    return SimplicialComplex._trusted(out)
