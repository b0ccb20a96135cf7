"""Finite simplicial complexes, chain complexes and their homology."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .algebra import CoefficientSpec, IntMatrix, rank, snf

__all__ = [
    "ChainComplex",
    "HomologyGroup",
    "SimplicialComplex",
    "boundary_matrix",
    "chain_homology",
    "closure",
    "homology",
    "is_homologically_trivial",
    "skeleton",
    "simplex_key",
    "vertex_key",
]

Simplex = tuple  # strictly increasing tuple of vertex labels

_INT_RE = re.compile(r"[+-]?\d+")


@lru_cache(maxsize=None)
def vertex_key(label: str) -> tuple:
    """Sort key for vertex labels.

    Integer-looking labels come first, ordered numerically ("2" < "10");
    all other labels follow in string order.
    """
    if _INT_RE.fullmatch(label):
        return (0, int(label), label)
    return (1, 0, label)


def simplex_key(s: Sequence[str]) -> tuple:
    return tuple(vertex_key(v) for v in s)


def make_simplex(vertices: Iterable) -> Simplex:
    labels = [str(v) for v in vertices]
    if any(not v for v in labels):
        raise ValueError("vertex labels must be nonempty")
    if len(set(labels)) != len(labels):
        raise ValueError(f"repeated vertex in {labels}")
    return tuple(sorted(labels, key=vertex_key))


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces; entry ``j`` omits vertex ``j``."""
    return [s[:j] + s[j + 1:] for j in range(len(s))]


class SimplicialComplex:
    """A finite simplicial complex stored as its set of simplices.

    Vertex labels are strings; every simplex is a tuple sorted by
    :func:`vertex_key`, which fixes orientations and basis orders.
    """

    def __init__(self, simplices: Iterable[Iterable] = (), *, check: bool = True):
        simps = frozenset(make_simplex(s) for s in simplices) if check else frozenset(simplices)
        if () in simps:
            simps = simps - {()}
        if check:
            for s in simps:
                for f in faces(s):
                    if f and f not in simps:
                        raise ValueError(f"not closed under faces: {f} missing (face of {s})")
        self.simplices = simps

    @classmethod
    def _trusted(cls, simplices: Iterable[Simplex]) -> "SimplicialComplex":
        return cls(simplices, check=False)

    @cached_property
    def _by_dim(self) -> dict[int, list[Simplex]]:
        out: dict[int, list[Simplex]] = {}
        for s in self.simplices:
            out.setdefault(len(s) - 1, []).append(s)
        for lst in out.values():
            lst.sort(key=simplex_key)
        return out

    @cached_property
    def _index(self) -> dict[int, dict[Simplex, int]]:
        return {q: {s: i for i, s in enumerate(lst)} for q, lst in self._by_dim.items()}

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def simplices_of_dim(self, q: int) -> list[Simplex]:
        return self._by_dim.get(q, [])

    def index(self, q: int) -> dict[Simplex, int]:
        return self._index.get(q, {})

    def count(self, q: int) -> int:
        return len(self._by_dim.get(q, ()))

    @property
    def f_vector(self) -> list[int]:
        return [self.count(q) for q in range(self.dim + 1)]

    @property
    def vertices(self) -> list[str]:
        return [s[0] for s in self.simplices_of_dim(0)]

    def is_empty(self) -> bool:
        return not self.simplices

    @cached_property
    def maximal_simplices(self) -> list[Simplex]:
        cofaces = set()
        for s in self.simplices:
            cofaces.update(faces(s))
        out = [s for s in self.simplices if s not in cofaces]
        return sorted(out, key=lambda s: (simplex_key(s)))

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * n for q, n in enumerate(self.f_vector))

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.simplices <= other.simplices

    def __and__(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex._trusted(self.simplices & other.simplices)

    def __or__(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex._trusted(self.simplices | other.simplices)

    def __contains__(self, s) -> bool:
        if isinstance(s, tuple) and s in self.simplices:
            return True
        try:
            return make_simplex(s) in self.simplices
        except (TypeError, ValueError):
            return False

    def __iter__(self):
        for q in sorted(self._by_dim):
            yield from self._by_dim[q]

    def __len__(self) -> int:
        return len(self.simplices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector})"


def closure(maximal: Iterable[Iterable], max_dim: int | None = None) -> SimplicialComplex:
    """Smallest complex containing the given simplices (optionally truncated)."""
    out: set[Simplex] = set()
    for s in maximal:
        s = make_simplex(s)
        top = len(s) if max_dim is None else min(len(s), max_dim + 1)
        for k in range(1, top + 1):
            out.update(combinations(s, k))
    return SimplicialComplex._trusted(out)


def full_simplex(vertices: Iterable) -> SimplicialComplex:
    return closure([list(vertices)]) if vertices else SimplicialComplex()


def skeleton(K: SimplicialComplex, n: int) -> SimplicialComplex:
    return SimplicialComplex._trusted(s for s in K.simplices if len(s) <= n + 1)


def boundary_matrix(K: SimplicialComplex, q: int, augmented: bool = False) -> IntMatrix:
    """Matrix of the boundary ``C_q(K) -> C_{q-1}(K)`` in sorted bases.

    For ``q == 0`` the target is zero, unless ``augmented`` is set, in which
    case it is the augmentation ``C_0 -> Z`` (a single row of ones).
    """
    if q < 0:
        raise ValueError("degree must be nonnegative")
    cols = K.simplices_of_dim(q)
    if q == 0:
        if augmented:
            return IntMatrix(1, len(cols), {(0, j): 1 for j in range(len(cols))})
        return IntMatrix(0, len(cols))
    rows = K.index(q - 1)
    entries = {}
    for j, s in enumerate(cols):
        for i, f in enumerate(faces(s)):
            entries[(rows[f], j)] = -1 if i % 2 else 1
    return IntMatrix(len(rows), len(cols), entries)


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated abelian group ``Z^free_rank + sum Z/t``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative rank")
        if any(t <= 1 for t in self.torsion):
            raise ValueError(f"torsion coefficients must exceed 1: {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion is not a divisibility chain: {self.torsion}")

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __bool__(self) -> bool:
        return not self.is_zero()

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        return self.format()

    def format(self, ring: str = "Z") -> str:
        parts = []
        if self.free_rank == 1:
            parts.append(ring)
        elif self.free_rank > 1:
            parts.append(f"{ring}^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class ChainComplex:
    """Free chain complex over Z.

    ``ranks[n]`` is the rank of ``C_n``; ``boundaries[n]`` is the matrix of
    ``C_n -> C_{n-1}`` for ``n >= 1``. ``augmentation``, when present, is
    ``C_0 -> Z`` and is used for reduced homology.
    """

    ranks: tuple[int, ...]
    boundaries: Mapping[int, IntMatrix] = field(default_factory=dict)
    augmentation: IntMatrix | None = None

    def boundary(self, n: int) -> IntMatrix:
        if n in self.boundaries:
            return self.boundaries[n]
        rows = self.ranks[n - 1] if 0 < n <= len(self.ranks) else 0
        cols = self.ranks[n] if 0 <= n < len(self.ranks) else 0
        if n == 0 and self.augmentation is not None:
            return self.augmentation
        return IntMatrix(rows, cols)

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def is_chain_complex(self) -> bool:
        return all((self.boundary(n - 1) @ self.boundary(n)).is_zero() for n in range(1, self.top + 1))


def chain_homology(
    cc: ChainComplex,
    coeff: CoefficientSpec = CoefficientSpec("z"),
    degrees: Iterable[int] | None = None,
    reduced: bool = False,
) -> list[HomologyGroup]:
    """Homology of a chain complex in the requested degrees (default all)."""
    if degrees is None:
        degrees = range(max(cc.top, 0) + 1)
    degrees = list(degrees)
    cache: dict[int, tuple[int, tuple[int, ...]]] = {}

    def info(n: int) -> tuple[int, tuple[int, ...]]:
        # (rank, torsion) of the boundary leaving degree n
        if n not in cache:
            if n == 0:
                m = cc.augmentation if (reduced and cc.augmentation is not None) else None
                if reduced and m is None:
                    raise ValueError("reduced homology requested but no augmentation")
                if m is None:
                    cache[n] = (0, ())
                    return cache[n]
            else:
                m = cc.boundary(n)
            if coeff.is_field:
                cache[n] = (rank(m, coeff), ())
            else:
                f = snf(m)
                cache[n] = (f.rank, f.torsion)
        return cache[n]

    out = []
    for n in degrees:
        dim_n = cc.ranks[n] if 0 <= n < len(cc.ranks) else 0
        if dim_n == 0:
            out.append(HomologyGroup())
            continue
        r_out, _ = info(n)
        r_in, tors = info(n + 1) if n + 1 < len(cc.ranks) else (0, ())
        out.append(HomologyGroup(dim_n - r_out - r_in, tors))
    return out


def chain_complex(K: SimplicialComplex) -> ChainComplex:
    """Simplicial chain complex of ``K`` with its augmentation."""
    top = K.dim
    ranks = tuple(K.count(q) for q in range(top + 1))
    return ChainComplex(
        ranks,
        {q: boundary_matrix(K, q) for q in range(1, top + 1)},
        boundary_matrix(K, 0, augmented=True) if top >= 0 else None,
    )


def homology(
    K: SimplicialComplex,
    coeff: CoefficientSpec = CoefficientSpec("z"),
    reduced: bool = False,
    degrees: Iterable[int] | None = None,
) -> list[HomologyGroup]:
    """Homology of ``K`` in degrees ``0..dim K`` (or the given degrees).

    The empty complex has zero homology, reduced or not.

    >>> [str(g) for g in homology(closure([[1, 2], [2, 3], [1, 3]]))]
    ['Z', 'Z']
    """
    if degrees is None:
        degrees = range(max(K.dim, 0) + 1)
    if K.is_empty():
        return [HomologyGroup() for _ in degrees]
    return chain_homology(chain_complex(K), coeff, degrees, reduced=reduced)


def is_homologically_trivial(K: SimplicialComplex, up_to: int) -> bool:
    """True iff the reduced integral homology of ``K`` vanishes in degrees ``<= up_to``."""
    if K.is_empty():
        raise ValueError("empty complex: reduced homology convention is ambiguous, caller must decide")
    top = min(up_to, K.dim)
    return all(g.is_zero() for g in homology(K, reduced=True, degrees=range(top + 1)))
