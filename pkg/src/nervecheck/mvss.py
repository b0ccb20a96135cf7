"""The Mayer-Vietoris double complex of a cover and its two spectral sequences.

``A[p, q]`` is spanned by pairs ``(sigma, tau)`` with ``sigma`` a p-simplex
of the nerve and ``tau`` a q-simplex of ``U_sigma``. The horizontal map
``d'`` drops nerve vertices, the vertical map ``d''`` is the simplicial
boundary inside ``U_sigma``; they commute, and the total differential is
``d' + (-1)^p d''``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .algebra import CoefficientSpec, IntMatrix, Subspace, block_matrix, kernel_basis
from .complexes import (
    ChainComplex,
    HomologyGroup,
    Simplex,
    SimplicialComplex,
    chain_homology,
    faces,
    vertex_key,
)
from .covers import Cover, intersection, nerve

__all__ = [
    "BottomRow",
    "DoubleComplex",
    "PageTable",
    "build_double_complex",
    "check_bicomplex",
    "e1_bottom_row",
    "path_components",
    "row_homology",
    "ss_limit",
    "ss_pages",
    "total_complex",
    "total_grading",
]

Pair = tuple  # (sigma, tau)


@dataclass(frozen=True)
class DoubleComplex:
    basis: Mapping[tuple[int, int], list[Pair]]
    d_prime: Mapping[tuple[int, int], IntMatrix]
    d_dprime: Mapping[tuple[int, int], IntMatrix]
    p_max: int
    q_max: int

    def rank(self, p: int, q: int) -> int:
        return len(self.basis.get((p, q), ()))

    def horizontal(self, p: int, q: int) -> IntMatrix:
        """``d': A[p, q] -> A[p-1, q]`` (zero matrix outside the stored range)."""
        if (p, q) in self.d_prime:
            return self.d_prime[(p, q)]
        return IntMatrix(self.rank(p - 1, q), self.rank(p, q))

    def vertical(self, p: int, q: int) -> IntMatrix:
        """``d'': A[p, q] -> A[p, q-1]``."""
        if (p, q) in self.d_dprime:
            return self.d_dprime[(p, q)]
        return IntMatrix(self.rank(p, q - 1), self.rank(p, q))

    def bidegrees(self) -> list[tuple[int, int]]:
        return [(p, q) for p in range(self.p_max + 1) for q in range(self.q_max + 1)]

    def replace_horizontal(self, p: int, q: int, m: IntMatrix) -> "DoubleComplex":
        d = dict(self.d_prime)
        d[(p, q)] = m
        return DoubleComplex(self.basis, d, self.d_dprime, self.p_max, self.q_max)

    def replace_vertical(self, p: int, q: int, m: IntMatrix) -> "DoubleComplex":
        d = dict(self.d_dprime)
        d[(p, q)] = m
        return DoubleComplex(self.basis, self.d_prime, d, self.p_max, self.q_max)


def build_double_complex(cover: Cover, p_max: int | None = None, q_max: int | None = None) -> DoubleComplex:
    """Double complex of ``cover`` restricted to ``p <= p_max``, ``q <= q_max``.

    Defaults cover everything: ``p_max = dim N`` and ``q_max = dim X``.
    Truncation keeps a sub-double-complex, so the total complex agrees with
    the untruncated one in degrees below ``min(p_max, q_max)``.
    """
    N = nerve(cover, max_dim=p_max)
    if p_max is None:
        p_max = max(N.dim, 0)
    if q_max is None:
        q_max = max(cover.base.dim, 0)
    pieces = {sigma: intersection(cover, sigma) for sigma in N}
    basis: dict[tuple[int, int], list[Pair]] = {}
    for p in range(p_max + 1):
        for q in range(q_max + 1):
            basis[(p, q)] = [(s, t) for s in N.simplices_of_dim(p) for t in pieces[s].simplices_of_dim(q)]
    index = {pq: {pair: i for i, pair in enumerate(b)} for pq, b in basis.items()}

    d_prime = {}
    d_dprime = {}
    for (p, q), b in basis.items():
        if p >= 1:
            target = index[(p - 1, q)]
            entries = {}
            for j, (s, t) in enumerate(b):
                for i, f in enumerate(faces(s)):
                    entries[(target[(f, t)], j)] = -1 if i % 2 else 1
            d_prime[(p, q)] = IntMatrix(len(target), len(b), entries)
        if q >= 1:
            target = index[(p, q - 1)]
            entries = {}
            for j, (s, t) in enumerate(b):
                for i, f in enumerate(faces(t)):
                    entries[(target[(s, f)], j)] = -1 if i % 2 else 1
            d_dprime[(p, q)] = IntMatrix(len(target), len(b), entries)
    return DoubleComplex(basis, d_prime, d_dprime, p_max, q_max)


def bicomplex_defects(D: DoubleComplex) -> list[str]:
    """Names of the identities that fail, e.g. ``"d'd'(2,0)"``."""
    bad = []
    for p, q in D.bidegrees():
        if p >= 2 and not (D.horizontal(p - 1, q) @ D.horizontal(p, q)).is_zero():
            bad.append(f"d'd'({p},{q})")
        if q >= 2 and not (D.vertical(p, q - 1) @ D.vertical(p, q)).is_zero():
            bad.append(f"d''d''({p},{q})")
        if p >= 1 and q >= 1:
            if D.horizontal(p, q - 1) @ D.vertical(p, q) != D.vertical(p - 1, q) @ D.horizontal(p, q):
                bad.append(f"d'd''-d''d'({p},{q})")
    return bad


def check_bicomplex(D: DoubleComplex) -> bool:
    """``d'd' = 0``, ``d''d'' = 0`` and ``d'd'' = d''d'`` exactly, everywhere in range."""
    return not bicomplex_defects(D)


def total_grading(D: DoubleComplex, n: int) -> list[tuple[int, int]]:
    """Bidegree of each basis element of ``Tot_n`` (increasing ``p``)."""
    out = []
    for p in range(D.p_max + 1):
        q = n - p
        if 0 <= q <= D.q_max:
            out.extend([(p, q)] * D.rank(p, q))
    return out


def total_complex(D: DoubleComplex, check: bool = True) -> ChainComplex:
    """Total complex with differential ``d' + (-1)^p d''`` on ``A[p, q]``."""
    if check:
        bad = bicomplex_defects(D)
        if bad:
            raise ValueError(f"double complex identities fail: {bad}")
    top = D.p_max + D.q_max
    ranks = []
    blocks_of = {}
    for n in range(top + 1):
        ranks.append(len(total_grading(D, n)))
    for n in range(1, top + 1):
        src = [p for p in range(D.p_max + 1) if 0 <= n - p <= D.q_max]
        dst = [p for p in range(D.p_max + 1) if 0 <= n - 1 - p <= D.q_max]
        dpos = {p: i for i, p in enumerate(dst)}
        blocks = {}
        for b, p in enumerate(src):
            q = n - p
            if p >= 1 and p - 1 in dpos:
                blocks[(dpos[p - 1], b)] = D.horizontal(p, q)
            if q >= 1 and p in dpos:
                v = D.vertical(p, q)
                blocks[(dpos[p], b)] = -v if p % 2 else v
        blocks_of[n] = block_matrix(
            blocks,
            [D.rank(p, n - 1 - p) for p in dst],
            [D.rank(p, n - p) for p in src],
        )
    return ChainComplex(tuple(ranks), blocks_of)


def row_complex(D: DoubleComplex, q: int) -> ChainComplex:
    """The row ``A[., q]`` under ``d'``."""
    if not 0 <= q <= D.q_max:
        raise ValueError(f"row {q} outside 0..{D.q_max}")
    ranks = tuple(D.rank(p, q) for p in range(D.p_max + 1))
    return ChainComplex(ranks, {p: D.horizontal(p, q) for p in range(1, D.p_max + 1)})


def row_homology(D: DoubleComplex, q: int, coeff: CoefficientSpec = CoefficientSpec("z")) -> list[HomologyGroup]:
    """Homology of the row ``A[., q]``, indexed by ``p = 0..p_max``.

    The top degree ``p_max`` is only meaningful when the nerve was not
    truncated (``p_max >= dim N``).
    """
    return chain_homology(row_complex(D, q), coeff, range(D.p_max + 1))


# ---------------------------------------------------------------------------
# spectral sequences


@dataclass(frozen=True)
class PageTable:
    """Dimensions of ``E^r[p, q]`` over a field; ``r`` is ``None`` for the limit page.

    ``stable`` records that every ``d^r`` vanishes in range, i.e. page
    ``r + 1`` has the same dimensions.
    """

    r: int | None
    which: str
    dims: Mapping[tuple[int, int], int]
    stable: bool | None = None

    def __getitem__(self, pq: tuple[int, int]) -> int:
        return self.dims.get(pq, 0)

    def antidiagonal(self, n: int) -> dict[tuple[int, int], int]:
        return {pq: d for pq, d in self.dims.items() if sum(pq) == n}

    def total(self, n: int) -> int:
        return sum(self.antidiagonal(n).values())

    def to_dict(self) -> dict:
        return {
            "r": "inf" if self.r is None else self.r,
            "which": self.which,
            "stable": self.stable,
            "dims": [{"p": p, "q": q, "dim": d} for (p, q), d in sorted(self.dims.items())],
        }


class _FilteredTotal:
    """Total complex with one of the two filtrations, over a field."""

    def __init__(self, D: DoubleComplex, which: str, coeff: CoefficientSpec):
        if which not in ("first", "second"):
            raise ValueError(f"which must be 'first' or 'second', got {which!r}")
        if not coeff.is_field:
            raise ValueError("spectral-sequence pages are computed over fields only")
        self.D = D
        self.which = which
        self.coeff = coeff
        self.tot = total_complex(D)
        self.top = D.p_max + D.q_max
        self.s_max = D.p_max if which == "first" else D.q_max
        self.grading = {n: total_grading(D, n) for n in range(self.top + 1)}
        self.filt = {n: [pq[0] if which == "first" else pq[1] for pq in g] for n, g in self.grading.items()}
        self._z: dict = {}

    def dim(self, n: int) -> int:
        return len(self.grading.get(n, ()))

    def F(self, s: int, n: int) -> Subspace:
        """``F_s Tot_n``."""
        return Subspace.coordinate([i for i, f in enumerate(self.filt.get(n, ())) if f <= s], self.dim(n), self.coeff)

    def Z(self, r: int, s: int, n: int) -> Subspace:
        """``F_s Tot_n`` intersected with the preimage of ``F_{s-r} Tot_{n-1}``."""
        low = max(s - r, -1)
        s = min(s, self.s_max)
        key = (s, low, n)
        if key not in self._z:
            if n == 0 or low >= self.s_max:
                self._z[key] = self.F(s, n)
            else:
                target = self.F(low, n - 1).preimage(self.tot.boundary(n))
                self._z[key] = target & self.F(s, n)
        return self._z[key]

    def B(self, r: int, s: int, n: int) -> Subspace:
        """``d Z^{r-1}_{s+r-1}`` in degree ``n`` (zero for ``r = 0``)."""
        if r == 0 or n + 1 > self.top:
            return Subspace.zero(self.dim(n), self.coeff)
        return self.Z(r - 1, s + r - 1, n + 1).image(self.tot.boundary(n + 1))

    def entry(self, r: int, s: int, n: int) -> int:
        below = self.F(s - 1, n)
        return (self.Z(r, s, n) + below).dim - (self.B(r, s, n) + below).dim

    def bidegree(self, s: int, n: int) -> tuple[int, int]:
        return (s, n - s) if self.which == "first" else (n - s, s)

    def page(self, r: int) -> dict[tuple[int, int], int]:
        dims = {}
        for n in range(self.top + 1):
            for s in range(self.s_max + 1):
                p, q = self.bidegree(s, n)
                if 0 <= p <= self.D.p_max and 0 <= q <= self.D.q_max:
                    dims[(p, q)] = self.entry(r, s, n)
        return dims

    @property
    def r_infinity(self) -> int:
        # past this page every Z and B has stopped changing
        return self.s_max + 2


def ss_pages(
    D: DoubleComplex,
    which: str = "first",
    field: CoefficientSpec = CoefficientSpec("q"),
    r_max: int = 2,
    r_min: int = 0,
) -> list[PageTable]:
    """Pages ``E^r`` for ``r_min <= r <= r_max`` of the spectral sequence of
    the first (column, ``p``) or second (row, ``q``) filtration.

    Dimensions come from the filtered total complex:
    ``E^r_s = (Z^r_s + F_{s-1}) / (d Z^{r-1}_{s+r-1} + F_{s-1})`` with
    ``Z^r_s = F_s`` intersected with the preimage of ``F_{s-r}``. Entries are
    keyed by the double-complex bidegree ``(p, q)`` in both cases.
    """
    ft = _FilteredTotal(D, which, field)
    dims = [ft.page(r) for r in range(r_min, r_max + 2)]
    return [
        PageTable(r, which, dims[i], stable=dims[i] == dims[i + 1])
        for i, r in enumerate(range(r_min, r_max + 1))
    ]


def ss_limit(D: DoubleComplex, which: str = "first", field: CoefficientSpec = CoefficientSpec("q")) -> PageTable:
    """The ``E^infinity`` page (reached at a finite page for bounded filtrations)."""
    ft = _FilteredTotal(D, which, field)
    return PageTable(None, which, ft.page(ft.r_infinity), stable=True)


# ---------------------------------------------------------------------------
# bottom row of the first E^1 page


def path_components(K: SimplicialComplex) -> dict[str, str]:
    """Map each vertex to its component representative (least vertex)."""
    parent = {v: v for v in K.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in K.simplices_of_dim(1):
        ra, rb = find(a), find(b)
        if ra != rb:
            if vertex_key(ra) < vertex_key(rb):
                parent[rb] = ra
            else:
                parent[ra] = rb
    return {v: find(v) for v in parent}


@dataclass(frozen=True)
class BottomRow:
    """``E^1[m, 0] = sum over m-simplices sigma of H_0(U_sigma)`` with ``d^1``.

    ``basis[m]`` lists pairs ``(sigma, representative vertex)``.
    """

    basis: Mapping[int, list[tuple[Simplex, str]]]
    complex: ChainComplex

    def differential(self, m: int) -> IntMatrix:
        return self.complex.boundary(m)

    def replace_differential(self, m: int, matrix: IntMatrix) -> "BottomRow":
        b = dict(self.complex.boundaries)
        b[m] = matrix
        return BottomRow(self.basis, ChainComplex(self.complex.ranks, b))


def e1_bottom_row(cover: Cover, m_max: int | None = None) -> BottomRow:
    """Bottom row of the first spectral sequence's ``E^1`` page over Z.

    A component of ``U_sigma`` maps under the i-th face to the component of
    ``U_{d_i sigma}`` containing it, with sign ``(-1)^i``.
    """
    N = nerve(cover, max_dim=m_max)
    top = N.dim if m_max is None else min(m_max, N.dim)
    comps = {s: path_components(intersection(cover, s)) for s in N}
    basis = {}
    index = {}
    for m in range(top + 1):
        basis[m] = [(s, rep) for s in N.simplices_of_dim(m) for rep in sorted(set(comps[s].values()), key=vertex_key)]
        index[m] = {pair: i for i, pair in enumerate(basis[m])}
    boundaries = {}
    for m in range(1, top + 1):
        entries = {}
        for j, (s, rep) in enumerate(basis[m]):
            for i, f in enumerate(faces(s)):
                row = index[m - 1][(f, comps[f][rep])]
                entries[(row, j)] = entries.get((row, j), 0) + (-1 if i % 2 else 1)
        boundaries[m] = IntMatrix(len(basis[m - 1]), len(basis[m]), entries)
    ranks = tuple(len(basis[m]) for m in range(top + 1))
    return BottomRow(basis, ChainComplex(ranks, boundaries))


def cycle_space(m: IntMatrix, coeff: CoefficientSpec) -> Subspace:
    return Subspace.span(kernel_basis(m, coeff), m.cols, coeff)
