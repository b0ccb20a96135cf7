"""Exact linear algebra over the integers, the rationals and prime fields.

Matrices are sparse maps from ``(row, col)`` to nonzero Python ints, so
entries never overflow. Integer questions (invariant factors, torsion) go
through :func:`snf`; rank, kernels and subspace arithmetic are done over a
field given by a :class:`CoefficientSpec`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Mapping, Sequence

__all__ = [
    "CoefficientSpec",
    "IntMatrix",
    "InvariantFactors",
    "Subspace",
    "kernel_basis",
    "rank",
    "snf",
    "subspace_dim",
]

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class CoefficientSpec:
    """Coefficient ring: ``"z"`` (integers), ``"q"`` (rationals) or ``"p"`` (Z/p)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("z", "q", "p"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "p":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"prime-field modulus must be prime, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("modulus only allowed for prime fields")

    @classmethod
    def integers(cls) -> "CoefficientSpec":
        return cls("z")

    @classmethod
    def rationals(cls) -> "CoefficientSpec":
        return cls("q")

    @classmethod
    def prime_field(cls, p: int) -> "CoefficientSpec":
        return cls("p", p)

    @classmethod
    def parse(cls, text: str) -> "CoefficientSpec":
        """Parse the CLI notation ``z``, ``q`` or ``p:<prime>``."""
        text = text.strip().lower()
        if text in ("z", "q"):
            return cls(text)
        if text.startswith("p:"):
            try:
                p = int(text[2:])
            except ValueError:
                raise ValueError(f"bad prime in coefficient spec {text!r}") from None
            return cls("p", p)
        raise ValueError(f"bad coefficient spec {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "z"

    def __str__(self) -> str:
        return f"p:{self.p}" if self.kind == "p" else self.kind

    # field arithmetic; only meaningful when is_field
    def convert(self, n: int):
        if self.kind == "p":
            return n % self.p
        return Fraction(n)

    def normalize(self, x):
        return x % self.p if self.kind == "p" else x

    def inverse(self, x):
        if self.kind == "p":
            return pow(x, -1, self.p)
        return 1 / x


def _require_field(coeff: CoefficientSpec) -> None:
    if not coeff.is_field:
        raise ValueError(
            "integer coefficients are not a field; ask for rationals explicitly "
            "(the Z-rank equals the Q-rank)"
        )


class IntMatrix:
    """Immutable sparse integer matrix."""

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = int(v)
            if v:
                clean[(i, j)] = v
        self._entries = clean

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v})

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @property
    def entries(self) -> Mapping[tuple[int, int], int]:
        return dict(self._entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self._entries.get(key, 0)

    def items(self):
        return self._entries.items()

    @cached_property
    def columns(self) -> list[dict[int, int]]:
        out = [dict() for _ in range(self.cols)]
        for (i, j), v in self._entries.items():
            out[j][i] = v
        return out

    @cached_property
    def row_maps(self) -> list[dict[int, int]]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    def with_entry(self, i: int, j: int, value: int) -> "IntMatrix":
        entries = dict(self._entries)
        entries[(i, j)] = value
        return IntMatrix(self.rows, self.cols, entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        return IntMatrix(
            len(rows),
            len(cols),
            {(rpos[i], cpos[j]): v for (i, j), v in self._entries.items() if i in rpos and j in cpos},
        )

    def is_zero(self) -> bool:
        return not self._entries

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: dict[tuple[int, int], int] = {}
        other_rows = other.row_maps
        for (i, k), a in self._entries.items():
            for j, b in other_rows[k].items():
                out[(i, j)] = out.get((i, j), 0) + a * b
        return IntMatrix(self.rows, other.cols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        out = dict(self._entries)
        for key, v in other._entries.items():
            out[key] = out.get(key, 0) + v
        return IntMatrix(self.rows, self.cols, out)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, {k: c * v for k, v in self._entries.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def block_matrix(blocks: Mapping[tuple[int, int], IntMatrix], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> IntMatrix:
    """Assemble a matrix from blocks keyed by (block-row, block-col)."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    entries = {}
    for (bi, bj), m in blocks.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block ({bi}, {bj}) has shape {m.shape}")
        for (i, j), v in m.items():
            key = (roff[bi] + i, coff[bj] + j)
            entries[key] = entries.get(key, 0) + v
    return IntMatrix(roff[-1], coff[-1], entries)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class InvariantFactors:
    factors: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"not a divisibility chain: {self.factors}")
        if any(d <= 0 for d in self.factors):
            raise ValueError("invariant factors must be positive")

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)

    def __eq__(self, other):
        if isinstance(other, InvariantFactors):
            return self.factors == other.factors
        if isinstance(other, (list, tuple)):
            return list(self.factors) == list(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.factors)


def _diagonal_to_chain(diag: Iterable[int]) -> list[int]:
    # (a, b) -> (gcd, lcm) until every entry divides the next
    d = sorted(abs(x) for x in diag)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = d[i], d[j]
            if b % a:
                g = gcd(a, b)
                d[i], d[j] = g, a // g * b
    return d


def snf(m: IntMatrix) -> InvariantFactors:
    """Invariant factors ``d1 | d2 | ...`` of an integer matrix.

    Elimination works on a sparse copy. The pivot is always an entry of
    minimal absolute value among the remaining rows and columns, ties broken
    by the smallest (row, col). The pivot's row and column are cleared by
    integer division; a nonzero remainder becomes the next pivot. The
    resulting diagonal is then turned into a divisibility chain.

    >>> snf(IntMatrix.from_dense([[2, 4], [6, 8]])).factors
    (2, 4)
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), v in m.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)

    def add_row(target: int, source: int, c: int) -> None:
        # row[target] += c * row[source]
        if not c:
            return
        tr = rows[target]
        for j, v in rows[source].items():
            nv = tr.get(j, 0) + c * v
            if nv:
                if j not in tr:
                    cols[j].add(target)
                tr[j] = nv
            else:
                del tr[j]
                cols[j].discard(target)

    def add_col(target: int, source: int, c: int) -> None:
        # col[target] += c * col[source]
        if not c:
            return
        for i in list(cols[source]):
            r = rows[i]
            nv = r.get(target, 0) + c * r[source]
            if nv:
                if target not in r:
                    cols.setdefault(target, set()).add(i)
                r[target] = nv
            else:
                del r[target]
                cols[target].discard(i)

    diag: list[int] = []
    while True:
        best = None
        for i, r in rows.items():
            for j, v in r.items():
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, pi, pj = best
        while True:
            a = rows[pi][pj]
            for i in sorted(cols[pj] - {pi}):
                q = rows[i][pj] // a
                add_row(i, pi, -q)
            for j in sorted(set(rows[pi]) - {pj}):
                q = rows[pi][j] // a
                add_col(j, pj, -q)
            # remainders smaller than |a| may remain; move the pivot to one
            rest = [(abs(rows[i][pj]), i, pj) for i in cols[pj] if i != pi]
            rest += [(abs(v), pi, j) for j, v in rows[pi].items() if j != pj]
            if not rest:
                break
            _, pi, pj = min(rest)
        diag.append(rows[pi][pj])
        for j in list(rows[pi]):
            cols[j].discard(pi)
        del rows[pi]
        cols.pop(pj, None)
    return InvariantFactors(tuple(_diagonal_to_chain(diag)))


# ---------------------------------------------------------------------------
# Field linear algebra on sparse vectors


class _Echelon:
    """Incrementally reduced set of sparse vectors over a field.

    Each stored vector has a distinct pivot (its smallest index) with value 1.
    When ``track`` is set, every inserted vector carries a companion vector
    recording the combination of inputs it came from.
    """

    def __init__(self, coeff: CoefficientSpec, track: bool = False):
        _require_field(coeff)
        self.coeff = coeff
        self.track = track
        self.pivots: dict[int, tuple[dict, dict | None]] = {}

    def _axpy(self, y: dict, a, x: dict) -> None:
        # y -= a * x, in place
        norm = self.coeff.normalize
        for k, v in x.items():
            nv = norm(y.get(k, 0) - a * v)
            if nv:
                y[k] = nv
            else:
                y.pop(k, None)

    def reduce(self, v: dict, t: dict | None = None) -> tuple[dict, dict | None]:
        v = dict(v)
        t = dict(t) if t is not None else None
        while v:
            piv = min(v)
            if piv not in self.pivots:
                break
            a = v[piv]
            bv, bt = self.pivots[piv]
            self._axpy(v, a, bv)
            if t is not None:
                self._axpy(t, a, bt)
            # reduced vectors keep their smallest index; continue past it
            if v and min(v) == piv:
                raise AssertionError("elimination failed to clear pivot")
        return v, t

    def insert(self, v: dict, t: dict | None = None) -> tuple[dict, dict | None]:
        """Reduce ``v``; store it if independent. Returns the reduced pair."""
        v, t = self.reduce(v, t)
        if v:
            piv = min(v)
            inv = self.coeff.inverse(v[piv])
            norm = self.coeff.normalize
            v = {k: norm(x * inv) for k, x in v.items()}
            if t is not None:
                t = {k: norm(x * inv) for k, x in t.items()}
            self.pivots[piv] = (v, t)
        return v, t

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[dict]:
        return [self.pivots[k][0] for k in sorted(self.pivots)]


def _field_vec(v: Mapping[int, int], coeff: CoefficientSpec) -> dict:
    out = {}
    for k, x in v.items():
        y = coeff.convert(x) if isinstance(x, int) else coeff.normalize(x)
        if y:
            out[k] = y
    return out


def _column_kernel(columns: Sequence[Mapping], ncols: int, coeff: CoefficientSpec) -> tuple[int, list[dict]]:
    ech = _Echelon(coeff, track=True)
    kernel = []
    one = coeff.convert(1)
    for j in range(ncols):
        v, t = ech.insert(_field_vec(columns[j], coeff), {j: one})
        if not v:
            kernel.append(t)
    return ech.rank, kernel


def rank(m: IntMatrix, coeff: CoefficientSpec) -> int:
    """Rank of ``m`` over a field. Integer coefficients are refused."""
    _require_field(coeff)
    ech = _Echelon(coeff)
    # eliminate along the shorter side
    vecs = m.columns if m.cols <= m.rows else m.row_maps
    for v in vecs:
        ech.insert(_field_vec(v, coeff))
    return ech.rank


def kernel_basis(m: IntMatrix, coeff: CoefficientSpec) -> list[dict]:
    """Basis of the right kernel of ``m`` as sparse vectors ``{col: value}``."""
    _require_field(coeff)
    _, kernel = _column_kernel(m.columns, m.cols, coeff)
    return kernel


def to_dense_vector(v: Mapping[int, object], n: int) -> list:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out


def apply(m: IntMatrix, v: Mapping[int, object], coeff: CoefficientSpec | None = None) -> dict:
    """Sparse matrix-vector product, reduced mod p when ``coeff`` is a prime field."""
    out: dict[int, object] = {}
    cols = m.columns
    for j, x in v.items():
        for i, a in cols[j].items():
            out[i] = out.get(i, 0) + a * x
    if coeff is not None and coeff.kind == "p":
        return {i: x % coeff.p for i, x in out.items() if x % coeff.p}
    return {i: x for i, x in out.items() if x}


# ---------------------------------------------------------------------------
# Subspaces


class Subspace:
    """A subspace of ``F^ambient`` held as a reduced basis.

    ``coords`` is set for coordinate subspaces (spans of standard basis
    vectors); intersections and preimages use it to avoid stacked systems.
    """

    def __init__(self, ambient: int, coeff: CoefficientSpec, vectors: Iterable[Mapping] = (), coords: frozenset[int] | None = None):
        _require_field(coeff)
        self.ambient = ambient
        self.coeff = coeff
        self.coords = coords
        ech = _Echelon(coeff)
        if coords is not None:
            one = coeff.convert(1)
            for c in sorted(coords):
                if not 0 <= c < ambient:
                    raise ValueError(f"coordinate {c} outside ambient dimension {ambient}")
                ech.pivots[c] = ({c: one}, None)
        else:
            for v in vectors:
                if v and (min(v) < 0 or max(v) >= ambient):
                    raise ValueError(f"vector outside ambient dimension {ambient}")
                ech.insert(_field_vec(v, coeff))
        self._ech = ech

    @classmethod
    def span(cls, vectors: Iterable[Mapping], ambient: int, coeff: CoefficientSpec) -> "Subspace":
        return cls(ambient, coeff, vectors)

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient: int, coeff: CoefficientSpec) -> "Subspace":
        return cls(ambient, coeff, coords=frozenset(indices))

    @classmethod
    def zero(cls, ambient: int, coeff: CoefficientSpec) -> "Subspace":
        return cls(ambient, coeff, coords=frozenset())

    @classmethod
    def full(cls, ambient: int, coeff: CoefficientSpec) -> "Subspace":
        return cls(ambient, coeff, coords=frozenset(range(ambient)))

    @property
    def dim(self) -> int:
        return self._ech.rank

    def basis(self) -> list[dict]:
        return self._ech.basis()

    def contains(self, v: Mapping) -> bool:
        r, _ = self._ech.reduce(_field_vec(v, self.coeff))
        return not r

    def _check(self, other: "Subspace") -> None:
        if other.ambient != self.ambient:
            raise ValueError(f"ambient dimension mismatch: {self.ambient} vs {other.ambient}")
        if other.coeff != self.coeff:
            raise ValueError("coefficient mismatch")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.coords is not None and other.coords is not None:
            return Subspace(self.ambient, self.coeff, coords=self.coords | other.coords)
        return Subspace(self.ambient, self.coeff, self.basis() + other.basis())

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.coords is not None and other.coords is not None:
            return Subspace(self.ambient, self.coeff, coords=self.coords & other.coords)
        if other.coords is not None:
            self, other = other, self
        if self.coords is not None:
            # vectors of other with no weight outside coords
            outside = [c for c in range(self.ambient) if c not in self.coords]
            return other._restrict_zero(outside)
        ub, wb = self.basis(), other.basis()
        _, kernel = _column_kernel(ub + wb, len(ub) + len(wb), self.coeff)
        vecs = []
        for t in kernel:
            acc: dict = {}
            for i, a in t.items():
                if i < len(ub):
                    for k, x in ub[i].items():
                        acc[k] = acc.get(k, 0) + a * x
            vecs.append({k: x for k, x in acc.items() if self.coeff.normalize(x)})
        return Subspace(self.ambient, self.coeff, vecs)

    def _restrict_zero(self, coords: Sequence[int]) -> "Subspace":
        # {v in self : v_c = 0 for c in coords}
        basis = self.basis()
        cset = set(coords)
        projected = [{k: x for k, x in b.items() if k in cset} for b in basis]
        _, kernel = _column_kernel(projected, len(basis), self.coeff)
        vecs = []
        for t in kernel:
            acc: dict = {}
            for i, a in t.items():
                for k, x in basis[i].items():
                    acc[k] = acc.get(k, 0) + a * x
            vecs.append(acc)
        return Subspace(self.ambient, self.coeff, vecs)

    def image(self, m: IntMatrix) -> "Subspace":
        if m.cols != self.ambient:
            raise ValueError(f"matrix has {m.cols} columns, subspace ambient is {self.ambient}")
        return Subspace(m.rows, self.coeff, [apply(m, b, self.coeff) for b in self.basis()])

    def preimage(self, m: IntMatrix) -> "Subspace":
        """``{v : m v in self}``, a subspace of ``F^m.cols``."""
        if m.rows != self.ambient:
            raise ValueError(f"matrix has {m.rows} rows, subspace ambient is {self.ambient}")
        if self.coords is not None:
            outside = [i for i in range(m.rows) if i not in self.coords]
            sub = m.submatrix(outside, list(range(m.cols)))
            return Subspace(m.cols, self.coeff, kernel_basis(sub, self.coeff))
        wb = self.basis()
        columns = list(m.columns) + wb
        _, kernel = _column_kernel(columns, len(columns), self.coeff)
        vecs = [{k: x for k, x in t.items() if k < m.cols} for t in kernel]
        return Subspace(m.cols, self.coeff, vecs)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, coeff={self.coeff})"


def _eval_subspace(expr, coeff: CoefficientSpec, ambient: int | None) -> Subspace:
    if isinstance(expr, Subspace):
        return expr
    op, *args = expr
    if op == "span":
        vectors, amb = args[0], (args[1] if len(args) > 1 else ambient)
        vectors = [dict(enumerate(v)) if isinstance(v, (list, tuple)) else v for v in vectors]
        vectors = [{k: x for k, x in v.items() if x} for v in vectors]
        if amb is None:
            raise ValueError("span needs an ambient dimension")
        return Subspace.span(vectors, amb, coeff)
    if op == "sum":
        a, b = (_eval_subspace(e, coeff, ambient) for e in args)
        return a + b
    if op == "intersection":
        a, b = (_eval_subspace(e, coeff, ambient) for e in args)
        return a & b
    if op == "image":
        m, e = args
        return _eval_subspace(e, coeff, m.cols).image(m)
    if op == "preimage":
        m, e = args
        return _eval_subspace(e, coeff, m.rows).preimage(m)
    raise ValueError(f"unknown subspace operation {op!r}")


def subspace_dim(expr, coeff: CoefficientSpec, ambient: int | None = None) -> int:
    """Dimension of a subspace described by a nested expression.

    Expressions are :class:`Subspace` objects or tuples::

        ("span", vectors[, ambient])
        ("sum", e1, e2)
        ("intersection", e1, e2)
        ("image", matrix, e)
        ("preimage", matrix, e)

    Vectors may be dense lists or sparse ``{index: value}`` maps.

    >>> q = CoefficientSpec.rationals()
    >>> subspace_dim(("intersection", ("span", [[1, 0]]), ("span", [[0, 1]])), q, ambient=2)
    0
    """
    _require_field(coeff)
    return _eval_subspace(expr, coeff, ambient).dim
