"""Checking the homological nerve theorem on a finite cover.

Level ``k`` hypothesis: for every nerve simplex ``sigma`` of dimension at
most ``k``, the reduced homology of ``U_sigma`` vanishes in degrees
``0..k - dim sigma``. Conclusions: ``H_j(X) = H_j(N)`` for ``j <= k``, and
``H_{k+1}(N) != 0`` forces ``H_{k+1}(X) != 0``.

Conclusions are compared over Z by Smith normal form on both sides. The
optional proof trace replays the intermediate steps: the comparison map
``g`` from the bottom row of the first ``E^1`` page to the nerve's chains,
its isomorphism range, and the page dimensions that make the edge
argument work.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .algebra import CoefficientSpec, IntMatrix, Subspace, kernel_basis, snf
from .complexes import HomologyGroup, SimplicialComplex, boundary_matrix, chain_homology, homology
from .covers import Cover, intersection, nerve
from .mvss import BottomRow, build_double_complex, e1_bottom_row, ss_limit, ss_pages

__all__ = [
    "HypothesisReport",
    "ProofTrace",
    "TheoremFalsified",
    "TheoremReport",
    "Violation",
    "check_g_chain_map",
    "check_hypotheses",
    "check_theorem",
    "g_map",
]


class TheoremFalsified(RuntimeError):
    """Hypotheses held but a conclusion failed: an implementation bug."""

    def __init__(self, message: str, report: "TheoremReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Violation:
    sigma: tuple[str, ...]
    j: int
    group: HomologyGroup

    def to_dict(self) -> dict:
        return {"sigma": list(self.sigma), "j": self.j, "group": self.group.to_dict()}


@dataclass(frozen=True)
class HypothesisReport:
    k: int
    violations: tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"k": self.k, "passed": self.passed, "violations": [v.to_dict() for v in self.violations]}


def check_hypotheses(cover: Cover, k: int) -> HypothesisReport:
    if k < 0:
        raise ValueError("k must be nonnegative")
    violations = []
    for sigma in nerve(cover, max_dim=k):
        top = k - (len(sigma) - 1)
        u = intersection(cover, sigma)
        groups = homology(u, reduced=True, degrees=range(top + 1))
        violations.extend(Violation(sigma, j, g) for j, g in enumerate(groups) if g)
    return HypothesisReport(k, tuple(violations))


def g_map(cover: Cover, m: int, row: BottomRow | None = None) -> IntMatrix:
    """Matrix of ``g_m``: sums the components of each ``U_sigma``.

    Rows follow the sorted m-simplices of the nerve, columns the bottom-row
    basis ``(sigma, component)``.
    """
    if row is None:
        row = e1_bottom_row(cover, m_max=m)
    N = nerve(cover, max_dim=m)
    target = N.index(m)
    cols = row.basis.get(m, [])
    return IntMatrix(len(target), len(cols), {(target[s], j): 1 for j, (s, _) in enumerate(cols)})


def check_g_chain_map(cover: Cover, m_max: int, row: BottomRow | None = None) -> bool:
    """``g_{m-1} d1_m == boundary_m g_m`` for ``1 <= m <= m_max``."""
    if row is None:
        row = e1_bottom_row(cover, m_max=m_max)
    N = nerve(cover, max_dim=m_max)
    for m in range(1, m_max + 1):
        if m > N.dim:
            break
        lhs = g_map(cover, m - 1, row) @ row.differential(m)
        rhs = boundary_matrix(N, m) @ g_map(cover, m, row)
        if lhs != rhs:
            return False
    return True


def _is_isomorphism(m: IntMatrix) -> bool:
    return m.rows == m.cols and all(d == 1 for d in snf(m)) and len(snf(m)) == m.rows


def _is_surjective(m: IntMatrix) -> bool:
    f = snf(m)
    return len(f) == m.rows and all(d == 1 for d in f)


def _induced_surjective(row: BottomRow, N: SimplicialComplex, g: IntMatrix, m: int, coeff: CoefficientSpec) -> bool:
    """Does ``g_m`` induce a surjection ``H_m(bottom row) -> H_m(N)`` over a field?"""
    cycles_row = Subspace.span(kernel_basis(row.differential(m), coeff), g.cols, coeff)
    cycles_n = Subspace.span(kernel_basis(boundary_matrix(N, m), coeff), N.count(m), coeff)
    bounds_n = Subspace.full(N.count(m + 1), coeff).image(boundary_matrix(N, m + 1))
    return (cycles_row.image(g) + bounds_n).dim == cycles_n.dim


@dataclass
class ProofTrace:
    e2_bottom: list[HomologyGroup] = field(default_factory=list)
    e2_matches_nerve: list[bool] = field(default_factory=list)
    g_chain_map: bool = True
    g_isomorphism: list[bool] = field(default_factory=list)
    g_surjective: list[bool] = field(default_factory=list)
    edge_surjection: dict[str, bool] = field(default_factory=dict)
    first_e2: dict = field(default_factory=dict)
    first_einf: dict = field(default_factory=dict)
    antidiagonals_concentrated: bool = True
    e2_equals_einf: bool = True

    def failures(self, k: int) -> list[str]:
        out = []
        if not self.g_chain_map:
            out.append("g is not a chain map")
        out += [f"g_{m} not an isomorphism" for m, ok in enumerate(self.g_isomorphism) if not ok]
        out += [f"g_{m} not surjective" for m, ok in enumerate(self.g_surjective) if not ok]
        out += [f"E2[{m},0] differs from H_{m}(N)" for m, ok in enumerate(self.e2_matches_nerve) if not ok]
        out += [f"no surjection E2[{k + 1},0] -> H_{k + 1}(N) over {c}" for c, ok in self.edge_surjection.items() if not ok]
        if not self.antidiagonals_concentrated:
            out.append("low antidiagonals of E2 not concentrated on the bottom row")
        if not self.e2_equals_einf:
            out.append("E2 and E-infinity differ in the stable range")
        return out

    def to_dict(self) -> dict:
        def dims(d):
            return [{"p": p, "q": q, "dim": v} for (p, q), v in sorted(d.items())]

        return {
            "e2_bottom": [g.to_dict() for g in self.e2_bottom],
            "e2_matches_nerve": self.e2_matches_nerve,
            "g_chain_map": self.g_chain_map,
            "g_isomorphism": self.g_isomorphism,
            "g_surjective": self.g_surjective,
            "edge_surjection": self.edge_surjection,
            "antidiagonals_concentrated": self.antidiagonals_concentrated,
            "e2_equals_einf": self.e2_equals_einf,
            # page comparisons are dimension counts; integral extensions are not resolved
            "page_comparison_scope": "dimensions over q",
            "first_e2": dims(self.first_e2),
            "first_einf": dims(self.first_einf),
        }


@dataclass
class TheoremReport:
    k: int
    hypothesis: HypothesisReport
    h_base: list[HomologyGroup]
    h_nerve: list[HomologyGroup]
    conclusion1: list[bool]
    conclusion2: str
    proof_trace: ProofTrace | None = None

    @property
    def holds(self) -> bool:
        return all(self.conclusion1) and self.conclusion2 != "violated"

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "hypothesis": self.hypothesis.to_dict(),
            "h_base": [g.to_dict() for g in self.h_base],
            "h_nerve": [g.to_dict() for g in self.h_nerve],
            "conclusion1": self.conclusion1,
            "conclusion2": self.conclusion2,
            "proof_trace": self.proof_trace.to_dict() if self.proof_trace else None,
        }


def _trace(cover: Cover, k: int, N: SimplicialComplex, h_nerve: list[HomologyGroup], hyp_passed: bool) -> ProofTrace:
    t = ProofTrace()
    row = e1_bottom_row(cover, m_max=k + 2)
    t.e2_bottom = chain_homology(row.complex, degrees=range(k + 2))
    t.g_chain_map = check_g_chain_map(cover, k + 2, row)
    gs = {m: g_map(cover, m, row) for m in range(min(k + 2, N.dim) + 1)}
    for m in range(k + 2):
        g = gs.get(m, IntMatrix(0, 0))
        t.g_surjective.append(_is_surjective(g))
    if not hyp_passed:
        return t
    t.g_isomorphism = [_is_isomorphism(gs.get(m, IntMatrix(0, 0))) for m in range(k + 1)]
    t.e2_matches_nerve = [t.e2_bottom[m] == h_nerve[m] for m in range(k + 1)]
    coeffs = [CoefficientSpec("q"), CoefficientSpec("p", 2)]
    for d in h_nerve[k + 1].torsion:
        for p in _prime_factors(d):
            if CoefficientSpec("p", p) not in coeffs:
                coeffs.append(CoefficientSpec("p", p))
    m = k + 1
    g = gs.get(m, IntMatrix(N.count(m), 0))
    for c in coeffs:
        t.edge_surjection[str(c)] = _induced_surjective(row, N, g, m, c)

    D = build_double_complex(cover, p_max=k + 2, q_max=k + 2)
    e2 = ss_pages(D, "first", CoefficientSpec("q"), r_max=2, r_min=2)[0]
    einf = ss_limit(D, "first", CoefficientSpec("q"))
    t.first_e2 = {pq: d for pq, d in e2.dims.items() if sum(pq) <= k + 1}
    t.first_einf = {pq: d for pq, d in einf.dims.items() if sum(pq) <= k + 1}
    t.antidiagonals_concentrated = all(
        d == 0 for (p, q), d in e2.dims.items() if p + q <= k and q > 0
    )
    stable = [(p, q) for (p, q) in e2.dims if p + q <= k] + [(k + 1, 0)]
    t.e2_equals_einf = all(e2[pq] == einf[pq] for pq in stable)
    return t


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def check_theorem(cover: Cover, k: int, with_trace: bool = False) -> TheoremReport:
    """Check hypotheses and conclusions of the nerve theorem at level ``k``.

    Raises :class:`TheoremFalsified` when the hypotheses hold but a
    conclusion (or, with ``with_trace``, a proof step) fails.
    """
    hyp = check_hypotheses(cover, k)
    degrees = range(k + 2)
    N = nerve(cover, max_dim=k + 2)
    h_base = homology(cover.base, degrees=degrees)
    h_nerve = homology(N, degrees=degrees)
    c1 = [h_base[j] == h_nerve[j] for j in range(k + 1)]
    if not h_nerve[k + 1]:
        c2 = "vacuous"
    elif h_base[k + 1]:
        c2 = "confirmed"
    else:
        c2 = "violated"
    report = TheoremReport(k, hyp, h_base, h_nerve, c1, c2)
    if with_trace:
        report.proof_trace = _trace(cover, k, N, h_nerve, hyp.passed)
    if hyp.passed:
        problems = [f"H_{j}(X) = {h_base[j]} but H_{j}(N) = {h_nerve[j]}" for j, ok in enumerate(c1) if not ok]
        if c2 == "violated":
            problems.append(f"H_{k + 1}(N) = {h_nerve[k + 1]} but H_{k + 1}(X) = 0")
        if report.proof_trace is not None:
            problems += report.proof_trace.failures(k)
        if problems:
            raise TheoremFalsified("; ".join(problems), report)
    return report
