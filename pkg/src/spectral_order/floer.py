"""Generators, domains, admissibility, Maslov index, J+ and the graded differential.

Conventions: a domain ``D`` from ``x`` to ``y`` satisfies
``alpha_boundary_endpoints(D) = x - y`` (the α-part of ``∂D`` runs from the
points of ``y`` to the points of ``x``) and has multiplicity zero at every
basepoint region.  With this convention the contact generator of an
open-book diagram is a cycle: no positive domain leaves it.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import gf2
from .diagram import (
    Domain,
    HeegaardDiagram,
    alpha_boundary_endpoints,
    euler_measure,
    generator_point_measure,
)
from .gf2 import Matrix
from .lattice import IntegerSystem, linprog_exact
from .spectral import FilteredComplex, check_graded_identity


class FloerError(ValueError):
    """Raised for malformed domains, counts or differentials."""


# ---------------------------------------------------------------------------
# Generators.


@dataclass(frozen=True)
class Generator:
    points: tuple[str, ...]  # indexed by α curve
    sigma: tuple[int, ...]  # α index -> β index

    @property
    def cycles(self) -> int:
        seen = [False] * len(self.sigma)
        count = 0
        for i in range(len(self.sigma)):
            if not seen[i]:
                count += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = self.sigma[j]
        return count

    @property
    def label(self) -> str:
        return "{" + ",".join(self.points) + "}"

    def __str__(self) -> str:
        return self.label


def make_generator(d: HeegaardDiagram, points: Iterable[str]) -> Generator:
    """Generator from point ids in any order; raises unless they form a bijection."""
    pts = [d.point(p) for p in points]
    n = d.n_curves
    if len(pts) != n or sorted(p.alpha for p in pts) != list(range(n)) or sorted(p.beta for p in pts) != list(range(n)):
        raise FloerError(f"points {sorted(p.id for p in pts)} do not match α curves to β curves bijectively")
    pts.sort(key=lambda p: p.alpha)
    return Generator(tuple(p.id for p in pts), tuple(p.beta for p in pts))


def parse_generator(d: HeegaardDiagram, spec) -> Generator:
    """Generator from a list of ids, a comma separated string, or a ``{...}`` label."""
    if isinstance(spec, Generator):
        return spec
    if isinstance(spec, str):
        spec = [t.strip() for t in spec.strip().strip("{}").split(",") if t.strip()]
    return make_generator(d, spec)


def enumerate_generators(d: HeegaardDiagram) -> list[Generator]:
    """All generators, ordered lexicographically by the diagram's point order per α curve."""
    by_alpha: list[list] = [[] for _ in range(d.n_curves)]
    for p in d.points:
        by_alpha[p.alpha].append(p)
    out: list[Generator] = []
    chosen: list = []
    used = [False] * d.n_curves

    def rec(i: int) -> None:
        if i == d.n_curves:
            out.append(Generator(tuple(p.id for p in chosen), tuple(p.beta for p in chosen)))
            return
        for p in by_alpha[i]:
            if not used[p.beta]:
                used[p.beta] = True
                chosen.append(p)
                rec(i + 1)
                chosen.pop()
                used[p.beta] = False

    rec(0)
    return out


def contact_generator(d: HeegaardDiagram, points: Iterable[str]) -> Generator:
    return make_generator(d, points)


# ---------------------------------------------------------------------------
# Domains between generators.


class _DomainSystem:
    """Endpoint and basepoint equations of a diagram, prepared once."""

    def __init__(self, d: HeegaardDiagram):
        R = len(d.regions)
        rows = []
        for p in d.points:
            row = [0] * R
            for q, ri in zip((1, 2, 3, 4), d.quadrant_regions(p.id)):
                row[ri] += 1 if q in (2, 4) else -1
            rows.append(row)
        for bi in d.basepoint_indices:
            row = [0] * R
            row[bi] = 1
            rows.append(row)
        self.system = IntegerSystem(rows, R)
        self.n_points = len(d.points)
        self.n_base = len(d.basepoint_indices)


def _system(d: HeegaardDiagram) -> _DomainSystem:
    cached = getattr(d, "_floer_system", None)
    if cached is None:
        cached = _DomainSystem(d)
        d._floer_system = cached  # type: ignore[attr-defined]
    return cached


@dataclass(frozen=True)
class DomainSpace:
    particular: Domain | None
    periodic_basis: tuple[Domain, ...]

    @property
    def empty(self) -> bool:
        return self.particular is None


def _endpoint_target(d: HeegaardDiagram, x: Generator, y: Generator) -> list[int]:
    b = [0] * (len(d.points) + len(d.basepoints))
    for p in x.points:
        b[d.point_index[p]] += 1
    for p in y.points:
        b[d.point_index[p]] -= 1
    return b


def periodic_domain_basis(d: HeegaardDiagram) -> tuple[Domain, ...]:
    return tuple(Domain(v) for v in _system(d).system.kernel)


def domain_space(d: HeegaardDiagram, x: Generator, y: Generator) -> DomainSpace:
    """All domains from ``x`` to ``y``: a particular one plus the periodic lattice."""
    sol = _system(d).system.solve(_endpoint_target(d, x, y))
    basis = periodic_domain_basis(d)
    if sol is None:
        return DomainSpace(None, basis)
    return DomainSpace(Domain(sol.particular), basis)


def connects(d: HeegaardDiagram, D: Domain, x: Generator, y: Generator) -> bool:
    """Whether ``D`` is a domain from ``x`` to ``y`` (endpoints and basepoints)."""
    d._check_domain(D)
    if any(D.coeffs[bi] for bi in d.basepoint_indices):
        return False
    want: dict[str, int] = {}
    for p in x.points:
        want[p] = want.get(p, 0) + 1
    for p in y.points:
        want[p] = want.get(p, 0) - 1
    want = {p: v for p, v in want.items() if v}
    return alpha_boundary_endpoints(d, D) == want


def _require_connects(d: HeegaardDiagram, D: Domain, x: Generator, y: Generator) -> None:
    if not connects(d, D, x, y):
        raise FloerError(f"domain {d.domain_dict(D)} does not connect {x} to {y}")


# ---------------------------------------------------------------------------
# Maslov index and J+.


def _quarter_data(d: HeegaardDiagram) -> tuple[tuple[int, ...], dict[str, tuple[int, ...]]]:
    """Per-region ``4 e`` and per-point quadrant owners, cached on the diagram."""
    cached = getattr(d, "_floer_quarters", None)
    if cached is None:
        weights = tuple(4 * r.chi - r.n_corners for r in d.regions)
        owners = {p.id: d.quadrant_regions(p.id) for p in d.points}
        cached = (weights, owners)
        d._floer_quarters = cached  # type: ignore[attr-defined]
    return cached


def _maslov_fraction(d: HeegaardDiagram, D: Domain, x: Generator, y: Generator) -> Fraction:
    """``e(D) + n_x(D) + n_y(D)`` in exact integer quarters."""
    d._check_domain(D)
    weights, owners = _quarter_data(d)
    c = D.coeffs
    total = sum(w * m for w, m in zip(weights, c) if m)
    for p in itertools.chain(x.points, y.points):
        total += sum(c[ri] for ri in owners[p])
    return Fraction(total, 4)


def maslov_index(d: HeegaardDiagram, D: Domain, x: Generator, y: Generator) -> int:
    _require_connects(d, D, x, y)
    mu = _maslov_fraction(d, D, x, y)
    if mu.denominator != 1:
        raise FloerError(f"non-integral Maslov index {mu}: malformed domain or diagram")
    return int(mu)


def j_plus(d: HeegaardDiagram, D: Domain, x: Generator, y: Generator) -> int:
    """``μ - 2e + |x| - |y|``, cross-checked against the index-one form when ``μ = 1``."""
    mu = maslov_index(d, D, x, y)
    e = euler_measure(d, D)
    val = mu - 2 * e + x.cycles - y.cycles
    if mu == 1:
        alt = 2 * (generator_point_measure(d, D, x.points) + generator_point_measure(d, D, y.points)) - 1
        alt += x.cycles - y.cycles
        if alt != val:
            raise FloerError(f"J+ formulas disagree: {val} vs {alt}")
    if val.denominator != 1:
        raise FloerError(f"non-integral J+ value {val}")
    return int(val)


# ---------------------------------------------------------------------------
# Admissibility.


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    witness: Domain | None = None  # nonzero nonnegative periodic domain
    certificate: tuple[int, ...] | None = None  # positive region weights vanishing on periodic domains

    def to_json(self, d: HeegaardDiagram) -> dict:
        out: dict = {"admissible": self.admissible}
        if self.witness is not None:
            out["witness"] = d.domain_dict(self.witness)
        if self.certificate is not None:
            out["certificate"] = {r.id: w for r, w in zip(d.regions, self.certificate)}
        return out


def _integral(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for a in v:
        den = den * a.denominator // math.gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    return tuple(a // g for a in ints) if g else tuple(ints)


def is_admissible(d: HeegaardDiagram) -> AdmissibilityResult:
    """Decide whether every nonzero periodic domain has coefficients of both signs.

    Either a nonnegative periodic domain is returned, or a strictly positive
    weight vector ``w`` with ``w . P = 0`` for every periodic ``P``; such a
    ``w`` rules out nonzero nonnegative periodic domains.
    """
    cached = getattr(d, "_floer_admissibility", None)
    if cached is None:
        cached = _decide_admissibility(d)
        d._floer_admissibility = cached  # type: ignore[attr-defined]
    return cached


def _decide_admissibility(d: HeegaardDiagram) -> AdmissibilityResult:
    basis = periodic_domain_basis(d)
    R = len(d.regions)
    if not basis:
        return AdmissibilityResult(True, certificate=(1,) * R)
    k = len(basis)
    # nonnegative combination with total mass one?
    A_ge = [[P.coeffs[r] for P in basis] for r in range(R)]
    A_eq = [[sum(P.coeffs) for P in basis]]
    res = linprog_exact([0] * k, A_ge, [0] * R, A_eq, [1])
    if res.status == "optimal":
        lam = res.x
        coeffs = [sum(l * P.coeffs[r] for l, P in zip(lam, basis)) for r in range(R)]
        return AdmissibilityResult(False, witness=Domain(_integral(coeffs)))
    # Stiemke alternative: weights >= 1 orthogonal to every periodic domain
    A_eq = [list(P.coeffs) for P in basis]
    res = linprog_exact([1] * R, [[int(i == j) for j in range(R)] for i in range(R)], [1] * R, A_eq, [0] * k, nonneg=True)
    if res.status != "optimal":  # pragma: no cover - excluded by the alternative theorem
        raise FloerError("admissibility LP returned no certificate")
    return AdmissibilityResult(True, certificate=_integral(res.x))


# ---------------------------------------------------------------------------
# Positive domain enumeration.


@dataclass(frozen=True)
class Enumeration:
    domains: tuple[Domain, ...]
    complete: bool
    capped: bool
    cap: int | None = None


def enumerate_positive_domains(
    d: HeegaardDiagram,
    x: Generator,
    y: Generator,
    index: int | None = None,
    coeff_cap: int | None = None,
    *,
    check_cap: bool = True,
) -> Enumeration:
    """All nonnegative domains from ``x`` to ``y`` (optionally of given Maslov index).

    On admissible diagrams the search needs no cap and is exhaustive.
    Otherwise it uses ``coeff_cap`` (default ``4 N``) and is flagged capped.
    With ``check_cap`` off, a capped search on an admissible diagram is not
    tested for completeness (it is reported incomplete).
    """
    space = domain_space(d, x, y)
    admissible = is_admissible(d).admissible
    capped = False
    if coeff_cap is None and not admissible:
        coeff_cap = 4 * d.n_curves
    if coeff_cap is not None:
        capped = True
    if space.empty:
        return Enumeration((), True, capped, coeff_cap)
    P0 = space.particular
    basis = space.periodic_basis
    R = len(d.regions)
    k = len(basis)
    # rows: P0[r] + sum lam_i P_i[r] >= 0 (and <= cap)
    rows = [[P.coeffs[r] for P in basis] for r in range(R)]
    A_ge = list(rows)
    b_ge = [-P0.coeffs[r] for r in range(R)]
    if coeff_cap is not None:
        A_ge += [[-v for v in row] for row in rows]
        b_ge += [P0.coeffs[r] - coeff_cap for r in range(R)]
    A_eq: list[list] = []
    b_eq: list = []
    if index is not None:
        A_eq.append([_maslov_fraction(d, P, x, y) for P in basis])
        b_eq.append(Fraction(index) - _maslov_fraction(d, P0, x, y))

    found: list[Domain] = []
    lam: list[int] = []

    def last_bounds() -> tuple[int, int] | None:
        # one free coefficient a*lam >= rest per row: an interval, no LP needed
        lo, hi = -math.inf, math.inf
        rows_ = [(row, b, False) for row, b in zip(A_ge, b_ge)] + [(row, b, True) for row, b in zip(A_eq, b_eq)]
        for row, b, equality in rows_:
            a = row[-1]
            rest = b - sum(v * l for v, l in zip(row, lam))
            if a == 0:
                if rest > 0 or (equality and rest != 0):
                    return None
                continue
            q = Fraction(rest) / a
            if a > 0 or equality:
                lo = max(lo, q)
            if a < 0 or equality:
                hi = min(hi, q)
        if lo > hi:
            return None
        if lo == -math.inf or hi == math.inf:
            raise FloerError("positive domains are unbounded: diagram is not admissible; give a coefficient cap")
        return math.ceil(lo), math.floor(hi)

    def bounds(i: int) -> tuple[int, int] | None:
        if i == k - 1:
            return last_bounds()
        eq_rows = A_eq + [[int(t == j) for t in range(k)] for j in range(i)]
        eq_rhs = b_eq + lam[:i]
        c = [int(t == i) for t in range(k)]
        lo = linprog_exact(c, A_ge, b_ge, eq_rows, eq_rhs)
        if lo.status == "infeasible":
            return None
        hi = linprog_exact([-v for v in c], A_ge, b_ge, eq_rows, eq_rhs)
        if lo.status == "unbounded" or hi.status == "unbounded":
            raise FloerError("positive domains are unbounded: diagram is not admissible; give a coefficient cap")
        return math.ceil(lo.value), math.floor(-hi.value)

    def rec(i: int) -> None:
        if i == k:
            coeffs = tuple(P0.coeffs[r] + sum(l * P.coeffs[r] for l, P in zip(lam, basis)) for r in range(R))
            D = Domain(coeffs)
            if not D.is_nonnegative() or (coeff_cap is not None and max(coeffs, default=0) > coeff_cap):
                return
            if index is not None and _maslov_fraction(d, D, x, y) != index:
                return
            found.append(D)
            return
        bd = bounds(i)
        if bd is None:
            return
        for v in range(bd[0], bd[1] + 1):
            lam.append(v)
            rec(i + 1)
            lam.pop()

    rec(0)
    found.sort(key=lambda D: (sum(D.coeffs), D.coeffs))
    complete = not capped
    if capped and admissible and check_cap:
        # the cap is harmless when no region can exceed it anyway
        complete = _cap_is_slack(d, P0, basis, A_eq, b_eq, coeff_cap)
    return Enumeration(tuple(found), complete, capped, coeff_cap)


def _cap_is_slack(d, P0, basis, A_eq, b_eq, cap) -> bool:
    R = len(d.regions)
    A_ge = [[P.coeffs[r] for P in basis] for r in range(R)]
    b_ge = [-P0.coeffs[r] for r in range(R)]
    for r in range(R):
        res = linprog_exact([-v for v in A_ge[r]], A_ge, b_ge, A_eq, b_eq)
        if res.status == "infeasible":
            return True
        if res.status == "unbounded" or P0.coeffs[r] - res.value > cap:
            return False
    return True


# ---------------------------------------------------------------------------
# Nice diagrams and the graded differential.


def is_nice(d: HeegaardDiagram) -> tuple[bool, tuple[str, ...]]:
    """Whether every non-basepoint region is a bigon or a square; offending region ids."""
    base = set(d.basepoint_indices)
    bad = tuple(
        r.id
        for i, r in enumerate(d.regions)
        if i not in base and not (r.chi == 1 and len(r.boundaries) == 1 and r.n_corners in (2, 4))
    )
    return not bad, bad


def _region_adjacency(d: HeegaardDiagram) -> list[set[int]]:
    cached = getattr(d, "_floer_adjacency", None)
    if cached is None:
        from .diagram import _adjacency

        cached = _adjacency(d, None)
        d._floer_adjacency = cached  # type: ignore[attr-defined]
    return cached


def empty_embedded_polygon(d: HeegaardDiagram, D: Domain, x: Generator, y: Generator) -> int | None:
    """Corner count (2 or 4) if ``D`` is an empty embedded bigon or square, else ``None``.

    The domain must have multiplicities in {0, 1}, its support must be a
    connected disk with only convex corners, and no point of ``x`` or ``y``
    may lie in its interior.
    """
    if any(c not in (0, 1) for c in D.coeffs) or not any(D.coeffs):
        return None
    support = {i for i, c in enumerate(D.coeffs) if c}
    convex = 0
    ends = set(x.points) | set(y.points)
    for p in d.points:
        q = [D.coeffs[ri] for ri in d.quadrant_regions(p.id)]
        k = sum(q)
        if k == 1:
            convex += 1
        elif k == 3:
            return None
        elif k == 2 and q[0] == q[2]:
            return None
        elif k == 4 and p.id in ends:
            return None
    adj = _region_adjacency(d)
    start = next(iter(support))
    seen = {start}
    stack = [start]
    while stack:
        r = stack.pop()
        for s in adj[r]:
            if s in support and s not in seen:
                seen.add(s)
                stack.append(s)
    if seen != support:
        return None
    chi = euler_measure(d, D) + Fraction(convex, 4)
    if chi != 1 or convex not in (2, 4):
        return None
    return convex


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str
    level: int
    domain: Mapping[str, int]
    count: int = 1

    def to_json(self) -> dict:
        return {"from": self.source, "to": self.target, "level": self.level, "domain": dict(self.domain), "count": self.count}


@dataclass(frozen=True)
class GradedDifferential:
    generators: tuple[Generator, ...]
    pieces: tuple[Matrix, ...]
    source: str  # "nice" or "asserted"
    arrows: tuple[Arrow, ...] = field(default=(), compare=False)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(g.label for g in self.generators)

    def index(self, g: Generator) -> int:
        return self.generators.index(g)

    def total(self) -> Matrix:
        n = len(self.generators)
        m = Matrix.zeros(n, n)
        for p in self.pieces:
            m = m + p
        return m

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces)

    def to_complex(self, contact: Generator) -> FilteredComplex:
        return FilteredComplex(len(self.generators), self.pieces, self.index(contact), self.labels)

    def to_json(self) -> dict:
        return {
            "generators": list(self.labels),
            "source": self.source,
            "matrices": {str(l): [[r, c, 1] for r, c in m.entries()] for l, m in enumerate(self.pieces)},
        }


def _graded(generators: Sequence[Generator], arrows: Sequence[Arrow], source: str) -> GradedDifferential:
    labels = [g.label for g in generators]
    parity: dict[tuple[str, str, int], int] = {}
    for a in arrows:
        key = (a.source, a.target, a.level)
        parity[key] = parity.get(key, 0) ^ (a.count & 1)
    fc = FilteredComplex.from_arrows(labels, [k for k, v in parity.items() if v], labels[0]) if labels else None
    pieces = fc.pieces if fc is not None else ()
    diff = GradedDifferential(tuple(generators), tuple(pieces), source, tuple(arrows))
    if fc is not None:
        ok, failures = check_graded_identity(fc)
        if not ok:
            l, col = failures[0]
            raise FloerError(f"graded differential identity fails at level {l} (column {labels[col]})")
    return diff


def nice_differential(d: HeegaardDiagram, generators: Sequence[Generator] | None = None) -> GradedDifferential:
    """Count empty embedded bigons and squares; each contributes to level ``J+/2``."""
    ok, bad = is_nice(d)
    if not ok:
        raise FloerError(f"diagram is not nice; offending regions: {', '.join(bad)}")
    gens = list(generators) if generators is not None else enumerate_generators(d)
    arrows = []
    for x in gens:
        for y in gens:
            # a bigon moves one coordinate, a square two
            if len(set(x.points) - set(y.points)) not in (1, 2):
                continue
            for D in enumerate_positive_domains(d, x, y, index=1, coeff_cap=1, check_cap=False).domains:
                if empty_embedded_polygon(d, D, x, y) is None:
                    continue
                jp = j_plus(d, D, x, y)
                if jp < 0 or jp % 2:
                    raise FloerError(f"J+ = {jp} for an empty polygon from {x} to {y}")
                arrows.append(Arrow(x.label, y.label, jp // 2, d.domain_dict(D)))
    return _graded(gens, arrows, "nice")


def asserted_differential(
    d: HeegaardDiagram, counts: Sequence[Mapping], generators: Sequence[Generator] | None = None
) -> GradedDifferential:
    """Differential from a counts list ``[{from, to, domain, count}]``, each entry re-validated."""
    gens = list(generators) if generators is not None else enumerate_generators(d)
    known = set(gens)
    arrows = []
    for entry in counts:
        try:
            x = parse_generator(d, entry["from"])
            y = parse_generator(d, entry["to"])
            D = d.domain(entry["domain"])
            count = int(entry.get("count", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise FloerError(f"malformed count entry {entry!r}: {exc}") from None
        if x not in known or y not in known:
            raise FloerError(f"count entry {x} -> {y} names a generator outside the complex")
        if D.is_zero() or not D.is_nonnegative():
            raise FloerError(f"asserted domain from {x} to {y} is not positive")
        mu = maslov_index(d, D, x, y)
        if mu != 1:
            raise FloerError(f"asserted domain from {x} to {y} has Maslov index {mu}")
        jp = j_plus(d, D, x, y)
        if jp < 0 or jp % 2:
            raise FloerError(f"asserted domain from {x} to {y} has J+ = {jp}")
        arrows.append(Arrow(x.label, y.label, jp // 2, d.domain_dict(D), count))
    return _graded(gens, arrows, "asserted")


def differential(
    d: HeegaardDiagram, counts: Sequence[Mapping] | None = None, generators: Sequence[Generator] | None = None
) -> GradedDifferential:
    if counts is None:
        return nice_differential(d, generators)
    return asserted_differential(d, counts, generators)


def load_counts(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, Mapping):
        data = data.get("counts", [])
    if not isinstance(data, list):
        raise FloerError("counts file must hold a list of entries")
    return data


def contact_class_vanishes(diff: GradedDifferential, contact: Generator) -> tuple[bool, list[Generator]]:
    """Whether the contact generator is a boundary of the total differential; witness chain."""
    target = 1 << diff.index(contact)
    sol = gf2.solve(diff.total(), target)
    if sol is None:
        return False, []
    return True, [diff.generators[i] for i in gf2.bits(sol)]
