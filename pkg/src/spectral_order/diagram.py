"""Combinatorial multipointed Heegaard diagrams.

A diagram lives on a closed oriented surface Σ.  It is described by

* ``n_curves`` α curves and as many β curves,
* intersection points, each on one α and one β curve, with a sign,
* the cyclic order of the points along every oriented curve,
* the regions (components of Σ minus the curves), each given by the cyclic
  list of its corners ``(point, quadrant)`` read counterclockwise, i.e. with
  the region on the left,
* the basepoint regions,
* optionally, the points of a distinguished (contact) generator.

Quadrant convention.  At a point ``p`` the four rays, in counterclockwise
order, are ``r0`` = α leaving ``p`` forwards, ``r1``, ``r2`` = α arriving
(α leaving backwards) and ``r3``.  For a positive point ``r1`` is β leaving
forwards; for a negative point ``r1`` is β leaving backwards.  Quadrant ``k``
is the sector from ``r_{k-1}`` to ``r_k``.  Walking a region's boundary with
the region on the left, a corner in quadrant ``k`` is entered along ``r_k``
and left along ``r_{k-1}``.  So corners in quadrants 1 and 3 start an
α-side, and corners in quadrants 2 and 4 end one.  For positive points,
quadrant 1 is bounded by the outgoing α and the outgoing β.

With this numbering ``(q2 + q4) - (q1 + q3)`` at ``p`` is the coefficient
of ``p`` in the boundary of the α-part of the boundary of a domain, for
either sign of ``p``.

A region is normally an embedded polygon.  A region with several boundary
components (an annulus, say) may be given by ``boundaries`` together with
its Euler characteristic ``chi``.  This is only needed for basepoint regions
produced by the open book construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

SCHEMA_VERSION = 1


class DiagramError(ValueError):
    """Raised for malformed diagram input or unknown ids."""


@dataclass(frozen=True)
class IntersectionPoint:
    id: str
    alpha: int
    beta: int
    sign: int = 1


@dataclass(frozen=True)
class Corner:
    point: str
    quadrant: int


@dataclass(frozen=True)
class Region:
    id: str
    boundaries: tuple[tuple[Corner, ...], ...]
    chi: int = 1

    @property
    def corners(self) -> tuple[Corner, ...]:
        return tuple(c for b in self.boundaries for c in b)

    @property
    def n_corners(self) -> int:
        return sum(len(b) for b in self.boundaries)

    @property
    def euler(self) -> Fraction:
        """Euler measure of the region with multiplicity one."""
        return Fraction(self.chi) - Fraction(self.n_corners, 4)


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    genus: int | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), "genus": self.genus}


# Side leaving a corner in quadrant k: (curve kind, direction relative to the
# curve orientation, assuming a positive point).  Negative points flip β.
_LEAVE = {1: ("a", 1), 2: ("b", 1), 3: ("a", -1), 4: ("b", -1)}


def _leave(q: int, sign: int) -> tuple[str, int]:
    kind, d = _LEAVE[q]
    if kind == "b":
        d *= sign
    return kind, d


def _arrival_quadrant(kind: str, direction: int, sign: int) -> int:
    """Quadrant of the next corner when arriving along ``kind`` moving ``direction``."""
    if kind == "a":
        return 2 if direction == 1 else 4
    # arriving forwards along β means coming in on the backward β ray
    backward_ray_quadrant = 3 if sign == 1 else 1
    forward_ray_quadrant = 1 if sign == 1 else 3
    return backward_ray_quadrant if direction == 1 else forward_ray_quadrant


@dataclass(frozen=True)
class Domain:
    """Integer multiplicities over the regions of a fixed diagram (by region index)."""

    coeffs: tuple[int, ...]

    def __add__(self, other: "Domain") -> "Domain":
        return Domain(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Domain") -> "Domain":
        return Domain(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, k: int) -> "Domain":
        return Domain(tuple(k * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for a in self.coeffs)


class HeegaardDiagram:
    """Immutable combinatorial Heegaard diagram.  Construct, then :func:`validate_diagram`."""

    def __init__(
        self,
        n_curves: int,
        points: Sequence[IntersectionPoint],
        alpha_orders: Sequence[Sequence[str]],
        beta_orders: Sequence[Sequence[str]],
        regions: Sequence[Region],
        basepoints: Iterable[str],
        name: str = "",
        contact: Iterable[str] = (),
    ):
        self.n_curves = n_curves
        self.points = tuple(points)
        self.alpha_orders = tuple(tuple(o) for o in alpha_orders)
        self.beta_orders = tuple(tuple(o) for o in beta_orders)
        self.regions = tuple(regions)
        self.basepoints = tuple(basepoints)
        self.name = name
        self.contact = tuple(contact)
        self.point_index = {p.id: i for i, p in enumerate(self.points)}
        self.region_index = {r.id: i for i, r in enumerate(self.regions)}
        self._quadrant_owner: dict[tuple[str, int], int] | None = None

    # -- lookup -------------------------------------------------------------
    def point(self, pid: str) -> IntersectionPoint:
        try:
            return self.points[self.point_index[pid]]
        except KeyError:
            raise DiagramError(f"unknown point id {pid!r}") from None

    def region(self, rid: str) -> Region:
        try:
            return self.regions[self.region_index[rid]]
        except KeyError:
            raise DiagramError(f"unknown region id {rid!r}") from None

    @property
    def basepoint_indices(self) -> tuple[int, ...]:
        return tuple(self.region_index[b] for b in self.basepoints)

    def quadrant_owner(self, pid: str, q: int) -> int:
        """Index of the region claiming quadrant ``q`` at ``pid``."""
        if self._quadrant_owner is None:
            owner = {}
            for ri, r in enumerate(self.regions):
                for c in r.corners:
                    owner.setdefault((c.point, c.quadrant), ri)
            self._quadrant_owner = owner
        self.point(pid)
        return self._quadrant_owner[(pid, q)]

    def quadrant_regions(self, pid: str) -> tuple[int, int, int, int]:
        return tuple(self.quadrant_owner(pid, q) for q in (1, 2, 3, 4))  # type: ignore[return-value]

    def domain(self, mult: Mapping[str, int] | None = None) -> Domain:
        """Domain from a ``region id -> multiplicity`` map (missing ids are 0)."""
        coeffs = [0] * len(self.regions)
        for rid, m in (mult or {}).items():
            if rid not in self.region_index:
                raise DiagramError(f"unknown region id {rid!r}")
            coeffs[self.region_index[rid]] += int(m)
        return Domain(tuple(coeffs))

    def domain_dict(self, D: Domain) -> dict[str, int]:
        return {self.regions[i].id: m for i, m in enumerate(D.coeffs) if m}

    def _check_domain(self, D: Domain) -> None:
        if len(D.coeffs) != len(self.regions):
            raise DiagramError("domain length does not match the number of regions")

    # -- curve segments -----------------------------------------------------
    def orders(self, kind: str) -> tuple[tuple[str, ...], ...]:
        return self.alpha_orders if kind == "a" else self.beta_orders

    def curve_of(self, pid: str, kind: str) -> int:
        p = self.point(pid)
        return p.alpha if kind == "a" else p.beta

    def step(self, pid: str, kind: str, direction: int) -> tuple[str, tuple[str, int, int]]:
        """Next point along a curve and the traversed segment ``(kind, curve, start position)``."""
        c = self.curve_of(pid, kind)
        order = self.orders(kind)[c]
        i = order.index(pid)
        n = len(order)
        j = (i + direction) % n
        seg_start = i if direction == 1 else j
        return order[j], (kind, c, seg_start)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        regions = []
        for r in self.regions:
            if len(r.boundaries) == 1 and r.chi == 1:
                regions.append({"id": r.id, "corners": [{"point": c.point, "quadrant": c.quadrant} for c in r.boundaries[0]]})
            else:
                regions.append(
                    {
                        "id": r.id,
                        "boundaries": [[{"point": c.point, "quadrant": c.quadrant} for c in b] for b in r.boundaries],
                        "chi": r.chi,
                    }
                )
        out = {
            "version": SCHEMA_VERSION,
            "n_curves": self.n_curves,
            "alpha_orientations": [list(o) for o in self.alpha_orders],
            "beta_orientations": [list(o) for o in self.beta_orders],
            "points": [{"id": p.id, "alpha": p.alpha, "beta": p.beta, "sign": p.sign} for p in self.points],
            "regions": regions,
            "basepoints": list(self.basepoints),
        }
        if self.contact:
            out["contact"] = list(self.contact)
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "HeegaardDiagram":
        try:
            n = int(data["n_curves"])
            points = [
                IntersectionPoint(str(p["id"]), int(p["alpha"]), int(p["beta"]), int(p.get("sign", 1)))
                for p in data["points"]
            ]
            regions = []
            for r in data["regions"]:
                if "boundaries" in r:
                    bds = tuple(tuple(_corner(c) for c in b) for b in r["boundaries"])
                    chi = int(r.get("chi", 2 - len(bds)))
                else:
                    bds = (tuple(_corner(c) for c in r["corners"]),)
                    chi = int(r.get("chi", 1))
                regions.append(Region(str(r["id"]), bds, chi))
            return cls(
                n,
                points,
                [[str(x) for x in o] for o in data["alpha_orientations"]],
                [[str(x) for x in o] for o in data["beta_orientations"]],
                regions,
                [str(b) for b in data.get("basepoints", [])],
                name=str(data.get("name", "")),
                contact=[str(p) for p in data.get("contact", [])],
            )
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram JSON: {exc!r}") from None


def _corner(c) -> Corner:
    if isinstance(c, Mapping):
        return Corner(str(c["point"]), int(c["quadrant"]))
    return Corner(str(c[0]), int(c[1]))


def load_diagram(path: str) -> HeegaardDiagram:
    with open(path) as fh:
        return HeegaardDiagram.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Validation.


def validate_diagram(d: HeegaardDiagram) -> ValidationReport:
    """Check every structural invariant; never raises on bad data."""
    v: list[str] = []
    N = d.n_curves
    if N < 1:
        v.append("n_curves must be at least 1")
    ids = [p.id for p in d.points]
    if len(set(ids)) != len(ids):
        v.append("duplicate point ids")
    for p in d.points:
        if not (0 <= p.alpha < N and 0 <= p.beta < N):
            v.append(f"point {p.id}: curve index out of range")
        if p.sign not in (1, -1):
            v.append(f"point {p.id}: sign must be +1 or -1")
    for kind, orders in (("alpha", d.alpha_orders), ("beta", d.beta_orders)):
        if len(orders) != N:
            v.append(f"{kind}_orientations must list {N} curves")
            continue
        for c, order in enumerate(orders):
            expected = sorted(p.id for p in d.points if (p.alpha if kind == "alpha" else p.beta) == c)
            if sorted(order) != expected:
                v.append(f"{kind} curve {c}: orientation list is not a permutation of its points")
            if not order:
                v.append(f"{kind} curve {c}: curve has no intersection points")
    rids = [r.id for r in d.regions]
    if len(set(rids)) != len(rids):
        v.append("duplicate region ids")
    if v:
        return ValidationReport(False, v)

    # quadrant claims
    claims: dict[tuple[str, int], list[str]] = {}
    for r in d.regions:
        for c in r.corners:
            if c.point not in d.point_index:
                v.append(f"region {r.id}: unknown point {c.point!r}")
                continue
            if c.quadrant not in (1, 2, 3, 4):
                v.append(f"region {r.id}: quadrant {c.quadrant} not in 1..4")
                continue
            claims.setdefault((c.point, c.quadrant), []).append(r.id)
    for p in d.points:
        for q in (1, 2, 3, 4):
            owners = claims.get((p.id, q), [])
            if not owners:
                v.append(f"point {p.id} quadrant {q}: unclaimed")
            elif len(owners) > 1:
                v.append(f"point {p.id} quadrant {q}: duplicate quadrant claimed by {owners}")
    if v:
        return ValidationReport(False, v)

    # boundary walks and segment usage
    used: dict[tuple[str, int, int, int], list[str]] = {}
    for r in d.regions:
        if not r.boundaries or any(len(b) == 0 for b in r.boundaries):
            v.append(f"region {r.id}: empty boundary component")
            continue
        for b in r.boundaries:
            if len(b) % 2:
                v.append(f"region {r.id}: odd number of corners")
            for i, c in enumerate(b):
                nxt = b[(i + 1) % len(b)]
                kind, direction = _leave(c.quadrant, d.point(c.point).sign)
                target, seg = d.step(c.point, kind, direction)
                want = _arrival_quadrant(kind, direction, d.point(target).sign)
                if nxt.point != target or nxt.quadrant != want:
                    v.append(
                        f"region {r.id}: side after corner ({c.point},{c.quadrant}) does not reach "
                        f"({nxt.point},{nxt.quadrant})"
                    )
                used.setdefault(seg + (direction,), []).append(r.id)
    for kind in ("a", "b"):
        for c, order in enumerate(d.orders(kind)):
            for s in range(len(order)):
                for direction in (1, -1):
                    n_use = len(used.get((kind, c, s, direction), []))
                    if n_use != 1:
                        name = "alpha" if kind == "a" else "beta"
                        v.append(f"{name} curve {c} segment {s}: bordered {n_use} times on one side")
    for r in d.regions:
        if r.id in d.basepoints:
            continue
        segs = [k[:3] for k, owners in used.items() if r.id in owners]
        if len(set(segs)) != len(segs):
            v.append(f"region {r.id}: not an embedded polygon (touches itself along an edge)")
        if r.chi != 1 or len(r.boundaries) != 1:
            v.append(f"region {r.id}: non-basepoint regions must be disks")

    # basepoints
    if not d.basepoints:
        v.append("no basepoint")
    if len(set(d.basepoints)) != len(d.basepoints):
        v.append("basepoint regions are not pairwise distinct")
    for b in d.basepoints:
        if b not in d.region_index:
            v.append(f"basepoint region {b!r} does not exist")
    if d.contact:
        unknown = [p for p in d.contact if p not in d.point_index]
        if unknown:
            v.append(f"contact points {unknown} do not exist")
        elif sorted(d.point(p).alpha for p in d.contact) != list(range(N)) or sorted(
            d.point(p).beta for p in d.contact
        ) != list(range(N)):
            v.append("contact points do not match α curves to β curves bijectively")
    if v:
        return ValidationReport(False, v)

    # Euler characteristic and genus
    chi = len(d.points) - 2 * len(d.points) + sum(r.chi for r in d.regions)
    genus = None
    if chi % 2 or chi > 2:
        v.append(f"Euler characteristic {chi} does not give an integer genus >= 0")
    else:
        genus = (2 - chi) // 2
    if _component_count(d, None) != 1:
        v.append("surface is not connected")
    # each component of Σ minus the α (resp. β) curves holds exactly one basepoint
    for kind, name in (("a", "alpha"), ("b", "beta")):
        comps = _components(d, kind)
        for comp in comps:
            nb = sum(1 for b in d.basepoints if d.region_index[b] in comp)
            if nb != 1:
                v.append(f"a component of Σ minus the {name} curves contains {nb} basepoints")
    if genus is not None and not v and genus != N - len(d.basepoints) + 1:
        v.append(f"genus {genus} is inconsistent with {N} curve pairs and {len(d.basepoints)} basepoints")
    return ValidationReport(not v, v, genus)


def _adjacency(d: HeegaardDiagram, cut_kind: str | None) -> list[set[int]]:
    """Region adjacency across segments of curves not in ``cut_kind``."""
    by_seg: dict[tuple[str, int, int], set[int]] = {}
    for ri, r in enumerate(d.regions):
        for b in r.boundaries:
            for c in b:
                kind, direction = _leave(c.quadrant, d.point(c.point).sign)
                _, seg = d.step(c.point, kind, direction)
                by_seg.setdefault(seg, set()).add(ri)
    adj = [set() for _ in d.regions]
    for seg, regs in by_seg.items():
        if seg[0] == cut_kind:
            continue
        for a in regs:
            adj[a] |= regs
    return adj


def _components(d: HeegaardDiagram, cut_kind: str | None) -> list[set[int]]:
    adj = _adjacency(d, cut_kind)
    seen: set[int] = set()
    comps = []
    for s in range(len(d.regions)):
        if s in seen:
            continue
        stack, comp = [s], {s}
        while stack:
            a = stack.pop()
            for b in adj[a]:
                if b not in comp:
                    comp.add(b)
                    stack.append(b)
        seen |= comp
        comps.append(comp)
    return comps


def _component_count(d: HeegaardDiagram, cut_kind: str | None) -> int:
    return len(_components(d, cut_kind))


def require_valid(d: HeegaardDiagram) -> ValidationReport:
    rep = validate_diagram(d)
    if not rep.ok:
        raise DiagramError("invalid diagram: " + "; ".join(rep.violations[:5]))
    return rep


# ---------------------------------------------------------------------------
# Measures.


def euler_measure(d: HeegaardDiagram, D: Domain) -> Fraction:
    d._check_domain(D)
    return sum((m * d.regions[i].euler for i, m in enumerate(D.coeffs) if m), Fraction(0))


def point_measure(d: HeegaardDiagram, D: Domain, p: str) -> Fraction:
    d._check_domain(D)
    return Fraction(sum(D.coeffs[ri] for ri in d.quadrant_regions(p)), 4)


def generator_point_measure(d: HeegaardDiagram, D: Domain, x: Iterable[str]) -> Fraction:
    return sum((point_measure(d, D, p) for p in x), Fraction(0))


def alpha_boundary_endpoints(d: HeegaardDiagram, D: Domain) -> dict[str, int]:
    """Map point id -> (q2 + q4) - (q1 + q3); zero entries omitted."""
    d._check_domain(D)
    out = {}
    for p in d.points:
        q1, q2, q3, q4 = (D.coeffs[ri] for ri in d.quadrant_regions(p.id))
        w = (q2 + q4) - (q1 + q3)
        if w:
            out[p.id] = w
    return out


def beta_boundary_endpoints(d: HeegaardDiagram, D: Domain) -> dict[str, int]:
    """Boundary of the β-part of the boundary; the negative of the α version."""
    return {p: -w for p, w in alpha_boundary_endpoints(d, D).items()}


def genus_of_sigma(d: HeegaardDiagram) -> int:
    rep = validate_diagram(d)
    if rep.genus is None:
        raise DiagramError("invalid diagram: " + "; ".join(rep.violations[:5]))
    return rep.genus


# ---------------------------------------------------------------------------
# Finger moves.

_COMPASS = {(1, 1): "NE", (-1, 1): "NW", (-1, -1): "SW", (1, -1): "SE"}


def _quadrants_at(alpha_fwd: tuple[int, int], beta_fwd: tuple[int, int]) -> tuple[int, dict[str, int]]:
    """Sign and compass-quadrant -> quadrant number for axis-aligned curve directions."""
    cross = alpha_fwd[0] * beta_fwd[1] - alpha_fwd[1] * beta_fwd[0]
    sign = 1 if cross > 0 else -1
    r0 = alpha_fwd
    r1 = beta_fwd if sign == 1 else (-beta_fwd[0], -beta_fwd[1])
    rays = [r0, r1, (-r0[0], -r0[1]), (-r1[0], -r1[1])]
    out = {}
    for k in range(1, 5):
        u, v = rays[k - 1], rays[k % 4]
        out[_COMPASS[(u[0] + v[0], u[1] + v[1])]] = k
    return sign, out


def _edge_after(d: HeegaardDiagram, c: Corner) -> tuple[str, int, tuple[str, int, int]]:
    """Curve kind, direction and segment leaving corner ``c`` along its region boundary."""
    kind, direction = _leave(c.quadrant, d.point(c.point).sign)
    _, seg = d.step(c.point, kind, direction)
    return kind, direction, seg


def finger_move(
    d: HeegaardDiagram,
    region: str,
    beta_corner: int,
    alpha_corner: int,
    names: Sequence[str] | None = None,
) -> HeegaardDiagram:
    """Push a finger of a β edge of a disk region across one of its α edges.

    ``beta_corner`` and ``alpha_corner`` index corners of ``region``; the
    edges leaving them (along the boundary, region on the left) must be a β
    and an α edge.  The finger creates two intersection points and a bigon
    just beyond the α edge.  The region splits in two; the part after the
    α edge keeps the id and any basepoint.  ``names`` gives
    ``(point1, point2, new region, bigon)`` ids.
    """
    R = d.region(region)
    if R.chi != 1 or len(R.boundaries) != 1:
        raise DiagramError("finger moves need a disk region")
    cyc = list(R.boundaries[0])
    n = len(cyc)
    i, j = beta_corner % n, alpha_corner % n
    kb, db, seg_b = _edge_after(d, cyc[i])
    ka, da, seg_a = _edge_after(d, cyc[j])
    if kb != "b" or ka != "a":
        raise DiagramError("corner choices must start a β edge and an α edge")
    k = len(d.points)
    f1, f2, r_new, r_tip = names or (f"f{k + 1}", f"f{k + 2}", f"{region}'", f"{region}^")
    taken = set(d.point_index) | set(d.region_index)
    if len({f1, f2, r_new, r_tip}) != 4 or {f1, f2, r_new, r_tip} & taken:
        raise DiagramError("finger move names collide with existing ids")

    # local model: β edge runs east along the bottom, α edge runs west along the top
    a_fwd = (-1, 0) if da == 1 else (1, 0)
    up, down = (0, 1), (0, -1)
    s1, q1 = _quadrants_at(a_fwd, up if db == 1 else down)
    s2, q2 = _quadrants_at(a_fwd, down if db == 1 else up)
    alpha = d.point(cyc[j].point).alpha
    beta = d.point(cyc[i].point).beta
    points = list(d.points) + [IntersectionPoint(f1, alpha, beta, s1), IntersectionPoint(f2, alpha, beta, s2)]

    def insert(orders, c: int, pos: int, seq: list[str]):
        out = [list(o) for o in orders]
        out[c][pos + 1:pos + 1] = seq
        return out

    # along the region's boundary the α edge meets f2 then f1; the β edge meets f1 then f2
    alpha_orders = insert(d.alpha_orders, alpha, seg_a[2], [f2, f1] if da == 1 else [f1, f2])
    beta_orders = insert(d.beta_orders, beta, seg_b[2], [f1, f2] if db == 1 else [f2, f1])

    def find_opposite(kind: str, direction: int, seg) -> tuple[int, int, int]:
        for ri, reg in enumerate(d.regions):
            for bi, b in enumerate(reg.boundaries):
                for ci, c in enumerate(b):
                    kk, dd, ss = _edge_after(d, c)
                    if kk == kind and dd == -direction and ss == seg:
                        return ri, bi, ci
        raise DiagramError("edge has no region on its other side")

    s_ri, s_bi, s_ci = find_opposite("b", db, seg_b)
    t_ri, t_bi, t_ci = find_opposite("a", da, seg_a)
    me = d.region_index[region]
    if me in (s_ri, t_ri) or s_ri == t_ri:
        raise DiagramError("finger move needs distinct regions on the three sides")

    def spliced(reg: Region, bi: int, ci: int, new: list[Corner]) -> Region:
        bds = [list(b) for b in reg.boundaries]
        bds[bi][ci + 1:ci + 1] = new
        return Region(reg.id, tuple(tuple(b) for b in bds), reg.chi)

    left = cyc[j + 1:] + cyc[: i + 1] if j > i else cyc[j + 1: i + 1]
    right = cyc[i + 1: j + 1] if j > i else cyc[i + 1:] + cyc[: j + 1]
    regions = []
    for ri, reg in enumerate(d.regions):
        if ri == me:
            regions.append(Region(region, (tuple(left) + (Corner(f1, q1["SW"]),),), 1))
            regions.append(Region(r_new, (tuple(right) + (Corner(f2, q2["SE"]),),), 1))
        elif ri == s_ri:
            regions.append(spliced(reg, s_bi, s_ci, [Corner(f2, q2["SW"]), Corner(f1, q1["SE"])]))
        elif ri == t_ri:
            regions.append(spliced(reg, t_bi, t_ci, [Corner(f1, q1["NW"]), Corner(f2, q2["NE"])]))
        else:
            regions.append(reg)
    regions.append(Region(r_tip, ((Corner(f1, q1["NE"]), Corner(f2, q2["NW"])),), 1))
    out = HeegaardDiagram(d.n_curves, points, alpha_orders, beta_orders, regions, d.basepoints, d.name, d.contact)
    require_valid(out)
    return out


def relabel(
    d: HeegaardDiagram,
    points: Mapping[str, str] | None = None,
    regions: Mapping[str, str] | None = None,
    name: str | None = None,
) -> HeegaardDiagram:
    """Copy of ``d`` with point and region ids renamed (unlisted ids are kept)."""
    pm = dict(points or {})
    rm = dict(regions or {})
    p_ids = [pm.get(p.id, p.id) for p in d.points]
    r_ids = [rm.get(r.id, r.id) for r in d.regions]
    if len(set(p_ids)) != len(p_ids) or len(set(r_ids)) != len(r_ids):
        raise DiagramError("relabelling makes ids collide")
    unknown = (set(pm) - set(d.point_index)) | (set(rm) - set(d.region_index))
    if unknown:
        raise DiagramError(f"unknown ids in relabelling: {sorted(unknown)}")

    def corner(c: Corner) -> Corner:
        return Corner(pm.get(c.point, c.point), c.quadrant)

    return HeegaardDiagram(
        d.n_curves,
        [IntersectionPoint(pm.get(p.id, p.id), p.alpha, p.beta, p.sign) for p in d.points],
        [[pm.get(x, x) for x in o] for o in d.alpha_orders],
        [[pm.get(x, x) for x in o] for o in d.beta_orders],
        [Region(rm.get(r.id, r.id), tuple(tuple(corner(c) for c in b) for b in r.boundaries), r.chi) for r in d.regions],
        [rm.get(b, b) for b in d.basepoints],
        d.name if name is None else name,
        [pm.get(p, p) for p in d.contact],
    )
