"""Surfaces with a cut system, normal paths, and Dehn twists.

A page ``S`` is stored as the polygons obtained by cutting along arcs
``a_0 .. a_{N-1}``.  Every polygon is a counterclockwise cyclic list of arc
sides ``(j, 'L')`` or ``(j, 'R')``.  Between any two consecutive arc sides
there is a boundary side (a segment of ``∂S``).  The side ``(j, 'L')``
belongs to the polygon lying to the left of ``a_j``, which is oriented from
its endpoint ``e0`` to ``e1``.  Read counterclockwise, ``(j, 'L')`` runs
from ``e0`` to ``e1`` and ``(j, 'R')`` runs from ``e1`` to ``e0``.
A polygon with no arc sides is a disk bounded by one boundary circle.

Positions on the boundary of a polygon with ``n`` arc sides are numbered
``0 .. 2n-1``.  Arc side ``k`` sits at position ``2k`` and the boundary side
following it at ``2k+1``.

A path is recorded by its crossings with the arcs, as ``(j, d)`` pairs.
``d = +1`` means crossing ``a_j`` from its right side to its left side.
An arc path also records the boundary sides it starts and ends on.  Each
boundary side is named by the arc side it follows.  Since every polygon is
a disk, paths up to homotopy are reduced words.  For embedded curves,
homotopy agrees with isotopy.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

Side = tuple[int, str]
Crossing = tuple[int, int]


class SurfaceError(ValueError):
    """Raised for inconsistent surfaces or paths."""


@dataclass(frozen=True)
class Surface:
    n_arcs: int
    polygons: tuple[tuple[Side, ...], ...]

    def __post_init__(self) -> None:
        seen: dict[Side, tuple[int, int]] = {}
        for pi, poly in enumerate(self.polygons):
            for k, side in enumerate(poly):
                j, x = side
                if not (0 <= j < self.n_arcs) or x not in ("L", "R"):
                    raise SurfaceError(f"bad side {side!r}")
                if side in seen:
                    raise SurfaceError(f"side {side!r} appears twice")
                seen[side] = (pi, k)
        if len(seen) != 2 * self.n_arcs:
            raise SurfaceError("every arc needs exactly one L side and one R side")
        object.__setattr__(self, "_loc", seen)
        object.__setattr__(self, "_bd", _boundary_components(self))

    @classmethod
    def from_lists(cls, n_arcs: int, polygons: Iterable[Iterable[Sequence]]) -> "Surface":
        return cls(n_arcs, tuple(tuple((int(s[0]), str(s[1])) for s in poly) for poly in polygons))

    def to_json(self) -> dict:
        return {"n_arcs": self.n_arcs, "polygons": [[[j, x] for j, x in poly] for poly in self.polygons]}

    # -- combinatorics ------------------------------------------------------
    def loc(self, side: Side) -> tuple[int, int]:
        """``(polygon index, side index)`` of an arc side."""
        try:
            return self._loc[side]  # type: ignore[attr-defined]
        except KeyError:
            raise SurfaceError(f"unknown side {side!r}") from None

    def n_sides(self, poly: int) -> int:
        return len(self.polygons[poly])

    @property
    def euler_characteristic(self) -> int:
        return len(self.polygons) - self.n_arcs

    @property
    def boundary_components(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        """Arc endpoints ``('e0'|'e1', j)`` along each boundary circle, in boundary order.

        Circles without arc endpoints (sideless polygons) appear as empty tuples.
        """
        return self._bd  # type: ignore[attr-defined]

    @property
    def boundary_count(self) -> int:
        return len(self.boundary_components)

    @property
    def genus(self) -> int:
        twice = 2 - self.boundary_count - self.euler_characteristic
        if twice % 2 or twice < 0:
            raise SurfaceError("polygon gluing does not give an orientable surface")
        return twice // 2

    def boundary_of_endpoint(self, end: tuple[str, int]) -> int:
        for bi, comp in enumerate(self.boundary_components):
            if end in comp:
                return bi
        raise SurfaceError(f"unknown endpoint {end!r}")

    def arc_boundaries(self, j: int) -> tuple[int, int]:
        return self.boundary_of_endpoint(("e0", j)), self.boundary_of_endpoint(("e1", j))

    def arc_isotopy_classes(self) -> tuple[list[list[int]], list[int]]:
        """Classes of parallel arcs (via rectangle polygons) and boundary-parallel arcs."""
        parent = list(range(self.n_arcs))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        trivial = []
        for poly in self.polygons:
            if len(poly) == 2 and poly[0][0] != poly[1][0]:
                parent[find(poly[0][0])] = find(poly[1][0])
            if len(poly) == 1:
                trivial.append(poly[0][0])
        classes: dict[int, list[int]] = {}
        for j in range(self.n_arcs):
            classes.setdefault(find(j), []).append(j)
        return sorted(classes.values()), sorted(trivial)

    def is_complete(self) -> bool:
        """Maximal family of disjoint, pairwise non-isotopic essential arcs."""
        return self.n_arcs > 0 and all(len(p) == 3 for p in self.polygons)

    def cut_polygon_count_basis(self) -> bool:
        """True when some subfamily of arcs cuts ``S`` into a single disk."""
        # Arcs whose two sides lie in different polygons can be dropped
        # (merging polygons) until a single polygon is left; this is possible
        # exactly when the dual graph is connected.
        parent = list(range(len(self.polygons)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for j in range(self.n_arcs):
            a, b = find(self.loc((j, "L"))[0]), find(self.loc((j, "R"))[0])
            parent[a] = b
        return len({find(i) for i in range(len(self.polygons))}) == 1

    # -- geometry of sides ----------------------------------------------------
    def boundary_side_endpoints(self, after: Side) -> tuple[tuple[str, int], tuple[str, int]]:
        """Start and end arc endpoints of the boundary side following ``after``."""
        pi, k = self.loc(after)
        poly = self.polygons[pi]
        nxt = poly[(k + 1) % len(poly)]
        start = ("e1", after[0]) if after[1] == "L" else ("e0", after[0])
        end = ("e0", nxt[0]) if nxt[1] == "L" else ("e1", nxt[0])
        return start, end


def _boundary_components(s: Surface) -> tuple[tuple[tuple[str, int], ...], ...]:
    succ: dict[tuple[str, int], tuple[str, int]] = {}
    for poly in s.polygons:
        for k, side in enumerate(poly):
            nxt = poly[(k + 1) % len(poly)]
            start = ("e1", side[0]) if side[1] == "L" else ("e0", side[0])
            end = ("e0", nxt[0]) if nxt[1] == "L" else ("e1", nxt[0])
            succ[start] = end
    comps = []
    seen = set()
    for j in range(s.n_arcs):
        for e in (("e0", j), ("e1", j)):
            if e in seen:
                continue
            comp = [e]
            seen.add(e)
            cur = succ[e]
            while cur != e:
                comp.append(cur)
                seen.add(cur)
                cur = succ[cur]
            comps.append(tuple(comp))
    comps.extend(() for poly in s.polygons if not poly)
    return tuple(comps)


# ---------------------------------------------------------------------------
# Paths.


@dataclass(frozen=True)
class NormalPath:
    crossings: tuple[Crossing, ...]
    closed: bool = False
    start: Side | None = None
    end: Side | None = None

    @classmethod
    def arc(cls, crossings: Iterable[Sequence[int]], start: Sequence, end: Sequence) -> "NormalPath":
        return cls(
            tuple((int(j), int(d)) for j, d in crossings),
            False,
            (int(start[0]), str(start[1])),
            (int(end[0]), str(end[1])),
        )

    @classmethod
    def loop(cls, crossings: Iterable[Sequence[int]]) -> "NormalPath":
        return cls(tuple((int(j), int(d)) for j, d in crossings), True)

    def reversed(self) -> "NormalPath":
        return NormalPath(tuple((j, -d) for j, d in reversed(self.crossings)), self.closed, self.end, self.start)

    def __len__(self) -> int:
        return len(self.crossings)

    def to_json(self) -> dict:
        out: dict = {"crossings": [[j, d] for j, d in self.crossings], "closed": self.closed}
        if not self.closed:
            out["start"] = list(self.start)  # type: ignore[arg-type]
            out["end"] = list(self.end)  # type: ignore[arg-type]
        return out

    @classmethod
    def from_json(cls, data) -> "NormalPath":
        if isinstance(data, Sequence) and not isinstance(data, str):
            return cls.loop(data)
        if data.get("closed", "start" not in data):
            return cls.loop(data["crossings"])
        return cls.arc(data["crossings"], data["start"], data["end"])


def pushoff(j: int) -> NormalPath:
    """The arc ``b_j``: ``a_j`` with endpoints pushed along ``∂S``, crossing ``a_j`` once positively."""
    return NormalPath(((j, 1),), False, (j, "R"), (j, "L"))


def exit_side(c: Crossing) -> Side:
    return (c[0], "R" if c[1] == 1 else "L")


def entry_side(c: Crossing) -> Side:
    return (c[0], "L" if c[1] == 1 else "R")


@dataclass(frozen=True)
class Segment:
    """Piece of a path inside one polygon, from boundary position ``a`` to ``b``."""

    poly: int
    a: int
    b: int


def segments(s: Surface, p: NormalPath) -> list[Segment]:
    """Polygon pieces of ``p``; piece ``i`` comes just before crossing ``i``.

    Arcs have ``len(p) + 1`` pieces, closed curves ``len(p)``.
    Raises :class:`SurfaceError` when consecutive crossings do not fit.
    """
    cr = p.crossings
    m = len(cr)
    out = []
    if p.closed:
        if m == 0:
            raise SurfaceError("closed curve without crossings is contractible")
        for i in range(m):
            prev = cr[i - 1]
            pa, ka = s.loc(entry_side(prev))
            pb, kb = s.loc(exit_side(cr[i]))
            if pa != pb:
                raise SurfaceError(f"crossings {prev} and {cr[i]} do not share a polygon")
            out.append(Segment(pa, 2 * ka, 2 * kb))
        return out
    if p.start is None or p.end is None:
        raise SurfaceError("arc path needs start and end boundary sides")
    ps, ks = s.loc(p.start)
    cur = (ps, 2 * ks + 1)
    for i in range(m):
        pb, kb = s.loc(exit_side(cr[i]))
        if pb != cur[0]:
            raise SurfaceError(f"crossing {cr[i]} does not leave polygon {cur[0]}")
        out.append(Segment(cur[0], cur[1], 2 * kb))
        pa, ka = s.loc(entry_side(cr[i]))
        cur = (pa, 2 * ka)
    pe, ke = s.loc(p.end)
    if pe != cur[0]:
        raise SurfaceError("end boundary side is not in the final polygon")
    out.append(Segment(cur[0], cur[1], 2 * ke + 1))
    return out


def check_path(s: Surface, p: NormalPath) -> None:
    segments(s, p)


def is_reduced(p: NormalPath) -> bool:
    cr = p.crossings
    m = len(cr)
    pairs = range(m) if p.closed else range(m - 1)
    for i in pairs:
        a, b = cr[i], cr[(i + 1) % m]
        if a[0] == b[0] and a[1] == -b[1] and (m > 1 or not p.closed):
            return False
    return True


def is_proper_power(p: NormalPath) -> bool:
    """Whether a closed word is ``w^k`` for some ``k >= 2`` (such curves are never simple)."""
    cr = p.crossings
    m = len(cr)
    return any(m % k == 0 and cr == cr[k:] + cr[:k] for k in range(1, m) if k < m)


def reduce_path(s: Surface | None, p: NormalPath) -> NormalPath:
    """Cancel backtracking pairs ``(j, d), (j, -d)`` until none remain."""
    if s is not None:
        check_path(s, p)
    stack: list[Crossing] = []
    for c in p.crossings:
        if stack and stack[-1][0] == c[0] and stack[-1][1] == -c[1]:
            stack.pop()
        else:
            stack.append(c)
    if p.closed:
        lo, hi = 0, len(stack)
        while hi - lo >= 2 and stack[lo][0] == stack[hi - 1][0] and stack[lo][1] == -stack[hi - 1][1]:
            lo += 1
            hi -= 1
        stack = stack[lo:hi]
        if stack:
            stack = min(stack[k:] + stack[:k] for k in range(len(stack)))
    out = NormalPath(tuple(stack), p.closed, p.start, p.end)
    if s is not None and not (p.closed and not stack):
        check_path(s, out)
    return out


# ---------------------------------------------------------------------------
# Relative position of strands.


class _Strand:
    """A path with its pieces, able to walk from a crossing in either direction."""

    def __init__(self, s: Surface, p: NormalPath):
        self.p = p
        self.segs = segments(s, p)
        self.m = len(p.crossings)

    def seg(self, i: int) -> Segment | None:
        if self.p.closed:
            return self.segs[i % self.m]
        return self.segs[i] if 0 <= i < len(self.segs) else None


def _walk(s: Surface, A: _Strand, i: int, B: _Strand, r: int, forward: bool, limit: int) -> tuple[int, int]:
    """Follow two strands from shared crossings ``i`` and ``r`` until they part.

    Returns ``(left, shared)``: ``left`` is +1 when A ends up on the left of B
    (relative to the direction of travel of A), -1 for the right, and 0 when
    the strands never part (or end on the same boundary side).  ``shared``
    counts further shared crossings in that direction.
    """
    for step in range(limit):
        if forward:
            sa, sb = A.seg(i + 1 + step), B.seg(r + 1 + step)
        else:
            sa, sb = A.seg(i - step), B.seg(r - step)
        if sa is None or sb is None:
            return 0, step
        here, ea, eb = (sa.a, sa.b, sb.b) if forward else (sa.b, sa.a, sb.a)
        if ea != eb:
            n2 = 2 * s.n_sides(sa.poly)
            da, db = (ea - here) % n2, (eb - here) % n2
            # Entering through a side the traveller's left is clockwise along
            # it; leaving through a side it is counterclockwise.
            if forward:
                return (1 if da > db else -1), step
            return (1 if da < db else -1), step
        if ea % 2 == 1:
            return 0, step
    return 0, limit


class Arrangement:
    """Positions of several paths relative to each other on a fixed surface.

    Two strands that run side by side and swap sides somewhere along the
    shared stretch cross exactly once there.  The crossing is put at one end
    of the stretch, chosen by a rule that does not depend on argument order.
    So every pair of strands is compared consistently along the stretch.
    """

    def __init__(self, s: Surface, paths: Sequence[NormalPath]):
        self.s = s
        self.paths = list(paths)
        self.strands = [_Strand(s, p) for p in paths]
        self.rev = [_Strand(s, p.reversed()) for p in paths]
        self.limit = 2 * sum(len(p) for p in paths) + 4

    def _native(self, k: int, reversed_: bool, t: int) -> int:
        m = len(self.paths[k])
        idx = m - 1 - t if reversed_ else t
        return idx % m if self.paths[k].closed else idx

    def compare_on_arc(self, a: tuple[int, int], b: tuple[int, int]) -> int:
        """Order of two crossings of the same arc along it, from ``e0`` to ``e1``.

        ``a`` and ``b`` are ``(path index, crossing index)``.  Returns -1 when
        ``a`` is nearer ``e0``, +1 when farther, 0 when the strands coincide.
        """
        if a == b:
            return 0
        pa, ia = a
        pb, ib = b
        ca = self.paths[pa].crossings[ia]
        cb = self.paths[pb].crossings[ib]
        if ca[0] != cb[0]:
            raise SurfaceError("crossings of different arcs are not comparable")
        A = self.strands[pa]
        flip = ca[1] != cb[1]
        B, rb = (self.rev[pb], len(self.paths[pb]) - 1 - ib) if flip else (self.strands[pb], ib)
        back, nb = _walk(self.s, A, ia, B, rb, False, self.limit)
        fwd, nf = _walk(self.s, A, ia, B, rb, True, self.limit)
        if back == 0 or fwd == 0 or back == fwd:
            left = back or fwd
        else:
            ka = (pa, min(self._native(pa, False, ia + t) for t in range(-nb, nf + 1)))
            kb = (pb, min(self._native(pb, flip, rb + t) for t in range(-nb, nf + 1)))
            # The crossing sits at the forward end of the stretch, forward
            # meaning along the path of the smaller key.
            if ka < kb or not flip:
                left = back
            else:
                left = fwd
        # Travelling right-to-left across a_j, the traveller's left points to e0.
        return -left if ca[1] == 1 else left

    def ccw_on_side(self, side: Side, a: tuple[int, int], b: tuple[int, int]) -> int:
        """Order of two crossings along ``side`` read counterclockwise in its polygon."""
        c = self.compare_on_arc(a, b)
        return c if side[1] == "L" else -c


# ---------------------------------------------------------------------------
# Intersections between two paths.


@dataclass(frozen=True)
class Intersection:
    p_seg: int
    q_seg: int
    q_left_to_right: bool  # q crosses p from p's left to p's right


def _point_of(s: Surface, strand: _Strand, k: int, i: int, which: str):
    """Boundary point of piece ``i`` of path ``k``: ``(position, crossing ref or None)``."""
    seg = strand.seg(i)
    m = strand.m
    if which == "a":
        if seg.a % 2 == 1:
            return (seg.a, None)
        return (seg.a, (k, (i - 1) % m if strand.p.closed else i - 1))
    if seg.b % 2 == 1:
        return (seg.b, None)
    return (seg.b, (k, i % m if strand.p.closed else i))


def _ccw_cmp(arr: Arrangement, poly: int, x, y) -> int:
    if x[0] != y[0]:
        return -1 if x[0] < y[0] else 1
    if x[1] is None or y[1] is None:
        return 0  # two path ends on one boundary side: treated as coincident
    side = arr.s.polygons[poly][x[0] // 2]
    return arr.ccw_on_side(side, x[1], y[1])


def intersections(s: Surface, p: NormalPath, q: NormalPath, arr: Arrangement | None = None,
                  kp: int = 0, kq: int = 1) -> list[Intersection]:
    """Transverse intersections of ``p`` and ``q`` in minimal position, ordered along ``p``."""
    if arr is None:
        arr = Arrangement(s, [p, q])
        kp, kq = 0, 1
    P, Q = arr.strands[kp], arr.strands[kq]
    by_poly: dict[int, list[int]] = {}
    for r, seg in enumerate(Q.segs):
        by_poly.setdefault(seg.poly, []).append(r)
    out: list[Intersection] = []
    for i, seg in enumerate(P.segs):
        a = _point_of(s, P, kp, i, "a")
        b = _point_of(s, P, kp, i, "b")
        found = []
        for r in by_poly.get(seg.poly, []):
            if kp == kq and r == i:
                continue
            c = _point_of(s, Q, kq, r, "a")
            d = _point_of(s, Q, kq, r, "b")
            cmp = functools.partial(_ccw_cmp, arr, seg.poly)
            if any(cmp(u, v) == 0 for u in (a, b) for v in (c, d)):
                continue  # coincident strands
            c_in = _strictly_between(cmp, a, c, b)
            d_in = _strictly_between(cmp, a, d, b)
            if c_in != d_in:
                inner = d if d_in else c
                found.append((inner, r, d_in))
        # order along p: right-side endpoints nearest to a come first
        found.sort(key=functools.cmp_to_key(lambda u, v: _from_start_cmp(arr, seg.poly, a, u[0], v[0])))
        out.extend(Intersection(i, r, right) for _, r, right in found)
    return out


def _strictly_between(cmp, a, x, b) -> bool:
    """Whether ``x`` lies on the open counterclockwise arc from ``a`` to ``b``."""
    if cmp(a, b) < 0:
        return cmp(a, x) < 0 and cmp(x, b) < 0
    return cmp(a, x) < 0 or cmp(x, b) < 0


def _from_start_cmp(arr: Arrangement, poly: int, a, u, v) -> int:
    cmp = functools.partial(_ccw_cmp, arr, poly)
    au, av = cmp(a, u) < 0, cmp(a, v) < 0
    if au != av:
        return -1 if au else 1
    return cmp(u, v)


def intersection_number(s: Surface, p: NormalPath, q: NormalPath) -> int:
    p, q = reduce_path(s, p), reduce_path(s, q)
    if (p.closed and not p.crossings) or (q.closed and not q.crossings):
        return 0
    return len(intersections(s, p, q))


def self_intersections(s: Surface, p: NormalPath) -> int:
    """Double points of ``p`` in minimal position (0 for embedded paths)."""
    arr = Arrangement(s, [p])
    return len(intersections(s, p, p, arr, 0, 0)) // 2


# ---------------------------------------------------------------------------
# Dehn twists.


def apply_dehn_twist(s: Surface, c: NormalPath, p: NormalPath, sign: int) -> NormalPath:
    """Image of ``p`` under the Dehn twist about the closed curve ``c``.

    ``sign = +1`` is the right-handed twist: a path reaching ``c`` turns right,
    runs once around ``c`` and carries on.
    """
    if sign not in (1, -1):
        raise SurfaceError("twist sign must be +1 or -1")
    if not c.closed:
        raise SurfaceError("twist curve must be closed")
    if not is_reduced(c) or not is_reduced(p):
        raise SurfaceError("twist inputs must be reduced")
    check_path(s, c)
    check_path(s, p)
    if is_proper_power(c):
        raise SurfaceError("twist curve is a multiple of another curve")
    if not c.crossings:
        return p
    m = len(c)
    hits = intersections(s, p, c)
    inserts: dict[int, list[list[Crossing]]] = {}
    for h in hits:
        forward = h.q_left_to_right if sign == 1 else not h.q_left_to_right
        r = h.q_seg
        if forward:
            loop = [c.crossings[(r + t) % m] for t in range(m)]
        else:
            loop = [(c.crossings[(r - 1 - t) % m][0], -c.crossings[(r - 1 - t) % m][1]) for t in range(m)]
        inserts.setdefault(h.p_seg, []).append(loop)
    word: list[Crossing] = []
    n_seg = len(p) if p.closed else len(p) + 1
    for i in range(n_seg):
        for loop in inserts.get(i, []):
            word.extend(loop)
        if i < len(p):
            word.append(p.crossings[i])
    return reduce_path(s, NormalPath(tuple(word), p.closed, p.start, p.end))


def apply_twist_word(s: Surface, twists: Sequence[tuple[NormalPath, int]], p: NormalPath) -> NormalPath:
    """Apply the twists in list order (the first entry acts first)."""
    for c, sign in twists:
        p = apply_dehn_twist(s, c, p, sign)
    return p
