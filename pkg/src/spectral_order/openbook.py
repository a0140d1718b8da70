"""Open book presentations and the Heegaard diagrams they determine.

The page is a :class:`~spectral_order.surface.Surface` whose cut arcs are
the arc collection.  The monodromy is a list of Dehn twists applied in
order, or explicit images of the pushed-off arcs ``b_i``.

The closed surface is the double of the page: an upper copy ``H`` with the
orientation of ``S`` and a lower copy ``L`` with the opposite orientation,
glued along ``∂S``.  Each ``α_i`` is ``a_i`` in both copies.  Each ``β_i``
is the pushoff ``b_i`` in ``H`` followed by its image ``φ(b_i)`` in ``L``.
In ``H``, ``α_i`` and ``β_i`` meet once, at the contact point ``x_i``.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Mapping

from .diagram import Corner, HeegaardDiagram, IntersectionPoint, Region, require_valid
from .surface import (
    Arrangement,
    NormalPath,
    Surface,
    SurfaceError,
    apply_twist_word,
    check_path,
    is_reduced,
    pushoff,
    reduce_path,
    self_intersections,
)


class OpenBookError(ValueError):
    """Raised for invalid presentations or unsupported operations."""


Twist = tuple[NormalPath, int]


@dataclass(frozen=True)
class OpenBookPresentation:
    surface: Surface
    twists: tuple[Twist, ...] | None = ()
    images: tuple[NormalPath, ...] | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if (self.twists is None) == (self.images is None):
            raise OpenBookError("give exactly one of a twist word or explicit images")

    # -- basic data -----------------------------------------------------------
    @property
    def n_arcs(self) -> int:
        return self.surface.n_arcs

    @property
    def genus(self) -> int:
        return self.surface.genus

    @property
    def boundary_count(self) -> int:
        return self.surface.boundary_count

    @property
    def literal(self) -> bool:
        return self.images is not None

    def validate(self) -> list[str]:
        """Problems with the presentation (empty list when valid)."""
        problems = []
        s = self.surface
        try:
            s.genus
        except SurfaceError as exc:
            problems.append(str(exc))
        if not s.cut_polygon_count_basis():
            problems.append("arc collection does not contain a basis")
        for c, sign in self.twists or ():
            if not c.closed:
                problems.append("twist curve is not closed")
                continue
            if sign not in (1, -1):
                problems.append("twist sign must be +1 or -1")
            try:
                check_path(s, c)
            except SurfaceError as exc:
                problems.append(f"twist curve: {exc}")
            if not is_reduced(c):
                problems.append("twist curve is not reduced")
        if self.images is not None:
            if len(self.images) != s.n_arcs:
                problems.append("one image per arc is required")
            for i, im in enumerate(self.images):
                if im.closed or im.start != (i, "R") or im.end != (i, "L"):
                    problems.append(f"image {i} does not have the endpoints of b_{i}")
                    continue
                try:
                    check_path(s, im)
                except SurfaceError as exc:
                    problems.append(f"image {i}: {exc}")
        return problems

    def require_valid(self) -> None:
        problems = self.validate()
        if problems:
            raise OpenBookError("; ".join(problems))

    def monodromy_images(self) -> list[NormalPath]:
        """Reduced images ``φ(b_i)``."""
        if self.images is not None:
            return [reduce_path(self.surface, p) for p in self.images]
        return [apply_twist_word(self.surface, self.twists, pushoff(i)) for i in range(self.n_arcs)]

    def with_images(self) -> "OpenBookPresentation":
        return OpenBookPresentation(self.surface, None, tuple(self.monodromy_images()), self.name)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        out: dict = {
            "surface": {"genus": self.genus, "boundary": self.boundary_count},
            "n_arcs": self.n_arcs,
            "cut_polygons": [[[j, x] for j, x in poly] for poly in self.surface.polygons],
        }
        if self.images is not None:
            out["monodromy"] = {"images": [[[j, d] for j, d in p.crossings] for p in self.images]}
        else:
            out["monodromy"] = {
                "twists": [{"curve": [[j, d] for j, d in c.crossings], "sign": sg} for c, sg in self.twists]
            }
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "OpenBookPresentation":
        try:
            polys = data["cut_polygons"]
            n = int(data.get("n_arcs", sum(len(p) for p in polys) // 2))
            s = Surface.from_lists(n, polys)
            mono = data.get("monodromy", {"twists": []})
            name = str(data.get("name", ""))
            decl = data.get("surface")
            if decl is not None:
                if int(decl.get("genus", s.genus)) != s.genus or int(decl.get("boundary", s.boundary_count)) != s.boundary_count:
                    raise OpenBookError(
                        f"declared surface (g={decl.get('genus')}, b={decl.get('boundary')}) does not match "
                        f"cut polygons (g={s.genus}, b={s.boundary_count})"
                    )
            if "images" in mono:
                imgs = tuple(NormalPath.arc(im, (i, "R"), (i, "L")) for i, im in enumerate(mono["images"]))
                ob = cls(s, None, imgs, name)
            else:
                tw = tuple((NormalPath.loop(t["curve"]), int(t.get("sign", 1))) for t in mono.get("twists", []))
                ob = cls(s, tw, None, name)
        except (KeyError, TypeError) as exc:
            raise OpenBookError(f"malformed open book JSON: {exc!r}") from None
        except SurfaceError as exc:
            raise OpenBookError(str(exc)) from None
        return ob


def load_open_book(path: str) -> OpenBookPresentation:
    with open(path) as fh:
        return OpenBookPresentation.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Heegaard diagram construction.


@dataclass
class _Graph:
    """Embedded graph given by edges and counterclockwise dart rotations."""

    edges: list[tuple[object, object, str]] = field(default_factory=list)  # (tail, head, kind)
    rot: dict[object, list[tuple[int, int]]] = field(default_factory=dict)

    def add_edge(self, u, v, kind: str) -> int:
        self.edges.append((u, v, kind))
        return len(self.edges) - 1

    def tail(self, d: tuple[int, int]):
        u, v, _ = self.edges[d[0]]
        return u if d[1] == 0 else v

    def head(self, d: tuple[int, int]):
        u, v, _ = self.edges[d[0]]
        return v if d[1] == 0 else u

    def faces(self, keep=lambda kind: True) -> list[list[tuple[int, int]]]:
        """Face boundary cycles, each face on the left of its darts."""
        rot = {v: [d for d in ds if keep(self.edges[d[0]][2])] for v, ds in self.rot.items()}
        seen = set()
        out = []
        for e in range(len(self.edges)):
            if not keep(self.edges[e][2]):
                continue
            for dirn in (0, 1):
                d0 = (e, dirn)
                if d0 in seen:
                    continue
                cyc = []
                d = d0
                while d not in seen:
                    seen.add(d)
                    cyc.append(d)
                    v = self.head(d)
                    r = rot[v]
                    back = (d[0], 1 - d[1])
                    d = r[(r.index(back) - 1) % len(r)]
                out.append(cyc)
        return out


@dataclass(frozen=True)
class BuildResult:
    diagram: HeegaardDiagram
    contact: tuple[str, ...]
    images: tuple[NormalPath, ...]


def _seam(kind: str, j: int) -> tuple[str, int]:
    return (kind, j)


def build_heegaard_diagram(ob: OpenBookPresentation, name: str | None = None) -> BuildResult:
    """Compile ``(S, φ, A)`` into a multipointed diagram and its contact generator."""
    ob.require_valid()
    s = ob.surface
    N = s.n_arcs
    if N == 0:
        raise OpenBookError("the page needs at least one arc (disk pages give no diagram)")
    images = ob.monodromy_images()
    for i, im in enumerate(images):
        if not is_reduced(im):
            raise OpenBookError(f"image of b_{i} has a bigon with the arcs; reduce it first")
    arr = Arrangement(s, images)

    # lower-copy intersection points, sorted along each arc from e0 to e1
    on_arc: dict[int, list[tuple[int, int]]] = {j: [] for j in range(N)}
    for i, im in enumerate(images):
        for t, (j, _) in enumerate(im.crossings):
            on_arc[j].append((i, t))
    for j in range(N):
        lst = on_arc[j]
        for u in range(len(lst)):
            for v in range(u + 1, len(lst)):
                if arr.compare_on_arc(lst[u], lst[v]) == 0:
                    raise OpenBookError("two monodromy images run parallel forever")
        lst.sort(key=functools.cmp_to_key(arr.compare_on_arc))

    points: list[IntersectionPoint] = []
    for i in range(N):
        points.append(IntersectionPoint(f"x{i + 1}", i, i, 1))
    low_id: dict[tuple[int, int], str] = {}
    for j in range(N):
        for i, t in on_arc[j]:
            pid = f"y{i + 1}.{t + 1}"
            low_id[(i, t)] = pid
            points.append(IntersectionPoint(pid, j, i, -images[i].crossings[t][1]))
    sign = {p.id: p.sign for p in points}

    alpha_orders = []
    beta_orders = []
    for i in range(N):
        low = [low_id[it] for it in reversed(on_arc[i])]
        alpha_orders.append([_seam("e0", i), f"x{i + 1}", _seam("e1", i)] + low)
        lowb = [low_id[(i, t)] for t in reversed(range(len(images[i])))]
        beta_orders.append([_seam("f0", i), f"x{i + 1}", _seam("f1", i)] + lowb)

    g = _Graph()
    out_d: dict[tuple[str, object], tuple[int, int]] = {}
    in_d: dict[tuple[str, object], tuple[int, int]] = {}
    for kind, orders in (("a", alpha_orders), ("b", beta_orders)):
        for cyc in orders:
            for k, u in enumerate(cyc):
                v = cyc[(k + 1) % len(cyc)]
                e = g.add_edge(u, v, kind)
                out_d[(kind, u)] = (e, 0)
                in_d[(kind, v)] = (e, 1)
    bd_out: dict[object, tuple[int, int]] = {}
    bd_in: dict[object, tuple[int, int]] = {}
    for comp in s.boundary_components:
        seq = []
        for which, j in comp:
            seq.append(_seam(which, j))
            seq.append(_seam("f" + which[1], j))
        for k, u in enumerate(seq):
            v = seq[(k + 1) % len(seq)]
            e = g.add_edge(u, v, "d")
            bd_out[u] = (e, 0)
            bd_in[v] = (e, 1)

    for p in points:
        if sign[p.id] == 1:
            g.rot[p.id] = [out_d[("a", p.id)], out_d[("b", p.id)], in_d[("a", p.id)], in_d[("b", p.id)]]
        else:
            g.rot[p.id] = [out_d[("a", p.id)], in_d[("b", p.id)], in_d[("a", p.id)], out_d[("b", p.id)]]
    for j in range(N):
        for kind, pre in (("a", "e"), ("b", "f")):
            v0, v1 = _seam(pre + "0", j), _seam(pre + "1", j)
            # counterclockwise: along ∂S, into the upper copy, against ∂S, into the lower copy
            g.rot[v0] = [bd_out[v0], out_d[(kind, v0)], bd_in[v0], in_d[(kind, v0)]]
            g.rot[v1] = [bd_out[v1], in_d[(kind, v1)], bd_in[v1], out_d[(kind, v1)]]

    # pieces of Σ cut along α, β and ∂S; glue across ∂S into regions
    pieces = g.faces()
    piece_of = {}
    for pi, cyc in enumerate(pieces):
        for d in cyc:
            piece_of[d] = pi
    parent = list(range(len(pieces)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    glued: list[int] = []
    for e, (_, _, kind) in enumerate(g.edges):
        if kind == "d":
            a, b = piece_of[(e, 0)], piece_of[(e, 1)]
            glued.append(a)
            parent[find(a)] = find(b)

    # region boundaries: faces of the α ∪ β graph
    cycles = g.faces(keep=lambda kind: kind != "d")
    region_order: list[int] = []
    region_bds: dict[int, list[tuple[Corner, ...]]] = {}
    for cyc in cycles:
        root = find(piece_of[cyc[0]])
        if root not in region_bds:
            region_bds[root] = []
            region_order.append(root)
        corners = []
        for d in cyc:
            v = g.head(d)
            if isinstance(v, str):
                back = (d[0], 1 - d[1])
                idx = g.rot[v].index(back)
                corners.append(Corner(v, idx if idx else 4))
        region_bds[root].append(tuple(corners))
    n_pieces: dict[int, int] = {}
    for pi in range(len(pieces)):
        n_pieces[find(pi)] = n_pieces.get(find(pi), 0) + 1
    n_glue: dict[int, int] = {}
    for a in glued:
        n_glue[find(a)] = n_glue.get(find(a), 0) + 1

    rid = {root: f"R{k + 1}" for k, root in enumerate(region_order)}
    regions = [
        Region(rid[root], tuple(region_bds[root]), n_pieces[root] - n_glue.get(root, 0)) for root in region_order
    ]

    # one basepoint per component of S minus the arcs, in the upper copy away from the strips
    basepoints = []
    for poly in s.polygons:
        j, x = poly[0]
        f = _seam("f1" if x == "L" else "f0", j)
        basepoints.append(rid[find(piece_of[bd_out[f]])])

    diagram = HeegaardDiagram(
        N,
        points,
        [[v for v in o if isinstance(v, str)] for o in alpha_orders],
        [[v for v in o if isinstance(v, str)] for o in beta_orders],
        regions,
        basepoints,
        name=name if name is not None else ob.name,
        contact=[f"x{i + 1}" for i in range(N)],
    )
    require_valid(diagram)
    return BuildResult(diagram, diagram.contact, tuple(images))


# ---------------------------------------------------------------------------
# Operations on presentations.


def _rewrite_for_copy(p: NormalPath, j: int, new: int) -> NormalPath:
    word = []
    for a, d in p.crossings:
        if a != j:
            word.append((a, d))
        elif d == 1:
            word.extend([(j, 1), (new, 1)])
        else:
            word.extend([(new, -1), (j, -1)])
    if not p.closed:
        if p.end == (j, "L"):
            word.append((new, -1))
        if p.start == (j, "L"):
            word.insert(0, (new, 1))
    return NormalPath(tuple(word), p.closed, p.start, p.end)


def add_parallel_copy(ob: OpenBookPresentation, j: int) -> OpenBookPresentation:
    """Add a copy of ``a_j`` just to its left; the copy becomes the last arc."""
    s = ob.surface
    new = s.n_arcs
    polys = [list(p) for p in s.polygons]
    pi, k = s.loc((j, "L"))
    polys[pi][k] = (new, "L")
    polys.append([(j, "L"), (new, "R")])
    s2 = Surface(new + 1, tuple(tuple(p) for p in polys))
    if ob.images is not None:
        imgs = [reduce_path(s2, _rewrite_for_copy(p, j, new)) for p in ob.images]
        copy_img = NormalPath(((j, -1),) + imgs[j].crossings + ((new, 1),), False, (new, "R"), (new, "L"))
        imgs.append(reduce_path(s2, copy_img))
        return OpenBookPresentation(s2, None, tuple(imgs), ob.name)
    tw = tuple((reduce_path(s2, _rewrite_for_copy(c, j, new)), sg) for c, sg in ob.twists)
    return OpenBookPresentation(s2, tw, None, ob.name)


def double_boundary_arcs(ob: OpenBookPresentation, assignment: Mapping[int, int]) -> OpenBookPresentation:
    """Add one parallel copy per boundary component, of the arc assigned to it.

    ``assignment`` maps every boundary component index to an arc touching
    that component.  The arc collection must be complete and the page must
    have negative Euler characteristic.
    """
    ob.require_valid()
    s = ob.surface
    if s.euler_characteristic >= 0:
        raise OpenBookError("disk and annulus pages have no complete arc sets to double")
    if not s.is_complete():
        raise OpenBookError("arc collection is not complete")
    comps = set(range(s.boundary_count))
    if set(assignment) != comps:
        raise OpenBookError("assignment must cover every boundary component exactly once")
    for comp, j in assignment.items():
        if not 0 <= j < s.n_arcs:
            raise OpenBookError(f"unknown arc {j}")
        if comp not in s.arc_boundaries(j):
            raise OpenBookError(f"arc {j} does not meet boundary component {comp}")
    out = ob
    for comp in sorted(assignment):
        out = add_parallel_copy(out, assignment[comp])
    return out


def _insert_side(polys: list[list], after, side) -> None:
    """Insert ``side`` right after arc side ``after`` (or into a sideless polygon)."""
    for poly in polys:
        if after in poly:
            poly.insert(poly.index(after) + 1, side)
            return
    raise OpenBookError(f"no arc side {after!r}")


def boundary_connected_sum(
    ob1: OpenBookPresentation, ob2: OpenBookPresentation, after1=None, after2=None
) -> OpenBookPresentation:
    """Page ``S1 ♮ S2`` with the arcs of both plus the cocore of the joining strip.

    The strip is attached to the boundary sides following the arc sides
    ``after1`` of ``S1`` and ``after2`` of ``S2`` (default: the first side of
    the first polygon).  Arcs of ``S2`` are renumbered after those of ``S1``.
    """
    ob1.require_valid()
    ob2.require_valid()
    s1, s2 = ob1.surface, ob2.surface
    n1, n2 = s1.n_arcs, s2.n_arcs
    new = n1 + n2
    polys = [list(p) for p in s1.polygons] + [[(j + n1, x) for j, x in p] for p in s2.polygons]
    if after1 is None:
        after1 = s1.polygons[0][0] if s1.polygons[0] else None
    if after2 is None:
        after2 = s2.polygons[0][0] if s2.polygons[0] else None
    if after1 is None:
        polys[0].append((new, "L"))
    else:
        _insert_side(polys[: len(s1.polygons)], tuple(after1), (new, "L"))
    if after2 is None:
        polys[len(s1.polygons)].append((new, "R"))
    else:
        _insert_side(polys[len(s1.polygons):], (after2[0] + n1, after2[1]), (new, "R"))
    s = Surface(new + 1, tuple(tuple(p) for p in polys))

    def shift(p: NormalPath) -> NormalPath:
        return NormalPath(
            tuple((j + n1, d) for j, d in p.crossings),
            p.closed,
            None if p.start is None else (p.start[0] + n1, p.start[1]),
            None if p.end is None else (p.end[0] + n1, p.end[1]),
        )

    name = f"{ob1.name}#{ob2.name}" if ob1.name or ob2.name else ""
    if not ob1.literal and not ob2.literal:
        tw = tuple(ob1.twists) + tuple((shift(c), sg) for c, sg in ob2.twists)
        return OpenBookPresentation(s, tw, None, name)
    imgs = list(ob1.monodromy_images()) + [shift(p) for p in ob2.monodromy_images()] + [pushoff(new)]
    return OpenBookPresentation(s, None, tuple(imgs), name)


def stabilize(ob: OpenBookPresentation, after1, after2, curve: NormalPath | None = None) -> OpenBookPresentation:
    """Attach a 1-handle and compose with a positive twist through it.

    The handle's feet sit on the boundary sides following the arc sides
    ``after1`` and ``after2``.  Its cocore becomes the last arc ``h``.
    ``curve`` is a closed curve crossing ``h`` once.  If both feet are in one
    polygon it defaults to the curve crossing only ``h``.  The new monodromy
    is ``φ ∘ τ_c``, so the new twist acts first.
    """
    if ob.literal:
        raise OpenBookError("stabilization needs the monodromy as a twist word")
    ob.require_valid()
    s = ob.surface
    h = s.n_arcs
    after1, after2 = tuple(after1), tuple(after2)
    polys = [list(p) for p in s.polygons]
    if after1 == after2:
        _insert_side(polys, after1, (h, "R"))
        _insert_side(polys, after1, (h, "L"))
    else:
        _insert_side(polys, after1, (h, "L"))
        _insert_side(polys, after2, (h, "R"))
    s2 = Surface(h + 1, tuple(tuple(p) for p in polys))
    if curve is None:
        if s2.loc((h, "L"))[0] != s2.loc((h, "R"))[0]:
            raise OpenBookError("feet in different polygons: give the stabilizing curve explicitly")
        curve = NormalPath(((h, 1),), True)
    curve = reduce_path(s2, curve)
    if sum(1 for j, _ in curve.crossings if j == h) != 1:
        raise OpenBookError("stabilizing curve must cross the new cocore exactly once")
    if self_intersections(s2, curve):
        raise OpenBookError("stabilizing curve is not simple")
    tw = ((curve, 1),) + tuple(ob.twists)
    return OpenBookPresentation(s2, tw, None, ob.name)


def disk_page() -> OpenBookPresentation:
    return OpenBookPresentation(Surface(0, ((),)), (), None, "disk")
