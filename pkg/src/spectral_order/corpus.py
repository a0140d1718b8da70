"""Encoded example presentations with expected invariants, and a runner.

Every entry is one JSON file in ``corpus_data``.  An entry holds a
presentation (an open book, a diagram, or a bare filtered complex),
optionally asserted differential counts, and the values the pipeline must
reproduce.  Pair entries relate two other entries: a boundary connected sum
of their open books, or an enlarged arc collection.

The files are generated by :func:`build_entry`; :func:`check_shipped` compares
them byte for byte with a fresh generation.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

from . import gf2
from .diagram import HeegaardDiagram, finger_move, genus_of_sigma, relabel, validate_diagram
from .floer import (
    FloerError,
    GradedDifferential,
    differential,
    enumerate_generators,
    enumerate_positive_domains,
    is_admissible,
    is_nice,
    j_plus,
    make_generator,
    parse_generator,
)
from .openbook import OpenBookPresentation, add_parallel_copy, boundary_connected_sum, build_heegaard_diagram
from .spectral import FilteredComplex, OrderResult, page_data, spectral_order, tensor
from .surface import NormalPath, Surface

CORPUS_DIR = Path(__file__).with_name("corpus_data")


class CorpusError(ValueError):
    """Raised for unknown entries, bad parameters or malformed entry files."""


def dump_json(obj: Any) -> str:
    """Canonical text form used for every shipped file."""
    return json.dumps(obj, indent=1, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Pages and monodromies.


def annulus_page() -> Surface:
    """Annulus cut by one arc into a square."""
    return Surface.from_lists(1, [[(0, "L"), (0, "R")]])


def annulus_core() -> NormalPath:
    return NormalPath.loop([(0, 1)])


def planar4_page() -> Surface:
    """Sphere with four holes cut by a chain of three arcs into one 12-gon."""
    return Surface.from_lists(3, [[(0, "L"), (1, "L"), (2, "L"), (2, "R"), (1, "R"), (0, "R")]])


def planar4_boundary_curves() -> tuple[NormalPath, ...]:
    """Curves parallel to the four boundary components of :func:`planar4_page`."""
    return (
        NormalPath.loop([(0, 1)]),
        NormalPath.loop([(0, 1), (1, -1)]),
        NormalPath.loop([(1, 1), (2, -1)]),
        NormalPath.loop([(2, 1)]),
    )


def planar4_separating_curve() -> NormalPath:
    """The curve splitting the four boundary components into two pairs."""
    return NormalPath.loop([(1, 1)])


def planar_family(k: int, m: int) -> OpenBookPresentation:
    """``k`` positive twists about each boundary curve, then ``m`` negative twists about the separating curve."""
    if k < 0 or m < 0:
        raise CorpusError("twist counts must be nonnegative")
    twists = tuple((c, 1) for c in planar4_boundary_curves() for _ in range(k))
    twists += tuple((planar4_separating_curve(), -1) for _ in range(m))
    return OpenBookPresentation(planar4_page(), twists, name=f"planar family k={k} m={m}")


def _trivial_annulus() -> OpenBookPresentation:
    return OpenBookPresentation(annulus_page(), (), name="annulus, identity monodromy")


def _twisted_annulus(sign: int) -> OpenBookPresentation:
    kind = "positive" if sign > 0 else "negative"
    return OpenBookPresentation(annulus_page(), ((annulus_core(), sign),), name=f"annulus, one {kind} twist")


# ---------------------------------------------------------------------------
# Count files from enumeration.


def _counts_into_contact(d: HeegaardDiagram) -> list[dict]:
    """Every positive index-one domain into the contact generator, count one each."""
    xi = make_generator(d, d.contact)
    out = []
    for y in enumerate_generators(d):
        en = enumerate_positive_domains(d, y, xi, index=1)
        if not en.complete:
            raise CorpusError("enumeration into the contact generator is not complete")
        for D in en.domains:
            out.append({"from": y.label, "to": xi.label, "domain": d.domain_dict(D), "count": 1})
    return out


def _single_domain(d: HeegaardDiagram, x, y) -> dict:
    en = enumerate_positive_domains(d, x, y, index=1)
    if not en.complete or len(en.domains) != 1:
        raise CorpusError(f"expected exactly one index-one domain from {x} to {y}")
    return d.domain_dict(en.domains[0])


# ---------------------------------------------------------------------------
# The finger-move example.

_FINGER_POINTS = {"y1.2": "y1", "y2.5": "y2", "y2.3": "v2", "f24": "u1", "f25": "v1"}
_FINGER_REGIONS = {
    "R8": "B1",
    "R6": "B2",
    "R6^": "B3",
    "R8'": "B5",
    "R9": "C",
    "R2": "A",
    "R4": "D",
    "R5": "F",
    "R6'": "G",
    "R7": "H",
}


def finger_diagram() -> HeegaardDiagram:
    """The k=2, m=3 family diagram after two finger moves of the monodromy.

    The moves push β across α inside the hexagons next to the first arc;
    this isotopes the monodromy and creates the generators ``u`` and ``v``.
    """
    d = build_heegaard_diagram(planar_family(2, 3)).diagram
    d = finger_move(d, "R8", 0, 3)
    d = finger_move(d, "R6", 4, 1)
    d = relabel(d, _FINGER_POINTS, _FINGER_REGIONS, name="planar family k=2 m=3 after two finger moves")
    # point subscripts name the β curve (the image arc) a point lies on
    for pid, beta in (("y1", 0), ("u1", 0), ("v1", 0), ("y2", 1), ("v2", 1)):
        if d.point(pid).beta != beta:  # pragma: no cover - guards the reconstruction
            raise CorpusError(f"point {pid} is not on β curve {beta}")
    return d


FINGER_GENERATORS = {"y": "y1,y2,x3", "u": "u1,v2,x3", "v": "v1,v2,x3"}


def finger_counts(d: HeegaardDiagram) -> list[dict]:
    g = {k: parse_generator(d, v) for k, v in FINGER_GENERATORS.items()}
    xi = make_generator(d, d.contact)
    out = []
    for label, a, b in (("D1", g["v"], xi), ("D2", g["v"], g["u"]), ("D3", g["y"], g["u"])):
        out.append({"label": label, "from": a.label, "to": b.label, "domain": _single_domain(d, a, b), "count": 1})
    return out


def finger_complex() -> FilteredComplex:
    """The four-generator complex ``d0 v = u, d1 v = x, d1 y = u``."""
    labels = ["x", "y", "u", "v"]
    return FilteredComplex.from_arrows(labels, [("v", "u", 0), ("v", "x", 1), ("y", "u", 1)], "x")


# ---------------------------------------------------------------------------
# Entries.


@dataclass
class CorpusEntry:
    name: str
    description: str
    open_book: OpenBookPresentation | None = None
    diagram: HeegaardDiagram | None = None
    complex: FilteredComplex | None = None
    counts: list[dict] | None = None
    pair: dict | None = None
    expected: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "description": self.description}
        if self.pair is not None:
            out["pair"] = dict(self.pair)
        if self.open_book is not None:
            out["open_book"] = self.open_book.to_json()
        if self.diagram is not None:
            out["diagram"] = self.diagram.to_json()
        if self.complex is not None:
            out["complex"] = self.complex.to_json()
        if self.counts is not None:
            out["counts"] = [dict(c) for c in self.counts]
        out["expected"] = dict(self.expected)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "CorpusEntry":
        try:
            return cls(
                name=str(data["name"]),
                description=str(data.get("description", "")),
                open_book=OpenBookPresentation.from_json(data["open_book"]) if "open_book" in data else None,
                diagram=HeegaardDiagram.from_json(data["diagram"]) if "diagram" in data else None,
                complex=FilteredComplex.from_json(data["complex"]) if "complex" in data else None,
                counts=[dict(c) for c in data["counts"]] if "counts" in data else None,
                pair=dict(data["pair"]) if "pair" in data else None,
                expected=dict(data.get("expected", {})),
            )
        except (KeyError, TypeError) as exc:
            raise CorpusError(f"malformed corpus entry: {exc!r}") from None


def corpus_generate_family(k: int, m: int) -> CorpusEntry:
    """Family entry with counts for every index-one domain into the contact generator."""
    if not (isinstance(k, int) and isinstance(m, int)):
        raise CorpusError("k and m must be integers")
    if k < 2 or m <= k or k > 4:
        raise CorpusError("the family needs 2 <= k <= 4 and m > k")
    ob = planar_family(k, m)
    d = build_heegaard_diagram(ob).diagram
    expected: dict = {
        "genus": 3,
        "admissible": True,
        "nice": False,
        "domains_into_contact": [2 * k, 2 * k],
        "count_j_plus": [2 * k, 2 * k],
        "contact_class_vanishes": True,
        "order": f"Finite(<= {k})",
    }
    if (k, m) == (2, 3):
        expected["hexagons"] = 4
        expected["n_generators"] = 112
    return CorpusEntry(
        name=f"family-{k}-{m}",
        description=f"four-holed sphere, {k} positive twists about each boundary curve and {m} negative twists "
        "about the separating curve; counts assert the two index-one domains into the contact generator",
        open_book=ob,
        counts=_counts_into_contact(d),
        expected=expected,
    )


def _entry_trivial_annulus() -> CorpusEntry:
    return CorpusEntry(
        "trivial-annulus",
        "annulus page with identity monodromy",
        open_book=_trivial_annulus(),
        expected={
            "genus": 1,
            "n_generators": 2,
            "admissible": True,
            "nice": True,
            "zero_differential": True,
            "contact_class_vanishes": False,
            "order": "InfiniteCertified",
        },
    )


def _entry_trivial_planar4() -> CorpusEntry:
    return CorpusEntry(
        "trivial-planar4",
        "four-holed sphere with identity monodromy and a chain of three arcs",
        open_book=OpenBookPresentation(planar4_page(), (), name="four-holed sphere, identity monodromy"),
        expected={
            "genus": 3,
            "n_generators": 8,
            "admissible": True,
            "nice": True,
            "zero_differential": True,
            "contact_class_vanishes": False,
            "order": "InfiniteCertified",
        },
    )


def _entry_tight_annulus() -> CorpusEntry:
    return CorpusEntry(
        "tight-annulus",
        "annulus page with one positive twist about the core",
        open_book=_twisted_annulus(1),
        expected={
            "genus": 1,
            "n_generators": 1,
            "admissible": True,
            "nice": True,
            "zero_differential": True,
            "order": "InfiniteCertified",
        },
    )


def _entry_overtwisted_annulus() -> CorpusEntry:
    return CorpusEntry(
        "overtwisted-annulus",
        "annulus page with one negative twist; the monodromy is not right-veering",
        open_book=_twisted_annulus(-1),
        expected={
            "genus": 1,
            "n_generators": 3,
            "admissible": True,
            "nice": True,
            "domains_into_contact": [0, 0],
            "contact_class_vanishes": True,
            "order": "Finite(0)",
        },
    )


def _entry_figure_two() -> CorpusEntry:
    ob = planar_family(1, 2)
    d = build_heegaard_diagram(ob).diagram
    return CorpusEntry(
        "figure-two",
        "four-holed sphere, one positive twist about each boundary curve and two negative twists about the "
        "separating curve; overtwisted, order one for this presentation",
        open_book=ob,
        counts=_counts_into_contact(d),
        expected={
            "genus": 3,
            "n_generators": 12,
            "admissible": True,
            "nice": False,
            "domains_into_contact": [2, 2],
            "count_j_plus": [2, 2],
            "contact_class_vanishes": True,
            "order": "Finite(<= 1)",
        },
    )


def _entry_finger() -> CorpusEntry:
    d = finger_diagram()
    return CorpusEntry(
        "finger-moves",
        "family k=2, m=3 after two finger moves; counts assert D1: v->x, D2: v->u, D3: y->u",
        diagram=d,
        counts=finger_counts(d),
        expected={
            "genus": 3,
            "n_generators": 144,
            "admissible": True,
            "nice": False,
            "count_j_plus": [2, 0, 2],
            "contact_class_vanishes": True,
            "order": "Finite(<= 2)",
        },
    )


def _entry_finger_complex() -> CorpusEntry:
    return CorpusEntry(
        "finger-complex",
        "the four-generator filtered complex of the finger-move example",
        complex=finger_complex(),
        expected={"contact_class_vanishes": True, "order": "Finite(2)", "dim_e1": 2},
    )


def _entry_sum(name: str, description: str, left: str, right: str, counts: bool, expected: dict) -> CorpusEntry:
    ob = boundary_connected_sum(ENTRY_BUILDERS[left]().open_book, ENTRY_BUILDERS[right]().open_book)
    entry = CorpusEntry(name, description, open_book=ob, pair={"kind": "connected_sum", "left": left, "right": right})
    if counts:
        entry.counts = _counts_into_contact(build_heegaard_diagram(ob).diagram)
    entry.expected = expected
    return entry


def _entry_arcs(name: str, description: str, base: str, arc: int, expected: dict) -> CorpusEntry:
    ob = add_parallel_copy(ENTRY_BUILDERS[base]().open_book, arc)
    return CorpusEntry(
        name, description, open_book=ob, pair={"kind": "arc_inclusion", "left": base, "arc": arc}, expected=expected
    )


ENTRY_BUILDERS: dict[str, Callable[[], CorpusEntry]] = {
    "trivial-annulus": _entry_trivial_annulus,
    "trivial-planar4": _entry_trivial_planar4,
    "tight-annulus": _entry_tight_annulus,
    "overtwisted-annulus": _entry_overtwisted_annulus,
    "figure-two": _entry_figure_two,
    "finger-moves": _entry_finger,
    "finger-complex": _entry_finger_complex,
    "family-2-3": lambda: corpus_generate_family(2, 3),
    "family-3-4": lambda: corpus_generate_family(3, 4),
    "sum-overtwisted-trivial": lambda: _entry_sum(
        "sum-overtwisted-trivial",
        "boundary connected sum of the overtwisted and the trivial annulus",
        "overtwisted-annulus",
        "trivial-annulus",
        False,
        {"nice": True, "order": "Finite(0)", "sum_equals_min": True, "tensor_order": "Finite(0)"},
    ),
    "sum-tight-tight": lambda: _entry_sum(
        "sum-tight-tight",
        "boundary connected sum of two positively twisted annuli",
        "tight-annulus",
        "tight-annulus",
        False,
        {"nice": True, "order": "InfiniteCertified", "sum_equals_min": True, "tensor_order": "InfiniteCertified"},
    ),
    "sum-figure-two-trivial": lambda: _entry_sum(
        "sum-figure-two-trivial",
        "boundary connected sum of the order-one example with the trivial annulus",
        "figure-two",
        "trivial-annulus",
        True,
        {"admissible": True, "domains_into_contact": [0, 0, 0, 0, 2, 2], "order": "Finite(<= 1)",
         "sum_equals_min": True, "tensor_order": "Finite(<= 1)"},
    ),
    "arcs-overtwisted-copy": lambda: _entry_arcs(
        "arcs-overtwisted-copy",
        "overtwisted annulus with a parallel copy of its arc",
        "overtwisted-annulus",
        0,
        {"nice": True, "n_generators": 10, "order": "Finite(0)", "order_monotone": True},
    ),
    "arcs-trivial-copy": lambda: _entry_arcs(
        "arcs-trivial-copy",
        "trivial annulus with a parallel copy of its arc",
        "trivial-annulus",
        0,
        {"nice": True, "n_generators": 4, "zero_differential": True, "order": "InfiniteCertified",
         "order_monotone": True},
    ),
    "arcs-tight-copy": lambda: _entry_arcs(
        "arcs-tight-copy",
        "positively twisted annulus with a parallel copy of its arc",
        "tight-annulus",
        0,
        {"nice": True, "n_generators": 2, "order": "InfiniteCertified", "order_monotone": True},
    ),
}


def entry_names() -> list[str]:
    return list(ENTRY_BUILDERS)


def build_entry(name: str) -> CorpusEntry:
    if name not in ENTRY_BUILDERS:
        raise CorpusError(f"unknown corpus entry {name!r}")
    return ENTRY_BUILDERS[name]()


def entry_path(name: str, directory: Path | None = None) -> Path:
    return (directory or CORPUS_DIR) / f"{name}.json"


def load_entry(name: str, directory: Path | None = None) -> CorpusEntry:
    path = entry_path(name, directory)
    if not path.exists():
        raise CorpusError(f"unknown corpus entry {name!r}")
    return CorpusEntry.from_json(json.loads(path.read_text(encoding="utf-8")))


def write_corpus(directory: Path | None = None) -> list[Path]:
    directory = directory or CORPUS_DIR
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in ENTRY_BUILDERS:
        p = entry_path(name, directory)
        p.write_text(dump_json(build_entry(name).to_json()), encoding="utf-8")
        paths.append(p)
    return paths


def check_shipped(directory: Path | None = None) -> list[str]:
    """Names whose shipped file differs from a fresh generation or fails to round-trip."""
    bad = []
    for name in ENTRY_BUILDERS:
        path = entry_path(name, directory)
        text = path.read_text(encoding="utf-8") if path.exists() else ""
        if text != dump_json(build_entry(name).to_json()):
            bad.append(name)
        elif dump_json(CorpusEntry.from_json(json.loads(text)).to_json()) != text:
            bad.append(name)
    return bad


# ---------------------------------------------------------------------------
# Evaluation.


@dataclass
class Evaluation:
    """Lazily computed invariants of one entry."""

    entry: CorpusEntry
    k_max: int | None = None
    _cache: dict = field(default_factory=dict)

    def _get(self, key: str, fn: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def diagram(self) -> HeegaardDiagram | None:
        def make():
            if self.entry.diagram is not None:
                return self.entry.diagram
            if self.entry.open_book is not None:
                return build_heegaard_diagram(self.entry.open_book).diagram
            return None

        return self._get("diagram", make)

    def differential(self) -> GradedDifferential:
        return self._get("differential", lambda: differential(self.diagram, self.entry.counts))

    def complex(self) -> FilteredComplex:
        def make():
            if self.entry.complex is not None:
                return self.entry.complex
            d = self.diagram
            return self.differential().to_complex(make_generator(d, d.contact))

        return self._get("complex", make)

    @property
    def asserted(self) -> bool:
        return self.entry.counts is not None

    def order(self) -> OrderResult:
        def make():
            res = spectral_order(self.complex(), self.k_max)
            if self.asserted:
                res = dataclasses.replace(res, upper_bound=True, source="asserted counts")
            return res

        return self._get("order", make)

    def domains_into_contact(self) -> list[int]:
        d = self.diagram
        xi = make_generator(d, d.contact)
        js = []
        for y in enumerate_generators(d):
            en = enumerate_positive_domains(d, y, xi, index=1)
            if not en.complete:
                raise FloerError("enumeration into the contact generator is incomplete")
            js.extend(j_plus(d, D, y, xi) for D in en.domains)
        return sorted(js)

    def count_j_plus(self) -> list[int]:
        d = self.diagram
        return [
            j_plus(d, d.domain(c["domain"]), parse_generator(d, c["from"]), parse_generator(d, c["to"]))
            for c in self.entry.counts or []
        ]

    def value(self, key: str, resolve: Callable[[str], "Evaluation"]) -> Any:
        d = self.diagram
        if key == "genus":
            return genus_of_sigma(d)
        if key == "valid":
            return validate_diagram(d).ok
        if key == "n_generators":
            return len(enumerate_generators(d))
        if key == "admissible":
            return is_admissible(d).admissible
        if key == "nice":
            return is_nice(d)[0]
        if key == "hexagons":
            base = set(d.basepoint_indices)
            return sum(1 for i, r in enumerate(d.regions) if i not in base and r.n_corners == 6)
        if key == "zero_differential":
            return self.differential().is_zero()
        if key == "contact_class_vanishes":
            fc = self.complex()
            return gf2.solve(fc.total(), fc.contact_vector) is not None
        if key == "order":
            return str(self.order())
        if key == "domains_into_contact":
            return self.domains_into_contact()
        if key == "count_j_plus":
            return self.count_j_plus()
        if key == "dim_e1":
            return page_data(self.complex(), 1).dim_e
        pair = self.entry.pair or {}
        if key == "sum_equals_min":
            left, right = resolve(pair["left"]), resolve(pair["right"])
            return order_value(self.order()) == min(order_value(left.order()), order_value(right.order()))
        if key == "tensor_order":
            left, right = resolve(pair["left"]), resolve(pair["right"])
            res = spectral_order(tensor(left.complex(), right.complex()), self.k_max)
            if left.asserted or right.asserted:
                res = dataclasses.replace(res, upper_bound=True)
            return str(res)
        if key == "order_monotone":
            return order_value(resolve(pair["left"]).order()) >= order_value(self.order())
        raise CorpusError(f"unknown expected key {key!r}")


def order_value(res: OrderResult) -> float:
    """``k`` for a finite order, infinity for certified survival; unresolved has no value."""
    if res.kind == "finite":
        return res.k
    if res.kind == "infinite":
        return math.inf
    raise CorpusError("order is unresolved; raise k_max")


@dataclass
class Check:
    key: str
    expected: Any
    actual: Any
    ok: bool
    error: str | None = None

    def to_json(self) -> dict:
        out = {"key": self.key, "expected": self.expected, "actual": self.actual, "ok": self.ok}
        if self.error:
            out["error"] = self.error
        return out


@dataclass
class EntryReport:
    name: str
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


class CorpusRunner:
    """Evaluates entries, sharing evaluations between pair entries and their parts."""

    def __init__(self, directory: Path | None = None, k_max: int | None = None):
        self.directory = directory
        self.k_max = k_max
        self._evals: dict[str, Evaluation] = {}

    def evaluation(self, name: str) -> Evaluation:
        if name not in self._evals:
            self._evals[name] = Evaluation(load_entry(name, self.directory), self.k_max)
        return self._evals[name]

    def run(self, name: str) -> EntryReport:
        ev = self.evaluation(name)
        checks = []
        for key, want in ev.entry.expected.items():
            try:
                got = ev.value(key, self.evaluation)
                checks.append(Check(key, want, got, got == want))
            except (ValueError, KeyError) as exc:
                checks.append(Check(key, want, None, False, str(exc)))
        return EntryReport(name, checks)

    def run_all(self, names: list[str] | None = None) -> list[EntryReport]:
        return [self.run(n) for n in (names or entry_names())]
