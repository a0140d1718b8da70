"""Randomized property suites (hypothesis, 10^3 examples where random inputs apply)."""

from __future__ import annotations

import functools
import math
import random
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import _finger, built
from spectral_order import gf2
from spectral_order.corpus import CorpusRunner, entry_names, load_entry, order_value
from spectral_order.diagram import euler_measure, generator_point_measure
from spectral_order.floer import (
    domain_space,
    enumerate_generators,
    enumerate_positive_domains,
    is_nice,
    j_plus,
    maslov_index,
    nice_differential,
)
from spectral_order.openbook import OpenBookPresentation, build_heegaard_diagram
from spectral_order.spectral import (
    FilteredComplex,
    b_membership,
    brute_force_b_membership,
    check_graded_identity,
    spectral_order,
    tensor,
    verify_boundary_witness,
)
from spectral_order.surface import (
    NormalPath,
    Surface,
    SurfaceError,
    apply_dehn_twist,
    apply_twist_word,
    check_path,
    intersection_number,
    is_proper_power,
    pushoff,
    reduce_path,
    self_intersections,
)

TRIALS = settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])

# ---------------------------------------------------------------------------
# (a), (b): enumerated domains on admissible fixtures.

FIXTURES = ["overtwisted-annulus", "tight-annulus", "trivial-annulus", "family-1-2", "family-2-3", "family-3-4", "finger"]
EXHAUSTIVE = ["overtwisted-annulus", "tight-annulus", "trivial-annulus", "family-1-2", "family-2-3", "finger"]


@functools.lru_cache(maxsize=None)
def fixture(name: str):
    d = _finger() if name == "finger" else built(name).diagram
    return d, enumerate_generators(d)


def _j_plus_general(d, D, x, y) -> Fraction:
    mu = euler_measure(d, D) + generator_point_measure(d, D, x.points) + generator_point_measure(d, D, y.points)
    return mu - 2 * euler_measure(d, D) + x.cycles - y.cycles


def _j_plus_index_one(d, D, x, y) -> Fraction:
    n = generator_point_measure(d, D, x.points) + generator_point_measure(d, D, y.points)
    return 2 * n - 1 + x.cycles - y.cycles


def _check_index_one(d, D, x, y) -> None:
    assert maslov_index(d, D, x, y) == 1
    jp = j_plus(d, D, x, y)
    assert jp >= 0 and jp % 2 == 0
    assert _j_plus_general(d, D, x, y) == jp == _j_plus_index_one(d, D, x, y)


@functools.lru_cache(maxsize=None)
def positive_domains(name: str) -> tuple:
    """Every nonzero positive domain between generator pairs (each lattice here has rank 0)."""
    d, gens = fixture(name)
    out = []
    for x in gens:
        for y in gens:
            en = enumerate_positive_domains(d, x, y)
            assert en.complete
            out.extend((x, y, D) for D in en.domains if not D.is_zero())
    return tuple(out)


def test_index_one_domains_exhaustive():
    total = 0
    for name in EXHAUSTIVE:
        d, _ = fixture(name)
        for x, y, D in positive_domains(name):
            if maslov_index(d, D, x, y) == 1:
                _check_index_one(d, D, x, y)
                total += 1
    assert total >= 20


@TRIALS
@given(st.sampled_from(FIXTURES), st.data())
def test_index_one_domains_random_pairs(name, data):
    d, gens = fixture(name)
    x = gens[data.draw(st.integers(0, len(gens) - 1))]
    y = gens[data.draw(st.integers(0, len(gens) - 1))]
    en = enumerate_positive_domains(d, x, y, index=1)
    assert en.complete
    for D in en.domains:
        _check_index_one(d, D, x, y)


def test_additivity_of_composed_enumerated_domains():
    pairs = 0
    for name in EXHAUSTIVE:
        d, _ = fixture(name)
        doms = positive_domains(name)
        by_source: dict = {}
        for x, y, D in doms:
            by_source.setdefault(x, []).append((y, D))
        for x, y, D1 in doms:
            for z, D2 in by_source.get(y, []):
                D = D1 + D2
                assert maslov_index(d, D, x, z) == maslov_index(d, D1, x, y) + maslov_index(d, D2, y, z)
                assert _j_plus_general(d, D, x, z) == _j_plus_general(d, D1, x, y) + _j_plus_general(d, D2, y, z)
                pairs += 1
    assert pairs >= 1


@TRIALS
@given(st.sampled_from(FIXTURES + ["trivial-planar"]), st.data())
def test_additivity_on_random_triples(name, data):
    if name == "trivial-planar":
        d = build_heegaard_diagram(OpenBookPresentation(_P4, ())).diagram
        gens = enumerate_generators(d)
    else:
        d, gens = fixture(name)
    x, y, z = (gens[data.draw(st.integers(0, len(gens) - 1))] for _ in range(3))
    s1, s2 = domain_space(d, x, y), domain_space(d, y, z)
    if s1.empty or s2.empty:
        return
    coeffs = st.integers(-2, 2)
    D1, D2 = s1.particular, s2.particular
    for P in s1.periodic_basis:
        D1 = D1 + P.scale(data.draw(coeffs))
    for P in s2.periodic_basis:
        D2 = D2 + P.scale(data.draw(coeffs))
    D = D1 + D2
    assert maslov_index(d, D, x, z) == maslov_index(d, D1, x, y) + maslov_index(d, D2, y, z)
    assert j_plus(d, D, x, z) == j_plus(d, D1, x, y) + j_plus(d, D2, y, z)


# ---------------------------------------------------------------------------
# (c): graded identity of nice-mode differentials on random open books.

_ANNULUS = Surface.from_lists(1, [[(0, "L"), (0, "R")]])
_ANNULUS2 = Surface.from_lists(2, [[(0, "L"), (1, "R")], [(1, "L"), (0, "R")]])
_PANTS = Surface.from_lists(3, [[(0, "L"), (1, "L"), (2, "L")], [(2, "R"), (1, "R"), (0, "R")]])
_P4 = Surface.from_lists(3, [[(0, "L"), (1, "L"), (2, "L"), (2, "R"), (1, "R"), (0, "R")]])
_T1 = Surface.from_lists(2, [[(0, "L"), (1, "L"), (0, "R"), (1, "R")]])
_PAGE_CURVES = {
    "annulus": (_ANNULUS, [NormalPath.loop([(0, 1)])]),
    "annulus2": (_ANNULUS2, [NormalPath.loop([(0, 1), (1, 1)])]),
    "pants": (
        _PANTS,
        [NormalPath.loop([(0, 1), (1, -1)]), NormalPath.loop([(1, 1), (2, -1)]), NormalPath.loop([(2, 1), (0, -1)])],
    ),
    "torus": (_T1, [NormalPath.loop([(0, 1)]), NormalPath.loop([(1, 1)])]),
}


@functools.lru_cache(maxsize=None)
def _nice_or_none(page: str, word: tuple):
    s, curves = _PAGE_CURVES[page]
    twists = tuple((curves[i % len(curves)], sign) for i, sign in word)
    d = build_heegaard_diagram(OpenBookPresentation(s, twists)).diagram
    return nice_differential(d) if is_nice(d)[0] else None


@TRIALS
@given(st.sampled_from(sorted(_PAGE_CURVES)), st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=3))
def test_nice_differentials_satisfy_graded_identity(page, word):
    if page == "pants":
        word = word[:2]  # three twists give 68 generators and a rank-2 lattice: slow, no new cases
    diff = _nice_or_none(page, tuple(word))
    if diff is None:
        return
    fc = FilteredComplex(len(diff.generators), diff.pieces, 0, diff.labels)
    assert check_graded_identity(fc) == (True, [])
    assert all(a.level in (0, 1) for a in diff.arrows)  # bigons and squares have J+ in {0, 2}


# ---------------------------------------------------------------------------
# (d): page monotonicity on random filtered complexes.


def random_complex(rng: random.Random, max_dim: int = 10, max_level: int = 3) -> FilteredComplex:
    """Random filtered complex whose pieces lower a hidden homological degree by one.

    Maps out of each degree are drawn uniformly from the solutions of the
    graded identity against the (already drawn) maps into it.
    """
    n_deg = rng.randint(2, 4)
    sizes = [rng.randint(1, 3) for _ in range(n_deg)]
    while sum(sizes) > max_dim:
        sizes[rng.randrange(n_deg)] = max(1, sizes[rng.randrange(n_deg)] - 1)
        if sum(sizes) > max_dim:
            sizes.pop()
            n_deg -= 1
    L = rng.randint(0, max_level)
    offs = [sum(sizes[:g]) for g in range(n_deg)]
    dim = sum(sizes)
    # maps[g][l][r][c]: degree g -> g-1 at level l
    maps: dict[int, list[list[list[int]]]] = {}
    for g in range(n_deg - 1, 0, -1):
        rows, cols = sizes[g - 1], sizes[g]
        unknowns = [(l, r, c) for l in range(L + 1) for r in range(rows) for c in range(cols)]
        if g + 1 in maps:
            above = maps[g + 1]  # degree g+1 -> g, shape sizes[g] x sizes[g+1]
            cons = []
            for lp in range(2 * L + 1):
                for r in range(rows):
                    for c2 in range(sizes[g + 1]):
                        row = 0
                        for u, (l, rr, k) in enumerate(unknowns):
                            if rr == r and 0 <= lp - l <= L and above[lp - l][k][c2]:
                                row |= 1 << u
                        cons.append(row)
            kernel = gf2.kernel(gf2.Matrix.from_dense([[(row >> u) & 1 for u in range(len(unknowns))] for row in cons]))
            vec = 0
            for v in kernel:
                if rng.random() < 0.5:
                    vec ^= v
        else:
            vec = rng.getrandbits(len(unknowns))
        m = [[[0] * cols for _ in range(rows)] for _ in range(L + 1)]
        for u, (l, r, c) in enumerate(unknowns):
            m[l][r][c] = (vec >> u) & 1
        maps[g] = m
    pieces = []
    for l in range(L + 1):
        entries = []
        for g, m in maps.items():
            for r in range(sizes[g - 1]):
                for c in range(sizes[g]):
                    if m[l][r][c]:
                        entries.append((offs[g - 1] + r, offs[g] + c))
        pieces.append(gf2.Matrix.from_entries(dim, dim, entries))
    contact = rng.randrange(sizes[0])  # degree zero: a cycle of every piece
    return FilteredComplex(dim, tuple(pieces), contact)


@TRIALS
@given(st.integers(0, 2**32))
def test_boundary_pages_increase(seed):
    rng = random.Random(seed)
    fc = random_complex(rng)
    assert check_graded_identity(fc)[0]
    cycles = [v for v in range(1 << fc.dim) if all(p(v) == 0 for p in fc.pieces)] if fc.dim <= 8 else [fc.contact_vector]
    x = rng.choice(cycles)
    previous = False
    for k in range(1, fc.dim + 3):
        ok, witness = b_membership(fc, x, k)
        assert ok or not previous
        if ok:
            assert verify_boundary_witness(fc, x, witness)
        previous = ok
    if fc.dim * 2 <= 12:
        assert b_membership(fc, x, 2)[0] == brute_force_b_membership(fc, x, 2)


# ---------------------------------------------------------------------------
# (e): twist / untwist round trips and reduction.

_SURFACES = {"T1": _T1, "P4": _P4, "G2": Surface.from_lists(
    4, [[(0, "L"), (1, "L"), (0, "R"), (1, "R"), (2, "L"), (3, "L"), (2, "R"), (3, "R")]])}


def _random_loop(s: Surface, rng: random.Random, length: int) -> NormalPath:
    while True:
        w = [(rng.randrange(s.n_arcs), rng.choice((1, -1))) for _ in range(length)]
        p = reduce_path(None, NormalPath.loop(w))
        if p.crossings:
            try:
                check_path(s, p)
                return p
            except SurfaceError:
                pass


@functools.lru_cache(maxsize=None)
def simple_curves(name: str) -> tuple[NormalPath, ...]:
    s = _SURFACES[name]
    rng = random.Random(name)
    pool: list[NormalPath] = []
    while len(pool) < 12:
        p = _random_loop(s, rng, rng.randint(1, 6))
        if p not in pool and not is_proper_power(p) and self_intersections(s, p) == 0:
            pool.append(p)
    return tuple(pool)


@TRIALS
@given(st.sampled_from(sorted(_SURFACES)), st.data())
def test_twist_round_trip(name, data):
    s = _SURFACES[name]
    pool = simple_curves(name)
    pick = st.integers(0, len(pool) - 1)
    c = pool[data.draw(pick)]
    sign = data.draw(st.sampled_from([1, -1]))
    if data.draw(st.booleans()):
        p = pool[data.draw(pick)]
        i = intersection_number(s, c, p)
        t = apply_dehn_twist(s, c, p, sign)
        assert intersection_number(s, t, p) == i * i
    else:
        word = [(pool[data.draw(pick)], data.draw(st.sampled_from([1, -1]))) for _ in range(data.draw(st.integers(0, 2)))]
        p = apply_twist_word(s, word, pushoff(data.draw(st.integers(0, s.n_arcs - 1))))
        t = apply_dehn_twist(s, c, p, sign)
    assert self_intersections(s, t) == 0
    assert apply_dehn_twist(s, c, t, -sign) == p
    if intersection_number(s, c, p) == 0:
        assert t == p


@TRIALS
@given(st.sampled_from(sorted(_SURFACES)), st.data())
def test_reduction_removes_inserted_backtracks(name, data):
    s = _SURFACES[name]
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    if data.draw(st.booleans()):
        p = _random_loop(s, rng, rng.randint(1, 8))
    else:
        p = apply_twist_word(s, [(rng.choice(simple_curves(name)), 1)], pushoff(rng.randrange(s.n_arcs)))
    word = list(p.crossings)
    for _ in range(data.draw(st.integers(1, 5))):
        pos = rng.randint(0, len(word))
        j, dd = rng.randrange(s.n_arcs), rng.choice((1, -1))
        word[pos:pos] = [(j, dd), (j, -dd)]
    dirty = NormalPath(tuple(word), p.closed, p.start, p.end)
    once = reduce_path(None, dirty)
    assert once == reduce_path(None, p)
    assert reduce_path(None, once) == once
    assert len(once) <= len(dirty)


# ---------------------------------------------------------------------------
# (f): arc-inclusion monotonicity and tensor bounds.


def test_corpus_pairs_monotone_and_tensor_bounded():
    runner = CorpusRunner()
    seen = 0
    for name in entry_names():
        entry = load_entry(name)
        if not entry.pair:
            continue
        seen += 1
        ev = runner.evaluation(name)
        left = runner.evaluation(entry.pair["left"])
        if "right" in entry.pair:
            right = runner.evaluation(entry.pair["right"])
            t = spectral_order(tensor(left.complex(), right.complex()))
            assert order_value(t) <= min(order_value(left.order()), order_value(right.order()))
            assert order_value(ev.order()) <= min(order_value(left.order()), order_value(right.order()))
        else:
            assert order_value(left.order()) >= order_value(ev.order())
    assert seen >= 6


@TRIALS
@given(st.integers(0, 2**32))
def test_tensor_order_at_most_minimum(seed):
    rng = random.Random(seed)
    a = random_complex(rng, max_dim=5)
    b = random_complex(rng, max_dim=5)
    # a total boundary can survive every page, so compare finite values only
    oa, ob, ot = spectral_order(a), spectral_order(b), spectral_order(tensor(a, b))
    assert _finite_or_inf(ot) <= min(_finite_or_inf(oa), _finite_or_inf(ob))


def _finite_or_inf(res) -> float:
    return res.k if res.kind == "finite" else math.inf
