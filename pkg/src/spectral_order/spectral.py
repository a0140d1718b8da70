"""J+-filtered complexes over F2 and the page on which a cycle dies.

A filtered complex is stored through its graded differential pieces
``d[0], d[1], ..., d[L]`` where ``d[l]`` collects the curves with ``J+ = 2l``.
The Laurent variable of the filtered module never appears explicitly: the
page-k cycles and boundaries reduce to block linear systems in the pieces.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import gf2
from .gf2 import Matrix


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class FilteredComplex:
    dim: int
    pieces: tuple[Matrix, ...]
    contact: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        for m in self.pieces:
            if m.nrows != self.dim or m.ncols != self.dim:
                raise ComplexError("every differential piece must be dim x dim")
        if not 0 <= self.contact < max(self.dim, 1) and self.dim:
            raise ComplexError("contact index out of range")
        if self.labels and len(self.labels) != self.dim:
            raise ComplexError("labels must name every basis element")

    @property
    def top(self) -> int:
        """Largest l with a nonzero piece (``-1`` for the zero differential)."""
        for l in range(len(self.pieces) - 1, -1, -1):
            if not self.pieces[l].is_zero():
                return l
        return -1

    @property
    def contact_vector(self) -> int:
        return 1 << self.contact

    def piece(self, l: int) -> Matrix:
        if 0 <= l < len(self.pieces):
            return self.pieces[l]
        return Matrix.zeros(self.dim, self.dim)

    def total(self) -> Matrix:
        m = Matrix.zeros(self.dim, self.dim)
        for p in self.pieces:
            m = m + p
        return m

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def chain_labels(self, v: int) -> list[str]:
        return [self.label(i) for i in gf2.bits(v)]

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "pieces": {str(l): [[r, c] for r, c in m.entries()] for l, m in enumerate(self.pieces)},
            "contact": self.contact,
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FilteredComplex":
        dim = int(data["dim"])
        raw = data.get("pieces", {})
        top = max((int(k) for k in raw), default=-1)
        pieces = []
        for l in range(top + 1):
            triplets = raw.get(str(l), [])
            entries = []
            for t in triplets:
                if len(t) == 3 and t[2] % 2 == 0:
                    continue
                entries.append((int(t[0]), int(t[1])))
            pieces.append(Matrix.from_entries(dim, dim, entries))
        return cls(dim, tuple(pieces), int(data["contact"]), tuple(data.get("labels", ())))

    @classmethod
    def from_arrows(
        cls, labels: Sequence[str], arrows: Iterable[tuple[str, str, int]], contact: str
    ) -> "FilteredComplex":
        """Complex from ``(source, target, l)`` arrows meaning ``d[l]`` sends source to target."""
        index = {name: i for i, name in enumerate(labels)}
        by_level: dict[int, list[tuple[int, int]]] = {}
        for src, dst, l in arrows:
            by_level.setdefault(l, []).append((index[dst], index[src]))
        top = max(by_level, default=-1)
        n = len(labels)
        pieces = tuple(Matrix.from_entries(n, n, by_level.get(l, [])) for l in range(top + 1))
        return cls(n, pieces, index[contact], tuple(labels))


def check_graded_identity(fc: FilteredComplex) -> tuple[bool, list[tuple[int, int]]]:
    """Check ``sum_{i+j=l} d_i d_j = 0`` for every l; report failing ``(l, column)`` pairs."""
    failures = []
    top = len(fc.pieces) - 1
    for l in range(2 * top + 1):
        acc = Matrix.zeros(fc.dim, fc.dim)
        for i in range(max(0, l - top), min(l, top) + 1):
            acc = acc + fc.piece(i) @ fc.piece(l - i)
        failures.extend((l, c) for c, col in enumerate(acc.cols) if col)
    return not failures, failures


def _is_filtered_cycle(fc: FilteredComplex, x: int) -> bool:
    return all(p(x) == 0 for p in fc.pieces)


def _boundary_system(fc: FilteredComplex, k: int) -> tuple[Matrix, Matrix]:
    """Block matrices for B^k on unknowns ``(b_0, ..., b_{k-1})``.

    Returns ``(main, constraints)``: ``main`` maps the unknowns to
    ``sum_i d_i b_i`` and ``constraints`` stacks, for ``0 < j < k``, the
    expressions ``sum_{i - l = j} d_l b_i`` which must vanish.
    """
    d = fc.dim
    main_cols = []
    cons_cols = []
    for i in range(k):
        for c in range(d):
            main_cols.append(fc.piece(i).cols[c])
            col = 0
            for j in range(1, k):
                if i - j >= 0:
                    col |= fc.piece(i - j).cols[c] << ((j - 1) * d)
            cons_cols.append(col)
    return Matrix(d, tuple(main_cols)), Matrix(d * max(k - 1, 0), tuple(cons_cols))


def _split(v: int, d: int, k: int) -> list[int]:
    mask = (1 << d) - 1
    return [(v >> (i * d)) & mask for i in range(k)]


def b_membership(fc: FilteredComplex, x: int, k: int) -> tuple[bool, list[int] | None]:
    """Decide ``x in B^k``; on success return the witness chains ``b_0..b_{k-1}``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not _is_filtered_cycle(fc, x):
        raise ComplexError("x is not annihilated by every differential piece")
    d = fc.dim
    main, cons = _boundary_system(fc, k)
    stacked = Matrix(d * k, tuple(m | (c << d) for m, c in zip(main.cols, cons.cols)))
    sol = gf2.solve(stacked, x)
    if sol is None:
        return False, None
    return True, _split(sol, d, k)


def verify_boundary_witness(fc: FilteredComplex, x: int, witness: Sequence[int]) -> bool:
    """Check the B^k equations directly, for ``k = len(witness)``."""
    k = len(witness)
    total = 0
    for i, b in enumerate(witness):
        total ^= fc.piece(i)(b)
    if total != x:
        return False
    for j in range(1, k):
        acc = 0
        for l in range(0, k - j):
            acc ^= fc.piece(l)(witness[l + j])
        if acc:
            return False
    return True


@dataclass(frozen=True)
class PageData:
    k: int
    dim_z: int
    dim_b: int

    @property
    def dim_e(self) -> int:
        return self.dim_z - self.dim_b


def page_data(fc: FilteredComplex, k: int) -> PageData:
    if k < 1:
        raise ValueError("pages start at k = 1")
    d = fc.dim
    # Z^k: unknowns (c, c_1, ..., c_{k-1}); rows d_0 c and, for 0<j<k,
    # d_j c + sum_{i<j} d_i c_{j-i}.
    cols = []
    for blk in range(k):
        for c in range(d):
            col = 0
            if blk == 0:
                for j in range(k):
                    col |= fc.piece(j).cols[c] << (j * d)
            else:
                for j in range(blk, k):
                    col |= fc.piece(j - blk).cols[c] << (j * d)
            cols.append(col)
    zsys = Matrix(d * k, tuple(cols))
    mask = (1 << d) - 1
    dim_z = gf2.span_rank((v & mask for v in gf2.kernel(zsys)), d)
    main, cons = _boundary_system(fc, k)
    dim_b = gf2.span_rank((main(v) for v in gf2.kernel(cons)), d) if k > 1 else gf2.rank(main)
    return PageData(k, dim_z, dim_b)


@dataclass(frozen=True)
class OrderResult:
    """Outcome of a spectral order computation.

    ``kind`` is ``"finite"``, ``"infinite"`` (certified survival: the cycle is
    not a boundary of the total differential) or ``"unresolved"`` (it is a
    total boundary, but no page up to ``k`` kills it).
    """

    kind: str
    k: int | None = None
    witness: tuple[int, ...] = ()
    homology_witness: int | None = None
    labels: tuple[str, ...] = field(default=(), compare=False)
    upper_bound: bool = field(default=False, compare=False)
    source: str | None = field(default=None, compare=False)

    @classmethod
    def finite(cls, k: int, witness: Sequence[int] = (), **kw) -> "OrderResult":
        return cls("finite", k, tuple(witness), **kw)

    @classmethod
    def infinite(cls, **kw) -> "OrderResult":
        return cls("infinite", **kw)

    @classmethod
    def unresolved(cls, k_max: int, homology_witness: int | None = None, **kw) -> "OrderResult":
        return cls("unresolved", k_max, homology_witness=homology_witness, **kw)

    def __str__(self) -> str:
        prefix = "<= " if self.upper_bound else ""
        if self.kind == "finite":
            return f"Finite({prefix}{self.k})" if prefix else f"Finite({self.k})"
        if self.kind == "infinite":
            return "InfiniteCertified"
        return f"Unresolved(k > {self.k})"

    def _chain(self, v: int) -> list:
        if self.labels:
            return [self.labels[i] for i in gf2.bits(v)]
        return gf2.bits(v)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "upper_bound": self.upper_bound}
        if self.k is not None:
            out["k" if self.kind == "finite" else "k_max"] = self.k
        if self.witness:
            out["witness"] = [self._chain(b) for b in self.witness]
        if self.homology_witness is not None:
            out["homology_witness"] = self._chain(self.homology_witness)
        if self.source is not None:
            out["source"] = self.source
        return out


def default_k_max(fc: FilteredComplex) -> int:
    return fc.dim + max(fc.top, 0) + 1


def spectral_order(fc: FilteredComplex, k_max: int | None = None) -> OrderResult:
    x = fc.contact_vector
    if not _is_filtered_cycle(fc, x):
        raise ComplexError("distinguished element is not a filtered cycle")
    if k_max is None:
        k_max = default_k_max(fc)
    hw = gf2.solve(fc.total(), x)
    if hw is None:
        return OrderResult.infinite(labels=fc.labels)
    for k in range(k_max + 1):
        ok, witness = b_membership(fc, x, k + 1)
        if ok:
            return OrderResult.finite(k, witness, homology_witness=hw, labels=fc.labels)
    return OrderResult.unresolved(k_max, hw, labels=fc.labels)


def tensor(a: FilteredComplex, b: FilteredComplex) -> FilteredComplex:
    """Tensor product; piece ``l`` is ``d_l (x) 1 + 1 (x) d'_l``."""
    top = max(len(a.pieces), len(b.pieces))
    ia, ib = Matrix.identity(a.dim), Matrix.identity(b.dim)
    pieces = tuple(a.piece(l).kron(ib) + ia.kron(b.piece(l)) for l in range(top))
    labels = ()
    if a.labels or b.labels:
        labels = tuple(f"{a.label(i)}*{b.label(j)}" for i in range(a.dim) for j in range(b.dim))
    return FilteredComplex(a.dim * b.dim, pieces, a.contact * b.dim + b.contact, labels)


def transport_witness(witness: Sequence[int], a: FilteredComplex, b: FilteredComplex) -> list[int]:
    """Send a witness for ``a``'s cycle to one for the tensor cycle (``w -> w (x) c'``)."""
    out = []
    for w in witness:
        v = 0
        for i in gf2.bits(w):
            v |= 1 << (i * b.dim + b.contact)
        out.append(v)
    return out


_RANK = {"finite": 0, "unresolved": 1, "infinite": 2}


def order_upper_bound_aggregate(results: Sequence[OrderResult]) -> OrderResult:
    """Least order over a corpus of presentations, reported as an upper bound."""
    if not results:
        raise ValueError("need at least one result")

    def key(r: OrderResult):
        return (_RANK[r.kind], r.k if r.kind == "finite" else 0)

    best = min(results, key=key)
    return OrderResult(
        best.kind, best.k, best.witness, best.homology_witness, best.labels, True, best.source
    )


def brute_force_b_membership(fc: FilteredComplex, x: int, k: int) -> bool:
    """Exhaustive search over all chains ``b_0..b_{k-1}``; only for tiny complexes."""
    n = fc.dim * k
    if n > 20:
        raise ValueError("search space too large")
    for combo in itertools.product(range(1 << fc.dim), repeat=k):
        if verify_boundary_witness(fc, x, combo):
            return True
    return False


def load_complex(path) -> FilteredComplex:
    with open(path, encoding="utf-8") as fh:
        return FilteredComplex.from_json(json.load(fh))
