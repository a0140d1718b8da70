"""Command line front end.

Inputs are JSON files, detected by content: an open book (``cut_polygons``),
a Heegaard diagram (``regions``), a filtered complex (``pieces``) or a corpus
entry.  ``corpus:NAME`` names a shipped corpus entry.  With ``--json`` every
command prints one JSON document; errors print ``{"error": {...}}``.

Exit codes: 0 success, 1 a check failed (invalid input, corpus mismatch),
2 unreadable or malformed input, 3 an incomplete enumeration where a complete
one is required.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import gf2
from .corpus import CorpusEntry, CorpusError, CorpusRunner, entry_names, load_entry, write_corpus
from .diagram import DiagramError, HeegaardDiagram, euler_measure, validate_diagram
from .floer import (
    FloerError,
    Generator,
    contact_class_vanishes,
    differential,
    enumerate_generators,
    enumerate_positive_domains,
    generator_point_measure,
    is_admissible,
    is_nice,
    j_plus,
    load_counts,
    make_generator,
    maslov_index,
    parse_generator,
)
from .openbook import OpenBookError, OpenBookPresentation, build_heegaard_diagram
from .spectral import ComplexError, FilteredComplex, check_graded_identity, spectral_order, tensor
from .surface import SurfaceError

KMAX_ENV = "SPECTRAL_ORDER_KMAX"

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_PARTIAL = 0, 1, 2, 3

_INPUT_ERRORS = (DiagramError, OpenBookError, SurfaceError, FloerError, ComplexError, CorpusError)


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT, kind: str = "input", **details: Any):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.details = details


# ---------------------------------------------------------------------------
# Input handling.


@dataclass
class Loaded:
    """Whatever an input file provides."""

    kind: str  # "open_book", "diagram", "complex" or "entry"
    open_book: OpenBookPresentation | None = None
    diagram: HeegaardDiagram | None = None
    complex: FilteredComplex | None = None
    counts: list[dict] | None = None

    def need_diagram(self) -> HeegaardDiagram:
        if self.diagram is None and self.open_book is not None:
            self.diagram = build_heegaard_diagram(self.open_book).diagram
        if self.diagram is None:
            raise CliError("this command needs a diagram or an open book")
        return self.diagram


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from None


def _from_entry(entry: CorpusEntry) -> Loaded:
    return Loaded("entry", entry.open_book, entry.diagram, entry.complex, entry.counts)


def load_input(spec: str) -> Loaded:
    if spec.startswith("corpus:"):
        return _from_entry(load_entry(spec[len("corpus:"):]))
    data = _read_json(spec)
    if not isinstance(data, dict):
        raise CliError(f"{spec}: expected a JSON object")
    if "expected" in data or any(k in data for k in ("open_book", "diagram", "complex")):
        return _from_entry(CorpusEntry.from_json(data))
    if "cut_polygons" in data:
        return Loaded("open_book", open_book=OpenBookPresentation.from_json(data))
    if "regions" in data:
        return Loaded("diagram", diagram=HeegaardDiagram.from_json(data))
    if "pieces" in data and "dim" in data:
        try:
            return Loaded("complex", complex=FilteredComplex.from_json(data))
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"malformed complex: {exc!r}") from None
    raise CliError(f"{spec}: not an open book, diagram, complex or corpus entry")


def _counts(args, loaded: Loaded) -> list[dict] | None:
    if getattr(args, "counts", None):
        return load_counts(args.counts)
    if getattr(args, "nice", False):
        return None
    return loaded.counts


def _contact(d: HeegaardDiagram) -> Generator:
    if not d.contact:
        raise CliError("the diagram names no contact generator")
    return make_generator(d, d.contact)


def _k_max(args) -> int | None:
    if getattr(args, "kmax", None) is not None:
        return args.kmax
    env = os.environ.get(KMAX_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"{KMAX_ENV} must be an integer") from None
    return None


def _complex(args, loaded: Loaded) -> tuple[FilteredComplex, bool]:
    """The filtered complex of an input, and whether it rests on asserted counts."""
    if loaded.complex is not None and loaded.diagram is None and loaded.open_book is None:
        return loaded.complex, False
    d = loaded.need_diagram()
    counts = _counts(args, loaded)
    diff = differential(d, counts)
    return diff.to_complex(_contact(d)), counts is not None


def _parse_domain(d: HeegaardDiagram, text: str):
    """Domain from JSON (object or file) or ``R1:1,R2:2``."""
    text = text.strip()
    if os.path.exists(text):
        data = _read_json(text)
    elif text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError(f"bad domain JSON: {exc}") from None
    else:
        data = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            rid, _, mult = part.partition(":")
            try:
                data[rid.strip()] = int(mult) if mult else 1
            except ValueError:
                raise CliError(f"bad multiplicity in {part!r}") from None
    if isinstance(data, dict) and "domain" in data:
        data = data["domain"]
    return d.domain(data)


# ---------------------------------------------------------------------------
# Output.


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _table(rows: Sequence[Sequence[Any]], header: Sequence[str]) -> list[str]:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    out = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    out.insert(1, "  ".join("-" * w for w in widths))
    return out


# ---------------------------------------------------------------------------
# Commands.


def cmd_validate(args) -> int:
    loaded = load_input(args.input)
    payload: dict = {"kind": loaded.kind}
    violations: list[str] = []
    if loaded.open_book is not None:
        problems = loaded.open_book.validate()
        violations += [f"open book: {p}" for p in problems]
        payload["surface"] = {"genus": loaded.open_book.genus, "boundary": loaded.open_book.boundary_count}
        if not problems and loaded.diagram is None:
            loaded.need_diagram()
    if loaded.diagram is not None:
        rep = validate_diagram(loaded.diagram)
        violations += rep.violations
        payload["genus"] = rep.genus
    if loaded.complex is not None:
        ok, failures = check_graded_identity(loaded.complex)
        violations += [f"graded identity fails at level {l}, column {c}" for l, c in failures]
    payload["ok"] = not violations
    payload["violations"] = violations
    lines = [f"{loaded.kind}: {'valid' if not violations else 'INVALID'}"]
    if payload.get("genus") is not None:
        lines.append(f"genus of the Heegaard surface: {payload['genus']}")
    lines += [f"  - {v}" for v in violations]
    _emit(args, payload, lines)
    return EXIT_OK if not violations else EXIT_CHECK


def cmd_build(args) -> int:
    loaded = load_input(args.input)
    if loaded.open_book is None:
        raise CliError("build needs an open book")
    res = build_heegaard_diagram(loaded.open_book)
    doc = res.diagram.to_json()
    text = json.dumps(doc, indent=1, ensure_ascii=False) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json or not args.output:
        sys.stdout.write(text)
    else:
        d = res.diagram
        print(f"wrote {args.output}: {len(d.points)} points, {len(d.regions)} regions, contact {{{','.join(d.contact)}}}")
    return EXIT_OK


def cmd_generators(args) -> int:
    d = load_input(args.input).need_diagram()
    gens = enumerate_generators(d)
    contact = set(d.contact)
    rows = [(g.label, g.cycles, "*" if set(g.points) == contact else "") for g in gens]
    payload = {"count": len(gens), "generators": [{"label": g.label, "points": list(g.points), "cycles": g.cycles} for g in gens]}
    _emit(args, payload, _table(rows, ["generator", "cycles", "contact"]) + [f"{len(gens)} generators"])
    return EXIT_OK


def cmd_admissible(args) -> int:
    d = load_input(args.input).need_diagram()
    res = is_admissible(d)
    payload = res.to_json(d)
    lines = [f"admissible: {res.admissible}"]
    if res.witness is not None:
        lines.append(f"nonnegative periodic domain: {d.domain_dict(res.witness)}")
    _emit(args, payload, lines)
    return EXIT_OK


def _generator_arg(d: HeegaardDiagram, text: str | None) -> Generator:
    if text is None or text in ("contact", "x"):
        return _contact(d)
    return parse_generator(d, text)


def cmd_domains(args) -> int:
    d = load_input(args.input).need_diagram()
    x = _generator_arg(d, args.source)
    y = _generator_arg(d, args.target)
    en = enumerate_positive_domains(d, x, y, index=args.index, coeff_cap=args.cap)
    rows, items = [], []
    for D in en.domains:
        mu = maslov_index(d, D, x, y)
        item = {"domain": d.domain_dict(D), "maslov": mu}
        if mu == 1:
            item["j_plus"] = j_plus(d, D, x, y)
        items.append(item)
        rows.append((json.dumps(item["domain"]), mu, item.get("j_plus", "")))
    payload = {"from": x.label, "to": y.label, "complete": en.complete, "capped": en.capped, "cap": en.cap, "domains": items}
    lines = _table(rows, ["domain", "maslov", "J+"]) + [f"{len(items)} domains ({'complete' if en.complete else 'PARTIAL'})"]
    if not en.complete and not args.allow_partial:
        raise CliError(
            "enumeration hit the coefficient cap without exhausting the positive cone",
            EXIT_PARTIAL,
            "partial",
            result=payload,
        )
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_jplus(args) -> int:
    loaded = load_input(args.input)
    d = loaded.need_diagram()
    if args.count is not None:
        counts = _counts(args, loaded) or []
        pick = [c for c in counts if str(c.get("label")) == args.count]
        if not pick and args.count.isdigit() and int(args.count) < len(counts):
            pick = [counts[int(args.count)]]
        if not pick:
            raise CliError(f"no count entry {args.count!r}")
        entry = pick[0]
        D = d.domain(entry["domain"])
        x = parse_generator(d, entry["from"])
        y = parse_generator(d, entry["to"])
    else:
        if args.domain is None:
            raise CliError("give --domain or --count")
        D = _parse_domain(d, args.domain)
        x = _generator_arg(d, args.source)
        y = _generator_arg(d, args.target)
    mu = maslov_index(d, D, x, y)
    jp = j_plus(d, D, x, y)
    e = euler_measure(d, D)
    payload = {
        "from": x.label,
        "to": y.label,
        "j_plus": jp,
        "maslov": mu,
        "euler": str(e),
        "n_from": str(generator_point_measure(d, D, x.points)),
        "n_to": str(generator_point_measure(d, D, y.points)),
        "cycles_from": x.cycles,
        "cycles_to": y.cycles,
    }
    _emit(args, payload, [f"J+ = {jp}  (Maslov index {mu}, Euler measure {e}, {x} -> {y})"])
    return EXIT_OK


def cmd_nice(args) -> int:
    d = load_input(args.input).need_diagram()
    ok, bad = is_nice(d)
    payload = {"nice": ok, "offending_regions": list(bad)}
    lines = [f"nice: {ok}"] + ([f"offending regions: {', '.join(bad)}"] if bad else [])
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_differential(args) -> int:
    loaded = load_input(args.input)
    d = loaded.need_diagram()
    counts = _counts(args, loaded)
    diff = differential(d, counts)
    payload = diff.to_json()
    payload["arrows"] = [a.to_json() for a in diff.arrows]
    rows = [(a.source, a.target, a.level, a.count, json.dumps(dict(a.domain))) for a in diff.arrows]
    mode = "asserted counts (assumed)" if counts is not None else "nice diagram"
    lines = [f"differential from {mode}; {len(diff.generators)} generators"]
    lines += _table(rows, ["from", "to", "level", "count", "domain"]) if rows else ["zero differential"]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_contact_class(args) -> int:
    loaded = load_input(args.input)
    if loaded.diagram is None and loaded.open_book is None and loaded.complex is not None:
        fc = loaded.complex
        sol = gf2.solve(fc.total(), fc.contact_vector)
        vanishes, witness = sol is not None, fc.chain_labels(sol) if sol is not None else []
        asserted = False
    else:
        d = loaded.need_diagram()
        counts = _counts(args, loaded)
        diff = differential(d, counts)
        vanishes, wit = contact_class_vanishes(diff, _contact(d))
        witness = [g.label for g in wit]
        asserted = counts is not None
    payload = {"vanishes": vanishes, "witness": witness, "assumed_counts": asserted}
    lines = [f"contact class vanishes: {vanishes}"] + ([f"witness: {' + '.join(witness)}"] if witness else [])
    _emit(args, payload, lines)
    return EXIT_OK


def _order_payload(res, asserted: bool) -> tuple[dict, list[str]]:
    if asserted:
        res = dataclasses.replace(res, upper_bound=True, source="asserted counts")
    payload = res.to_json()
    payload["display"] = str(res)
    lines = [f"order: {res}"]
    if res.witness:
        for i, b in enumerate(payload["witness"]):
            lines.append(f"  b{i} = {' + '.join(map(str, b)) or '0'}")
    if asserted:
        lines.append("  (upper bound: the differential rests on asserted counts)")
    return payload, lines


def cmd_order(args) -> int:
    loaded = load_input(args.input)
    fc, asserted = _complex(args, loaded)
    res = spectral_order(fc, _k_max(args))
    payload, lines = _order_payload(res, asserted)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_tensor_order(args) -> int:
    a, b = load_input(args.left), load_input(args.right)
    fa, sa = _complex(argparse.Namespace(counts=args.counts_left), a)
    fb, sb = _complex(argparse.Namespace(counts=args.counts_right), b)
    res = spectral_order(tensor(fa, fb), _k_max(args))
    payload, lines = _order_payload(res, sa or sb)
    payload["dim"] = fa.dim * fb.dim
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.action == "list":
        names = entry_names()
        _emit(args, {"entries": names}, names)
        return EXIT_OK
    if args.action == "write":
        if not args.names or len(args.names) != 1:
            raise CliError("corpus write needs one output directory")
        paths = write_corpus(Path(args.names[0]))
        _emit(args, {"written": [str(p) for p in paths]}, [str(p) for p in paths])
        return EXIT_OK
    runner = CorpusRunner(k_max=_k_max(args))
    reports = runner.run_all(args.names or None)
    lines = []
    for rep in reports:
        lines.append(f"{'PASS' if rep.ok else 'FAIL'}  {rep.name}")
        for c in rep.checks:
            if not c.ok:
                lines.append(f"      {c.key}: expected {c.expected!r}, got {c.actual!r}{' (' + c.error + ')' if c.error else ''}")
    ok = all(r.ok for r in reports)
    lines.append(f"{sum(r.ok for r in reports)}/{len(reports)} entries pass")
    _emit(args, {"ok": ok, "entries": [r.to_json() for r in reports]}, lines)
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------------------
# Parser.


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectral-order", description=__doc__.split("\n\n")[0])
    p.add_argument("--json", action="store_true", help="print one JSON document")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help: str, input: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print one JSON document")
        if input:
            sp.add_argument("input", help="JSON file or corpus:NAME")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check a file against its schema and invariants")
    sp = add("build", cmd_build, "compile an open book into a Heegaard diagram")
    sp.add_argument("-o", "--output", help="write the diagram here")
    add("generators", cmd_generators, "list generators with cycle counts")
    add("admissible", cmd_admissible, "decide admissibility with a certificate")
    sp = add("domains", cmd_domains, "enumerate positive domains between two generators")
    sp.add_argument("--from", dest="source", required=True, help="generator, e.g. 'x1,y2.1' or 'contact'")
    sp.add_argument("--to", dest="target", required=True, help="generator or 'contact'")
    sp.add_argument("--index", type=int, help="keep only this Maslov index")
    sp.add_argument("--cap", type=int, help="coefficient cap")
    sp.add_argument("--allow-partial", action="store_true", help="accept a capped, incomplete enumeration")
    sp = add("jplus", cmd_jplus, "Maslov index and J+ of a domain")
    sp.add_argument("--domain", help="JSON object, JSON file, or R1:1,R2:2")
    sp.add_argument("--from", dest="source", help="generator (default: contact)")
    sp.add_argument("--to", dest="target", help="generator (default: contact)")
    sp.add_argument("--count", help="use the domain of this count entry (label or position)")
    sp.add_argument("--counts", help="counts file")
    add("nice", cmd_nice, "check that non-basepoint regions are bigons or squares")
    for name, fn, help in (
        ("differential", cmd_differential, "graded differential (nice mode or asserted counts)"),
        ("contact-class", cmd_contact_class, "whether the contact generator is a total boundary"),
        ("order", cmd_order, "spectral order of the contact generator"),
    ):
        sp = add(name, fn, help)
        sp.add_argument("--counts", help="asserted counts file (overrides counts in a corpus entry)")
        sp.add_argument("--nice", action="store_true", help="ignore counts in a corpus entry; count polygons")
        if name == "order":
            sp.add_argument("--kmax", type=int, help=f"largest page index tried (env {KMAX_ENV})")
    sp = add("tensor-order", cmd_tensor_order, "spectral order of the tensor product of two complexes", input=False)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--counts-left")
    sp.add_argument("--counts-right")
    sp.add_argument("--kmax", type=int)
    sp = add("corpus", cmd_corpus, "run, list or write the encoded corpus", input=False)
    sp.add_argument("action", choices=["run", "list", "write"])
    sp.add_argument("names", nargs="*", help="entry names (run) or output directory (write)")
    sp.add_argument("--kmax", type=int)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        return _fail(args, exc.kind, str(exc), exc.code, exc.details)
    except _INPUT_ERRORS as exc:
        return _fail(args, type(exc).__name__, str(exc), EXIT_INPUT, {})


def _fail(args, kind: str, message: str, code: int, details: dict) -> int:
    err = {"error": {"type": kind, "message": message, **details}}
    if getattr(args, "json", False):
        print(json.dumps(err, indent=2, ensure_ascii=False))
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
