"""Command-line interface: outputs, JSON mode and exit codes."""

from __future__ import annotations

import json

import pytest

from spectral_order.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, EXIT_PARTIAL, main
from spectral_order.corpus import entry_names, load_entry


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    return code, json.loads(out)


def test_order_of_the_finger_complex(capsys):
    code, out, _ = run(capsys, "order", "corpus:finger-complex")
    assert code == EXIT_OK
    assert "Finite(2)" in out


def test_order_of_asserted_counts_is_an_upper_bound(capsys):
    code, doc = run_json(capsys, "order", "corpus:finger-moves")
    assert code == EXIT_OK
    assert doc["display"] == "Finite(<= 2)"


def test_jplus_of_a_count_entry(capsys):
    code, doc = run_json(capsys, "jplus", "corpus:finger-moves", "--count", "D1")
    assert code == EXIT_OK
    assert doc["j_plus"] == 2 and doc["maslov"] == 1
    code, out, _ = run(capsys, "jplus", "corpus:figure-two", "--count", "0")
    assert code == EXIT_OK and "J+ = 2" in out


def test_jplus_with_inline_domain(capsys):
    code, doc = run_json(
        capsys, "jplus", "corpus:finger-moves", "--domain", "B3:1", "--from", "v1,v2,x3", "--to", "u1,v2,x3"
    )
    assert code == EXIT_OK and doc["j_plus"] == 0


def test_validate_good_and_corrupted(capsys, tmp_path):
    code, doc = run_json(capsys, "validate", "corpus:finger-moves")
    assert code == EXIT_OK and doc["ok"] and doc["genus"] == 3
    data = load_entry("finger-moves").diagram.to_json()
    data["regions"][1]["corners"][0]["quadrant"] = 3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == EXIT_CHECK
    assert "INVALID" in out


def test_build_writes_a_valid_diagram(capsys, tmp_path):
    ob = load_entry("tight-annulus").open_book.to_json()
    src, dst = tmp_path / "ob.json", tmp_path / "d.json"
    src.write_text(json.dumps(ob))
    code, out, _ = run(capsys, "build", str(src), "-o", str(dst))
    assert code == EXIT_OK and "wrote" in out
    code, doc = run_json(capsys, "validate", str(dst))
    assert code == EXIT_OK and doc["kind"] == "diagram" and doc["genus"] == 1


def test_generators_admissible_nice(capsys):
    code, doc = run_json(capsys, "generators", "corpus:overtwisted-annulus")
    assert code == EXIT_OK and doc["count"] == 3
    code, doc = run_json(capsys, "admissible", "corpus:family-2-3")
    assert code == EXIT_OK and doc["admissible"] is True
    code, doc = run_json(capsys, "nice", "corpus:family-2-3")
    assert code == EXIT_OK and doc["nice"] is False and len(doc["offending_regions"]) == 4


def test_domains_into_contact(capsys):
    code, doc = run_json(capsys, "domains", "corpus:overtwisted-annulus", "--from", "y1.1", "--to", "contact", "--index", "1")
    assert code == EXIT_OK
    assert doc["complete"] and [d["j_plus"] for d in doc["domains"]] == [0]


def test_partial_enumeration_exit_code(capsys, tmp_path):
    data = load_entry("trivial-annulus").open_book
    from spectral_order.openbook import build_heegaard_diagram

    d = build_heegaard_diagram(data).diagram.to_json()
    d["basepoints"] = []
    path = tmp_path / "nobase.json"
    path.write_text(json.dumps(d))
    code, doc = run_json(capsys, "domains", str(path), "--from", "x1", "--to", "x1", "--cap", "1")
    assert code == EXIT_PARTIAL
    assert doc["error"]["type"] == "partial"
    code, doc = run_json(capsys, "domains", str(path), "--from", "x1", "--to", "x1", "--cap", "1", "--allow-partial")
    assert code == EXIT_OK and doc["complete"] is False


def test_differential_and_contact_class(capsys):
    code, doc = run_json(capsys, "differential", "corpus:overtwisted-annulus")
    assert code == EXIT_OK and doc["source"] == "nice"
    code, doc = run_json(capsys, "contact-class", "corpus:finger-moves")
    assert code == EXIT_OK and doc["vanishes"] is True
    code, doc = run_json(capsys, "contact-class", "corpus:trivial-annulus")
    assert code == EXIT_OK and doc["vanishes"] is False


def test_nice_flag_refuses_non_nice_diagram(capsys):
    code, doc = run_json(capsys, "order", "corpus:family-2-3", "--nice")
    assert code == EXIT_INPUT
    assert "not nice" in doc["error"]["message"]


def test_kmax_option_and_environment(capsys, monkeypatch):
    code, doc = run_json(capsys, "order", "corpus:finger-complex", "--kmax", "1")
    assert code == EXIT_OK and doc["kind"] == "unresolved"
    monkeypatch.setenv("SPECTRAL_ORDER_KMAX", "1")
    code, doc = run_json(capsys, "order", "corpus:finger-complex")
    assert doc["kind"] == "unresolved"
    monkeypatch.setenv("SPECTRAL_ORDER_KMAX", "many")
    code, _, err = run(capsys, "order", "corpus:finger-complex")
    assert code == EXIT_INPUT and "error" in err


def test_tensor_order(capsys):
    code, doc = run_json(capsys, "tensor-order", "corpus:finger-complex", "corpus:trivial-annulus")
    assert code == EXIT_OK and doc["display"] == "Finite(2)" and doc["dim"] == 8


def test_corpus_subcommands(capsys, tmp_path):
    code, doc = run_json(capsys, "corpus", "list")
    assert code == EXIT_OK and "finger-moves" in doc["entries"]
    code, out, _ = run(capsys, "corpus", "run", "trivial-annulus", "finger-complex")
    assert code == EXIT_OK and "2/2 entries pass" in out
    code, doc = run_json(capsys, "corpus", "write", str(tmp_path / "c"))
    assert code == EXIT_OK and len(doc["written"]) == len(entry_names())


@pytest.mark.parametrize(
    "argv",
    [
        ["order", "corpus:no-such"],
        ["order", "/nonexistent/file.json"],
        ["jplus", "corpus:finger-moves", "--domain", "nonsense"],
        ["domains", "corpus:finger-moves", "--from", "zz", "--to", "contact"],
    ],
)
def test_input_errors_exit_two(capsys, argv):
    code, doc = run_json(capsys, *argv)
    assert code == EXIT_INPUT
    assert set(doc["error"]) >= {"type", "message"}


def test_not_json_input(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "validate", str(p))
    assert code == EXIT_INPUT and "not valid JSON" in err
