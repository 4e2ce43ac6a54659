import json
import subprocess
import sys

import pytest

from shapefrag.cli import run
from shapefrag.rdf import parse_ntriples

from conftest import DATA

D = str(DATA)
AUTHORS = ["--data", f"{D}/authors.ttl", "--shapes", f"{D}/authors.shapes", "--arbitrary-targets"]
WORKSHOP = ["--data", f"{D}/workshop.ttl", "--shapes", f"{D}/workshop_shapes.ttl"]


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_nnf(capsys):
    assert call(capsys, "nnf", "--shape-expr", "not (leq 0 :p top)") == (0, "geq 1 :p top\n", "")
    code, out, _ = call(capsys, "nnf", "--shape-expr", "not (forall :p (not bot))")
    assert (code, out) == (0, "geq 1 :p bot\n")


def test_authors_fragment(capsys):
    code, out, _ = call(capsys, "fragment", *AUTHORS)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4 and lines == sorted(lines)
    assert "<http://example.org/p1> <http://example.org/auth> <http://example.org/Anne> ." in lines


def test_authors_needs_arbitrary_targets(capsys):
    code, _, err = call(capsys, "fragment", *AUTHORS[:-1])
    assert code == 2 and "error:" in err


def test_leq_zero_request_is_empty(capsys):
    code, out, _ = call(
        capsys, "fragment", "--data", f"{D}/leq_zero.ttl", "--request-shapes", f"{D}/leq_zero.request"
    )
    assert (code, out) == (0, "")


def test_workshop_validate_and_fragment(capsys):
    code, out, _ = call(capsys, "validate", *WORKSHOP)
    assert code == 1 and "http://example.org/p2" in out
    code, out, _ = call(capsys, "validate", *WORKSHOP, "--format", "json")
    assert code == 1 and json.loads(out)["conforms"] is False
    code, out, _ = call(capsys, "fragment", *WORKSHOP)
    assert code == 0 and len(out.splitlines()) == 3


def test_person_validates(capsys):
    code, _, _ = call(capsys, "validate", "--data", f"{D}/person.ttl", "--shapes", f"{D}/person_shapes.ttl")
    assert code == 0


def test_neighborhood(capsys):
    code, out, _ = call(capsys, "neighborhood", *AUTHORS, "--node", ":p1", "--shape", ":phi2")
    assert code == 0
    assert len(out.splitlines()) == 2  # target conjunct not included: auth Bob, Bob type student


def test_runs_are_byte_identical(capsys, tmp_path):
    first = call(capsys, "fragment", *WORKSHOP, "--threads", "3")[1]
    second = call(capsys, "fragment", *WORKSHOP)[1]
    assert first == second


def test_out_and_sidecar(capsys, tmp_path):
    out, side = tmp_path / "f.nt", tmp_path / "f.json"
    code, stdout, _ = call(capsys, "fragment", *AUTHORS, "--out", str(out), "--sidecar", str(side))
    assert (code, stdout) == (0, "")
    assert len(parse_ntriples(out.read_text())) == 4
    assert json.loads(side.read_text())["fragmentSize"] == 4


def test_to_sparql(capsys):
    code, out, _ = call(capsys, "to-sparql", "--shapes", f"{D}/workshop_shapes.ttl")
    assert code == 0 and out.startswith("SELECT ?s ?p ?o")
    code, out, _ = call(
        capsys, "to-sparql", "--shapes", f"{D}/workshop_shapes.ttl", "--mode", "conformance",
        "--shape", ":WorkshopShape",
    )
    assert code == 0 and out.startswith("SELECT ?v")
    assert call(capsys, "to-sparql", "--shapes", f"{D}/workshop_shapes.ttl", "--mode", "conformance")[0] == 2


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["validate", "--data", f"{D}/workshop.ttl"],
    ["validate", "--data", f"{D}/missing.ttl", "--shapes", f"{D}/workshop_shapes.ttl"],
    ["validate", "--data", f"{D}/authors.shapes", "--shapes", f"{D}/workshop_shapes.ttl"],
    ["validate", "--data", f"{D}/workshop.ttl", "--shapes", f"{D}/workshop.unknown"],
    ["fragment", "--data", f"{D}/workshop.ttl"],
    ["fragment", *WORKSHOP, "--threads", "0"],
    ["nnf", "--shape-expr", "geq x :p top"],
    ["neighborhood", *WORKSHOP, "--node", ":p1", "--shape", ":Nope"],
])
def test_usage_and_parse_errors_exit_2(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_recursive_schema_exits_3(capsys, tmp_path):
    f = tmp_path / "rec.shapes"
    f.write_text("def :a = hasShape :b\ndef :b = not (hasShape :a)\n")
    code, _, err = call(capsys, "validate", "--data", f"{D}/workshop.ttl", "--shapes", str(f))
    assert code == 3 and "error:" in err


def test_stdin_data_via_subprocess():
    text = (DATA / "workshop.ttl").read_text()
    proc = subprocess.run(
        [sys.executable, "-m", "shapefrag.cli", "fragment", "--data", "-", "--shapes", f"{D}/workshop_shapes.ttl"],
        input=text, capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert len(proc.stdout.splitlines()) == 3


def test_endpoint_diff(capsys, sparql_endpoint):
    query_url, update_url = sparql_endpoint
    code, out, err = call(
        capsys, "endpoint-diff", *AUTHORS, "--endpoint", query_url, "--update-endpoint", update_url
    )
    assert (code, out) == (0, "Equal\n"), err


def test_endpoint_diff_unreachable(capsys):
    code, _, err = call(
        capsys, "endpoint-diff", *AUTHORS, "--endpoint", "http://127.0.0.1:9/sparql", "--timeout", "2"
    )
    assert code == 2 and "error:" in err
