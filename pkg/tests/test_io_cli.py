import io
import json
import subprocess
import sys

import numpy as np
import pytest

from overlap_workbench.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_INPUT, EXIT_PASS, main
from overlap_workbench.errors import ParseError, ValidationError
from overlap_workbench.io import load_document, parse_document
from overlap_workbench.lattice import is_boolean

P2_CANON = {"kind": "oalgebra", "powerset": 2, "overlap": "canonical"}
CHAIN3 = {"kind": "lattice", "order": [[0, 1], [1, 2]], "size": 3}
M3 = {"kind": "lattice", "order": [[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4]], "size": 5}


def run(tmp_path, doc, *args):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc, encoding="utf-8")
    out = io.StringIO()
    code = main([*args, "--input", str(path)], stdout=out)
    return code, out.getvalue()


def json_lines(text):
    rows = [json.loads(line) for line in text.strip().splitlines()]
    return rows[:-1], rows[-1]["summary"]


# -- documents --------------------------------------------------------------


def test_parse_lattice_forms():
    a = parse_document({"kind": "lattice", "powerset": 2}).payload.lattice
    b = parse_document({"kind": "lattice", "order": [[0, 1], [0, 2], [1, 3], [2, 3]], "size": 4}).payload.lattice
    c = parse_document({"kind": "lattice", "leq": b.leq.tolist()}).payload.lattice
    assert is_boolean(a) and is_boolean(b) and np.array_equal(b.leq, c.leq)


def test_parse_overlap_forms():
    pairs = parse_document({"kind": "oalgebra", "powerset": 1, "overlap": [[1, 1]]}).payload.overlap
    canon = parse_document({"kind": "oalgebra", "powerset": 1, "overlap": "canonical"}).payload.overlap
    mat = parse_document({"kind": "oalgebra", "powerset": 1, "overlap": [[False, False], [False, True]]}).payload.overlap
    assert pairs == canon == mat


def test_parse_other_kinds():
    R = parse_document({"kind": "relation", "x_size": 1, "y_size": 2, "pairs": [[0, 0], [0, 1]]}).payload
    assert R.pairs == frozenset({(0, 0), (0, 1)})
    P = parse_document({"kind": "cover", "base_meet": [[0, 0], [0, 1]], "top": 1, "axioms": [[1, [0]]]}).payload
    assert P.k == 2
    leq = parse_document({"kind": "poset", "leq": [[True, False], [False, True]]}).payload
    assert leq.shape == (2, 2)
    src = {"powerset": 1}
    m = parse_document({"kind": "map", "source": src, "target": src, "table": [0, 1]}).payload[2]
    assert m.table == (0, 1)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"kind": "nope"}',
        '{"kind": "lattice"}',
        '{"kind": "lattice", "order": [[0, 5]], "size": 2}',
        '{"kind": "oalgebra", "powerset": 1}',
        '{"kind": "map", "source": {"powerset": 1}}',
        '{"kind": "relation", "x_size": "2", "y_size": 1}',
        '{"kind": "cover", "top": 0}',
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_document(text)


def test_structural_validation_error():
    with pytest.raises(ValidationError):
        load_document('{"kind": "lattice", "leq": [[true, true], [true, true]]}')


# -- check -------------------------------------------------------------------


def test_check_powerset_passes(tmp_path):
    code, out = run(tmp_path, P2_CANON, "check")
    assert code == EXIT_PASS
    assert "0 failed" in out


def test_check_chain_with_overlap_fails_with_density_witness(tmp_path):
    doc = dict(CHAIN3, kind="oalgebra", overlap=[[1, 1], [1, 2], [2, 2]])
    code, out = run(tmp_path, doc, "check", "--format", "json-lines")
    assert code == EXIT_FAIL
    verdicts, summary = json_lines(out)
    dens = next(v for v in verdicts if v["law"] == "density")
    assert not dens["passed"] and dens["witness"]
    assert summary["exit"] == EXIT_FAIL and summary["failed"] >= 1


def test_check_malformed_exits_2(tmp_path):
    code, out = run(tmp_path, '{"kind": "oalgebra", "powerset": 2', "check")
    assert code == EXIT_INPUT and "invalid input" in out
    code, _ = run(tmp_path, {"kind": "lattice", "leq": [[True, True], [True, True]]}, "check")
    assert code == EXIT_INPUT


def test_check_map(tmp_path):
    src = {"powerset": 1}
    code, _ = run(tmp_path, {"kind": "map", "source": src, "target": src, "table": [0, 1]}, "check")
    assert code == EXIT_PASS
    code, out = run(
        tmp_path, {"kind": "map", "source": src, "target": src, "table": [1, 1]}, "check", "--format", "json-lines"
    )
    verdicts, _ = json_lines(out)
    assert code == EXIT_FAIL
    assert all(not v["passed"] for v in verdicts)


def test_check_cover_and_poset(tmp_path):
    cover = {"kind": "cover", "base_meet": [[0, 0], [0, 1]], "top": 1, "axioms": [[1, [0]]], "names": ["s", "t"]}
    code, out = run(tmp_path, cover, "check")
    assert code == EXIT_PASS and "frame has 2 elements" in out
    code, out = run(tmp_path, {"kind": "poset", "leq": np.eye(2, dtype=bool).tolist()}, "check")
    assert code == EXIT_PASS and "4 normal cuts" in out


def test_check_lattice(tmp_path):
    assert run(tmp_path, M3, "check")[0] == EXIT_PASS


# -- search-overlap ------------------------------------------------------------


def test_search_overlap_boolean(tmp_path):
    code, out = run(tmp_path, {"kind": "lattice", "powerset": 3}, "search-overlap")
    assert code == EXIT_PASS
    assert "overlap 1" in out and "overlap 2" not in out and "canonical" in out


def test_search_overlap_m3(tmp_path):
    code, out = run(tmp_path, M3, "search-overlap")
    assert code == EXIT_PASS and "0 overlap relation(s)" in out


def test_search_overlap_trivial(tmp_path):
    code, out = run(tmp_path, {"kind": "lattice", "leq": [[True]]}, "search-overlap")
    assert code == EXIT_PASS and "(empty relation)" in out and "degenerate" in out


def test_search_overlap_budget(tmp_path):
    code, out = run(tmp_path, {"kind": "lattice", "powerset": 3}, "search-overlap", "--budget", "1")
    assert code == EXIT_BUDGET and "budget exceeded" in out


# -- relation ------------------------------------------------------------------


def test_relation_identity(tmp_path):
    doc = {"kind": "relation", "x_size": 2, "y_size": 2, "pairs": [[0, 0], [1, 1]]}
    code, out = run(tmp_path, doc, "relation")
    assert code == EXIT_PASS
    for name in ("R:", "R⁻:", "R*:", "R⁻*:"):
        assert name in out


def test_relation_json_laws(tmp_path):
    doc = {"kind": "relation", "x_size": 1, "y_size": 2, "pairs": [[0, 0], [0, 1]]}
    for direction in ("forward", "inverse"):
        code, out = run(tmp_path, doc, "relation", "--direction", direction, "--format", "json-lines")
        verdicts, summary = json_lines(out)
        assert code == EXIT_PASS
        assert [v["law"] for v in verdicts] == [
            "image_restriction_adjunction",
            "preimage_corestriction_adjunction",
            "image_preimage_symmetry",
        ]


def test_relation_wrong_kind(tmp_path):
    assert run(tmp_path, P2_CANON, "relation")[0] == EXIT_INPUT


def test_stdin_and_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "overlap_workbench.cli", "check", "--format", "json-lines"],
        input=json.dumps(P2_CANON),
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout.strip().splitlines()[-1])["summary"]["failed"] == 0


# -- corpus --------------------------------------------------------------------


def test_corpus_small():
    out = io.StringIO()
    assert main(["corpus", "--scale", "small"], stdout=out) == EXIT_PASS
    assert out.getvalue().count("[PASS]") == 11


def test_corpus_large_exceeds_budget():
    out = io.StringIO()
    assert main(["corpus", "--scale", "large", "--format", "json-lines"], stdout=out) == EXIT_BUDGET
    assert json_lines(out.getvalue())[1]["exit"] == EXIT_BUDGET
