"""End-to-end acceptance run: every criterion at default scale within its time bound.

Each test prints one ``[PASS]``/``[FAIL]`` line, so the summary is readable in
``pytest -v`` output without ``-s``.
"""
import pytest

from overlap_workbench.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"c{c[0]}-{c[1].replace(' ', '_')}" for c in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number, "default")
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    assert result.elapsed < result.bound


if __name__ == "__main__":
    import sys

    from overlap_workbench.acceptance import run_all

    results = run_all(sys.argv[1] if len(sys.argv) > 1 else "default")
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
