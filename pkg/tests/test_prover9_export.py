import shutil
import subprocess
from pathlib import Path

import pytest

from obfusbench.fol import (
    Problem, RewriteRule, apply_rewrite, export_equivalence, export_problem, parse_formula,
)

GOLDEN = Path(__file__).parent / "golden"

HUMANS = parse_formula("forall x. (Human(x) -> Mammal(x))")
PROBLEM = Problem((HUMANS, parse_formula("Human(bonnie)")), parse_formula("Mammal(bonnie)"))


def test_problem_matches_golden_bytes():
    assert export_problem(PROBLEM).encode() == (GOLDEN / "humans_mammals.in").read_bytes()


def test_equivalence_goal_matches_golden_bytes():
    g = apply_rewrite(RewriteRule("QuantifierDuality"), HUMANS)
    assert export_equivalence(HUMANS, g).encode() == (GOLDEN / "humans_mammals_equiv.in").read_bytes()


def test_constants_that_look_like_variables_switch_to_prolog_style():
    text = export_problem(Problem((parse_formula("Likes(xavier)"),), parse_formula("Likes(xavier)")))
    assert text.startswith("set(prolog_style_variables).\n\nformulas(assumptions).\n")


@pytest.mark.skipif(shutil.which("prover9") is None, reason="prover9 not on PATH")
def test_live_prover9_proves_golden(tmp_path):
    for name in ("humans_mammals.in", "humans_mammals_equiv.in"):
        out = subprocess.run(["prover9", "-f", str(GOLDEN / name)], capture_output=True, text=True)
        assert "THEOREM PROVED" in out.stdout
