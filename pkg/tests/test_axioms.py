import random
import re

import pytest

from difflambda import axioms
from difflambda.mrel import (
    FinMultiset,
    FinRel,
    GenParams,
    Product,
    differential,
    mpair,
    random_atoms,
    random_rel,
)

LINE = re.compile(r"^AXIOM (\S+) (PASS|FAIL) trials=(\d+)$")


def test_every_law_passes_briefly():
    results = axioms.check_axioms(seed=3, trials=40)
    assert [r.name for r in results] == list(axioms.LAWS)
    assert all(r.passed for r in results), axioms.format_report(results)


def test_report_format():
    results = axioms.check_axioms(seed=1, trials=5, names=["D1", "sw"])
    lines = axioms.format_report(results).splitlines()
    assert [LINE.match(x).groups() for x in lines] == [("D1", "PASS", "5"), ("sw", "PASS", "5")]


def test_runs_are_reproducible():
    a = axioms.check_axioms(seed=9, trials=10, names=["main1-i"])
    b = axioms.check_axioms(seed=9, trials=10, names=["main1-i"])
    assert a == b


def test_generator_parameters_are_used():
    p = GenParams(atoms=(2, 2), mset=(0, 0), rel=(0, 0))
    results = axioms.check_axioms(seed=0, trials=10, params=p, names=["D2", "Taylor"])
    assert all(r.passed for r in results)


def _broken_differential(f: FinRel) -> FinRel:
    # forgets to remove the linear element from the context
    pairs = {(mpair(FinMultiset((a,)), m), b) for m, b in f.pairs for a in m.distinct()}
    return FinRel(Product(f.source, f.source), f.target, frozenset(pairs))


def test_mutated_differential_is_caught(monkeypatch):
    monkeypatch.setattr(axioms, "differential", _broken_differential)
    names = ["D1", "D2", "D3", "D4", "D5", "D6", "D7", "D-curry", "D-eval"]
    results = axioms.check_axioms(seed=0, trials=100, names=names)
    failed = [r for r in results if not r.passed]
    assert {r.name for r in failed} == {"D3", "D5", "D6", "D-eval"}
    report = axioms.format_report(failed)
    assert "counterexample (trial" in report and "lhs = " in report and "rhs = " in report


def test_broken_differential_really_differs():
    a = GenParams()
    rng = random.Random(0)
    x, y = random_atoms(rng, "a", a), random_atoms(rng, "b", a)
    seen = False
    for _ in range(50):
        f = random_rel(rng, x, y, a)
        seen |= differential(f) != _broken_differential(f)
    assert seen


def test_unknown_law():
    with pytest.raises(KeyError):
        axioms.check_axioms(names=["D99"], trials=1)
