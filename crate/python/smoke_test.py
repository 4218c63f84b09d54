"""Smoke test for the pypofcount extension.

Build and stage the module first:

    cargo build --release -p pypofcount --features extension-module
    cp target/release/libpypofcount.so python/pypofcount.so
    python3 python/smoke_test.py
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

import pypofcount as pc  # noqa: E402

FIXTURES = HERE.parent / "fixtures"


def check_expression():
    e = pc.Expression("a | (b & c)")
    assert e.variables == ["a", "b", "c"]
    r = e.count()
    assert r.status == "complete" and r.count == 5, r
    assert r.count == e.oracle_count()

    wide = pc.Expression("a | b", scope=["a", "b", "c", "d"])
    assert wide.count().count == 12

    assert e.count(assume=["!a"]).count == 1
    contradiction = e.count(assume=["a", "-a"])
    assert contradiction.count == 0 and contradiction.trivially_inconsistent

    models = pc.Expression("a | b").models(2)
    assert models == [{"a": False, "b": True}, {"a": True, "b": False}], models

    equiv = e.to_cnf("equiv")
    assert len(equiv.clauses) == 7 and equiv.aux_count == 2
    assert equiv.dimacs().startswith("p cnf 5 7")
    assert pc.Expression("true").to_cnf().dimacs() == "p cnf 0 0\n"


def check_random_agreement():
    rng = random.Random(7)
    for _ in range(50):
        names = [f"x{i}" for i in range(rng.randint(1, 10))]
        clauses = []
        for _ in range(rng.randint(1, 12)):
            lits = [("!" if rng.random() < 0.5 else "") + rng.choice(names) for _ in range(3)]
            clauses.append("(" + " | ".join(lits) + ")")
        e = pc.Expression(" & ".join(clauses), scope=names)
        assert e.count().count == e.oracle_count(), str(e)


def check_limits():
    big = " & ".join(f"(v{i} | v{i + 1} | !v{i + 2})" for i in range(300))
    e = pc.Expression(big)
    r = e.count(options=pc.CounterOptions(node_limit=5))
    assert r.status == "memory_limit" and r.count is None, r
    try:
        e.oracle_count()
    except pc.PofcountError as exc:
        assert "refused" in str(exc) or "variables" in str(exc), exc
    else:
        raise AssertionError("oracle accepted 302 variables")
    try:
        pc.CounterOptions(heuristic="best")
    except ValueError:
        pass
    else:
        raise AssertionError("bad heuristic accepted")


def check_documentation():
    doc = pc.Documentation.from_file(str(FIXTURES / "toy.pof"))
    total = doc.total().count
    assert total == doc.formula().oracle_count()
    assert total == 16

    freq = doc.frequency("e1")
    assert Fraction(freq["numerator"], freq["denominator"]) == Fraction(3, 8)
    assert freq["decimal"] == "0.375"

    # Frequencies of a code and its absence reconstruct the total.
    for code in doc.codes:
        f = doc.frequency(code)
        with_code = doc.formula().count(assume=[code]).count
        assert f["numerator"] == with_code and f["denominator"] == total

    refused = doc.order(["e1", "e2"])
    assert not refused["constructible"] and refused["violated"]
    ok = doc.order(["e3", "g1"])
    assert ok["constructible"] and "a2" in ok["supplemented"], ok

    trim = doc.parts("trim")
    assert trim["errors"] == 1
    assert any(err for *_, err in trim["overlaps"])
    assert doc.parts("gearbox")["errors"] == 0

    assert doc.is_redundant("e1 -> g1")
    assert not doc.is_redundant("!a1")

    other = pc.Documentation.from_file(str(FIXTURES / "toy_no_a1.pof"))
    report = doc.compare(other, ["a1"])
    assert report["status"] == "complete"
    assert Fraction(report["ratio"]["numerator"], report["ratio"]["denominator"]) == Fraction(
        report["first"], report["second"]
    )

    try:
        pc.Documentation("codes: a\nsr: b -> a\n")
    except pc.PofcountError:
        pass
    else:
        raise AssertionError("undeclared code accepted")


def main():
    check_expression()
    check_random_agreement()
    check_limits()
    check_documentation()
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
