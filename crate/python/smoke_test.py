"""Smoke test for the compiled `wallcross` module (build with maturin first)."""

from fractions import Fraction

import wallcross


def test_coefficients():
    assert wallcross.s_coeff("[1,0];[0,1]", "trivial", "slope c=1,0 r=1,1") == -1
    assert wallcross.u_coeff("[1,0];[0,1]", "slope c=1,0 r=1,1", "slope c=0,1 r=1,1") == 1
    assert wallcross.v_coeff("1>2", "[1,0];[0,1]", "slope c=1,0 r=1,1", "slope c=0,1 r=1,1") == Fraction(1, 4)


def test_quivers():
    k = wallcross.quiver_invariants("kronecker", [1, 1], "slope c=1,0 r=1,1", eval_at=[2, 3])
    assert k["iss"] == "(ℓ+1)/(ℓ-1)"
    assert k["values"] == {2: 3, 3: 2}
    v = wallcross.quiver_invariants("one-vertex", [2], eval_at=[2])
    assert v["omega"] == Fraction(-1, 4)
    assert v["values"][2] == Fraction(1, 6)


def test_curves():
    assert wallcross.coprime_poincare(2, 2, 1) == [1, 0, 1, 4, 1, 0, 1]
    s = wallcross.curve_series(2, 1, 0, floor=-2)
    assert s == {2: 1, 1: 4, 0: 7, -1: 8, -2: 8}
    try:
        wallcross.coprime_poincare(2, 2, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("non-coprime input accepted")


def test_checks():
    rows = wallcross.run_checks("quiver")
    assert rows and all(r["passed"] for r in rows)


if __name__ == "__main__":
    for name, f in list(globals().items()):
        if name.startswith("test_"):
            f()
    print("smoke test passed")
