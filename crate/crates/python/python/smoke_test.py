"""Smoke test for the conftc_py extension module."""

import pathlib

import conftc_py as ct

ROOT = pathlib.Path(__file__).resolve().parents[3]

ring = ct.RingSpec(3, 3)
assert str(ring.element("A[3,2]*A[3,1]")) == "A[3,2]*A[2,1] - A[3,1]*A[2,1]"
a, b = ring.generator(3, 2), ring.generator(3, 1)
assert str(a * b) == "A[3,2]*A[2,1] - A[3,1]*A[2,1]"
assert (a * a).is_zero()
assert ring.dimension() == 6

punctured = ct.RingSpec(2, 2, 2)
assert punctured.coeff == "mod2"
assert len(punctured.basis(1)) == 5

assert ct.reduce("(A[2,1]@1 - A[2,1]@2)^2", 3, 2) == "-2*A[2,1]@1*A[2,1]@2"
assert ct.tc_s(2, 2, 2, 2) == (4, "otherwise")
assert ct.cl_s_conf(3, 2, 2) == 2
assert ct.cat_conf(3, 4, 0) == 3

record = ct.certify("nu_s", 2, 2, p=2, s=2)
assert record["lower_bound"] == 4 and record["product_terms"] == 4

assert ct.brute_force_zcl(2, 2, s=3) == ct.cl_s_conf(2, 2, 3)

try:
    ct.reduce("A[1,2]", 3, 3)
except ValueError as err:
    assert "j < i" in str(err)
else:
    raise AssertionError("invalid atom accepted")

planned = ct.plan(str(ROOT / "instances" / "segment_revisit.toml"))
assert planned["path"][0] == [[-1.0, 0.0]]
assert planned["path"][50] == [[1.0, 0.0]]
assert planned["min_clearance"] > 0.05

print("python smoke test passed")
