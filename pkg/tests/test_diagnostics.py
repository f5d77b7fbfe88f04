import math
from fractions import Fraction

import numpy as np
import pytest

from pfourier.diagnostics import (
    SU2_DATA, LieStructureData, arens_ratio, arens_ratio_scan, derivation_functional, derivation_norm,
    derivation_scan_su2, opalg_threshold, owa_region_su2, owa_scan_su2, polysum_ratio, su_n_data,
    table_summary, torus_owa_region, torus_owa_scan, wallach_partial_sums, wallach_threshold,
)
from pfourier.duals import SU2, catalog
from pfourier.errors import DomainError
from pfourier.matnorm import SchattenIndex, schatten
from pfourier.weights import constant_weight, dimension_weight


def test_derivation_functional_blocks():
    g = SU2(6)
    D = derivation_functional(g)
    for n in range(7):
        block = D.block(g.make_label(n))
        assert np.allclose(block, 1j * np.diag(np.arange(n, -n - 1, -2)))
        for s in (1, 2, 4, math.inf):
            idx = SchattenIndex.of(s)
            assert math.isclose(derivation_norm(n, idx), schatten(block, s), rel_tol=1e-13, abs_tol=1e-15)


def test_derivation_is_point_derivation(rng):
    # D(uv) = D(u) v(e) + u(e) D(v) for the derivative at the identity
    from pfourier.coeffs import dual_pair, evaluate, multiply, random_bundle

    g = SU2(4)
    D = derivation_functional(g)
    for _ in range(5):
        u, v = random_bundle(g, rng), random_bundle(g, rng)
        e = g.identity
        lhs = dual_pair(multiply(u, v), D)
        rhs = dual_pair(u, D) * evaluate(v, e) + evaluate(u, e) * dual_pair(v, D)
        assert abs(lhs - rhs) <= 1e-9 * max(1, abs(rhs))


def test_derivation_scan_examples():
    r = derivation_scan_su2(1, 1, 200)
    assert all(math.isclose(q, n / (n + 1), rel_tol=1e-14) for n, q in r.rows)
    assert r.verdict == "bounded"
    r = derivation_scan_su2(2, 0, 2000)
    assert abs(r.fitted_exponent - 1) <= 0.05 and r.verdict == "unbounded"
    r = derivation_scan_su2(2, 1.5, 2000)
    assert abs(r.fitted_exponent + 0.5) <= 0.05 and r.verdict == "bounded"


def test_scan_report_csv():
    r = derivation_scan_su2(1, 0, 5)
    text = r.to_csv(["seed=0"])
    lines = text.splitlines()
    assert lines[0] == "# seed=0"
    assert lines[1] == "n,quantity,running_sup"
    assert len(lines) == 2 + 5 + 1
    assert lines[-1].startswith("# {")
    assert "\r" not in text


def test_owa_scan_examples():
    assert owa_scan_su2(1, 0, 500).analytic_verdict == "unbounded"
    assert owa_scan_su2(2, 0, 500).analytic_verdict == "bounded"
    r = owa_scan_su2(Fraction(4, 3), 0, 10000)
    assert r.analytic_verdict == "bounded"
    # boundary: the sup stays below a constant
    assert r.sup < 1


@pytest.mark.parametrize("p", [1, Fraction(6, 5), Fraction(4, 3), Fraction(3, 2), 2, 3])
@pytest.mark.parametrize("alpha", [0, Fraction(1, 4), Fraction(1, 2)])
def test_owa_region(p, alpha):
    r = owa_scan_su2(p, alpha, 1000)
    assert (r.verdict == "unbounded") == owa_region_su2(p, alpha)
    assert r.verdict != "inconclusive"


def test_torus_scan_examples():
    assert torus_owa_scan("ap", 1, 0, 500).verdict == "unbounded"
    r = torus_owa_scan("ap", 2, 0, 500)
    assert r.verdict == "bounded" and r.sup < 1
    r = torus_owa_scan("rq", 2, 0, 500)
    assert r.verdict == "bounded"
    assert all(math.isclose(q, n / (n + 1)) for n, q in r.rows)
    with pytest.raises(DomainError):
        torus_owa_scan("zz", 2, 0, 10)


def test_torus_region_functions():
    assert torus_owa_region("ap", 1, 0)
    assert not torus_owa_region("ap", 2, 0)
    assert torus_owa_region("rq", "inf", 0)
    assert not torus_owa_region("rq", 2, 0)
    assert torus_owa_region("rq", 4, Fraction(1, 10))  # min(q,q') = 4/3 < 2/1.4
    assert not torus_owa_region("rq", 4, Fraction(1, 8))  # boundary


def test_arens_examples():
    g = SU2(30)
    w = dimension_weight(1)
    assert arens_ratio(g, w, g.make_label(1), g.make_label(1)) == 0.75
    t = arens_ratio_scan(g, constant_weight(), horizon=10)
    assert all(v == 1 for _, v in t.rows) and not t.decaying
    for alpha in (0.5, 1, 2):
        t = arens_ratio_scan(g, dimension_weight(alpha), horizon=30)
        for M, v in t.rows:
            assert math.isclose(v, ((2 * M + 1) / (M + 1) ** 2) ** alpha, rel_tol=1e-12)
        assert t.decaying


def test_arens_finite_group():
    t = arens_ratio_scan(catalog("S3"), dimension_weight(1))
    assert t.horizon == 3
    assert t.rows[0][1] == 1.0


def test_thresholds():
    assert wallach_threshold(SU2_DATA, 2) == Fraction(3, 2)
    assert opalg_threshold(1, SU2_DATA) == Fraction(3, 2)
    assert opalg_threshold(2, SU2_DATA) == 2
    assert opalg_threshold("inf", SU2_DATA) == Fraction(5, 2)
    for n in (2, 3, 5):
        for p in (1, "4/3", 2, "inf"):
            ic = SchattenIndex.of(p).inv_conj
            expect = (Fraction(1, 2) + ic / 2) * (n * n - 1) - ic / 2 * (n - 1)
            assert opalg_threshold(p, su_n_data(n)) == expect
            assert opalg_threshold(p, su_n_data(n)) == wallach_threshold(su_n_data(n), 2 + 2 * ic)
    with pytest.raises(DomainError):
        LieStructureData(1, 1, 1)


def test_wallach_partial_sums():
    thr = wallach_threshold(SU2_DATA, 2)
    r = wallach_partial_sums(SU2_DATA, 2, thr + Fraction(3, 10), 100000)
    assert r.verdict == "bounded"
    assert float(r.params["tail_increment"]) < 1e-6
    r = wallach_partial_sums(SU2_DATA, 2, thr - Fraction(3, 10), 100000)
    assert r.verdict == "unbounded" and r.fitted_exponent > 0.1
    with pytest.raises(DomainError):
        wallach_partial_sums(su_n_data(3), 2, 5, 10)


def riemann(s, m=200000):
    x = (np.arange(m) + 0.5) / m
    return np.mean(np.abs(1 - 2 * x) ** s) ** (1 / s)


def test_polysum_examples():
    assert math.isclose(polysum_ratio(2, 2), math.sqrt(8) / math.sqrt(27), rel_tol=1e-15)
    assert abs(polysum_ratio(5000, 1) - riemann(1)) < 1e-3
    assert abs(polysum_ratio(5000, 2) - riemann(2)) < 1e-3
    with pytest.raises(DomainError):
        polysum_ratio(0, 1)


@pytest.mark.parametrize("s", [1, 2, 4])
def test_polysum_band(s):
    lim = (s + 1) ** (-1 / s)
    for n in list(range(10, 200)) + list(range(200, 5001, 97)) + [5000]:
        v = polysum_ratio(n, s)
        assert 0.9 * lim <= v <= 1.1


def test_table_summary():
    rows = table_summary([1, 2], [0, 1], SU2(4), N=400)
    byk = {(r["p"], r["alpha"]): r for r in rows}
    assert byk[("1", "0")]["derivation"] == "unbounded" and byk[("1", "0")]["owa"] == "yes"
    assert byk[("2", "1")]["derivation"] == "bounded"
    rows = table_summary([1, 2, "inf"], [0], catalog("S3"))
    assert rows[0]["diagonal_norm"] == "1.00000000000"
    assert all(r["diagonal_norm"] for r in rows)
    with pytest.raises(DomainError):
        table_summary([], [0], SU2(2))
