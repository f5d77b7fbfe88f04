import itertools
import json

import numpy as np
import pytest

from pfourier import DomainError, UnsupportedError
from pfourier.coeffs import (
    CoefficientBundle, DualFunctional, central_project, character_bundle, dual_pair, evaluate,
    evaluation_functional, indicator_identity, multiply, quotient_average, random_bundle, transform, values,
)
from pfourier.duals import SU2, catalog, parse_group

from conftest import ALL_FINITE


def brute_transform(g, f):
    """Oracle: direct sum (1/|G|) sum_s f(s) pi(s^-1) with plain numpy."""
    out = {}
    for lab in g.dual():
        acc = sum(f(s) * g.irrep(lab, g.inverse(s)) for s in g.elements()) / g.order
        out[lab] = acc
    return out


def test_transform_matches_brute_force(finite_group, rng):
    g = finite_group
    vals = rng.standard_normal(g.order) + 1j * rng.standard_normal(g.order)
    elems = g.elements()
    f = dict(zip(map(repr, elems), vals))
    u = transform(g, lambda s: f[repr(s)])
    ref = brute_transform(g, lambda s: f[repr(s)])
    for lab in g.dual():
        assert np.abs(u[lab] - ref[lab]).max() <= 1e-13


def test_round_trips(finite_group, rng):
    g = finite_group
    vals = rng.standard_normal(g.order) + 1j * rng.standard_normal(g.order)
    u = transform(g, vals)
    assert np.abs(values(u) - vals).max() <= 1e-12
    v = random_bundle(g, rng)
    assert transform(g, values(v)).max_diff(v) <= 1e-12


def test_indicator_identity_transform():
    g = catalog("S3")
    u = transform(g, lambda s: 1.0 if s == g.identity else 0.0)
    for lab in g.dual():
        assert np.allclose(u[lab], np.eye(lab.dim) / 6, atol=1e-15)
    assert u.max_diff(indicator_identity(g)) <= 1e-15


def test_constant_transform(finite_group):
    u = transform(finite_group, lambda s: 1.0).pruned(1e-14)
    assert [l.name for l in u.support] == ["triv" if not finite_group.descriptor.startswith("prod") else "(triv,triv)"]
    assert np.isclose(u[u.support[0]][0, 0], 1.0)


def test_matrix_coefficient_transform():
    g = catalog("S4")
    std = g.label("std")
    u = transform(g, lambda s: g.irrep(std, s)[0, 0]).pruned(1e-13)
    assert u.support == [std]
    e11 = np.zeros((3, 3))
    e11[0, 0] = 1 / 3
    assert np.abs(u[std] - e11).max() <= 1e-14


def test_transform_needs_finite_group():
    with pytest.raises(UnsupportedError):
        transform(SU2(3), lambda s: 1.0)


def test_evaluate_examples(rng):
    g = SU2(4)
    u = CoefficientBundle(g, {g.make_label(0): np.array([[2.5 - 1j]])})
    for s in g.sample(rng, 3):
        assert evaluate(u, s) == 2.5 - 1j
    u = CoefficientBundle(g, {g.make_label(2): np.eye(3)})
    th = 0.731
    assert np.isclose(evaluate(u, SU2.torus_element(th)), 3 * (np.exp(2j * th) + 1 + np.exp(-2j * th)))


def test_multiply_examples():
    z2 = catalog("Z/2")
    sgn = z2.label("sgn")
    u = CoefficientBundle(z2, {sgn: [[1.0]]})
    w = multiply(u, u)
    assert w.support == [z2.label("triv")] and np.isclose(w[z2.label("triv")][0, 0], 1)

    g = SU2(4)
    chi1 = character_bundle(g, g.make_label(1))
    w = multiply(chi1, chi1).pruned(1e-14)
    assert [l.key for l in w.support] == [0, 2]
    assert np.allclose(w[g.make_label(0)], 1)
    assert np.allclose(w[g.make_label(2)], np.eye(3) / 3)


def test_multiply_by_unit(rng):
    for desc in ("S4", "SU2:N=4", "prod(S3,Z/2)"):
        g = parse_group(desc)
        u = random_bundle(g, rng)
        one = CoefficientBundle(g, {g.trivial(): [[1.0]]})
        assert multiply(u, one).max_diff(u) <= 1e-13
        assert multiply(one, u).max_diff(u) <= 1e-13


@pytest.mark.parametrize("desc", ALL_FINITE)
def test_multiply_equals_pointwise(desc, rng):
    g = parse_group(desc)
    for _ in range(30):
        u = random_bundle(g, rng, density=0.6)
        v = random_bundle(g, rng, density=0.6)
        ref = transform(g, values(u) * values(v))
        assert multiply(u, v).max_diff(ref) <= 1e-10


def test_multiply_su2_pointwise(rng):
    g = SU2(6)
    xs = g.sample(rng, 30)
    for _ in range(10):
        u = random_bundle(g, rng, density=0.5)
        v = random_bundle(g, rng, density=0.5)
        w = multiply(u, v)
        for s in xs:
            assert abs(evaluate(w, s) - evaluate(u, s) * evaluate(v, s)) <= 1e-8


@pytest.mark.parametrize("desc", ["S3", "Q8", "SU2:N=3", "prod(S3,SU2:N=1)"])
def test_commutative_associative(desc, rng):
    g = parse_group(desc)
    for _ in range(5):
        u, v, w = (random_bundle(g, rng, density=0.7) for _ in range(3))
        assert multiply(u, v).max_diff(multiply(v, u)) <= 1e-9
        assert multiply(multiply(u, v), w).max_diff(multiply(u, multiply(v, w))) <= 1e-9


def test_multiply_group_mismatch(rng):
    with pytest.raises(DomainError):
        multiply(random_bundle(catalog("S3"), rng), random_bundle(catalog("S4"), rng))


def test_central_project_examples(rng):
    g = catalog("S3")
    std = g.label("std")
    e11 = np.diag([1.0, 0.0])
    assert np.allclose(central_project(CoefficientBundle(g, {std: e11}))[std], np.eye(2) / 2)
    c = random_bundle(g, rng, central=True)
    assert central_project(c).max_diff(c) == 0


def test_central_project_is_conjugation_average(finite_group, rng):
    g = finite_group
    u = random_bundle(g, rng)
    vals = dict(zip(map(repr, g.elements()), values(u)))

    def avg(s):
        return np.mean([vals[repr(g.multiply(g.multiply(t, s), g.inverse(t)))] for t in g.elements()])

    ref = transform(g, avg)
    assert central_project(u).max_diff(ref) <= 1e-12


def test_central_project_idempotent_and_expectation(rng):
    for desc in ("S4", "SU2:N=3"):
        g = parse_group(desc)
        u = random_bundle(g, rng)
        v = random_bundle(g, rng, central=True)
        pu = central_project(u)
        assert central_project(pu).max_diff(pu) <= 1e-14
        assert central_project(multiply(u, v)).max_diff(multiply(pu, v)) <= 1e-10


def test_quotient_average_examples(rng):
    g = catalog("S3")
    u = random_bundle(g, rng)
    q = quotient_average(u, "A3")
    assert np.abs(q[g.label("std")]).max() <= 1e-15
    for name in ("triv", "sgn"):
        assert np.allclose(q[g.label(name)], u[g.label(name)])
    assert quotient_average(u, "trivial").max_diff(u) <= 1e-15
    full = quotient_average(u, "whole").pruned(1e-14)
    assert full.support == [g.trivial()]


def test_quotient_average_oracle(rng):
    for desc, spec in (("S4", "V4"), ("A4", "V4"), ("Q8", "center"), ("D4", "rot")):
        g = parse_group(desc)
        sub = g.subgroup(spec)
        nel = [sub.embed(h) for h in sub.model.elements()]
        u = random_bundle(g, rng)
        vals = dict(zip(g.elements(), values(u)))
        ref = transform(g, lambda s: np.mean([vals[g.multiply(s, n)] for n in nel]))
        assert quotient_average(u, spec).max_diff(ref) <= 1e-12


def test_quotient_average_requires_normal(rng):
    g = catalog("S3")
    with pytest.raises(DomainError):
        quotient_average(random_bundle(g, rng), "gen:1")


def test_quotient_average_product_factor(rng):
    g = parse_group("prod(S3,Z/2)")
    u = random_bundle(g, rng)
    q = quotient_average(u, "factor:1")
    for lab in g.dual():
        kept = g.components(lab)[1].name == "triv"
        assert np.allclose(q[lab], u[lab] if kept else 0)


def test_dual_pair_examples(rng):
    for desc in ("S3", "SU2:N=4", "prod(Q8,Z/2)"):
        g = parse_group(desc)
        u = random_bundle(g, rng)
        for s in g.sample(rng, 3):
            assert np.isclose(dual_pair(u, evaluation_functional(g, s)), evaluate(u, s), atol=1e-12)
    g = catalog("S4")
    std = g.label("std")
    e11 = np.zeros((3, 3))
    e11[0, 0] = 1
    assert dual_pair(CoefficientBundle(g, {std: e11}), DualFunctional(g, {std: e11})) == 3
    s3 = catalog("S3")
    one_e = indicator_identity(s3)
    for s in s3.elements()[1:]:
        assert abs(dual_pair(one_e, evaluation_functional(s3, s))) <= 1e-15


def test_dual_pair_missing_entry():
    g = catalog("S3")
    u = CoefficientBundle(g, {g.label("std"): np.eye(2)})
    with pytest.raises(DomainError):
        dual_pair(u, DualFunctional(g, {g.label("triv"): [[1]]}))


def test_bundle_validation():
    g = catalog("S3")
    with pytest.raises(DomainError):
        CoefficientBundle(g, {g.label("std"): np.eye(3)})
    with pytest.raises(DomainError):
        CoefficientBundle(g, {SU2(2).make_label(1): np.eye(2)})


def test_canonical_order(rng):
    g = catalog("S4")
    labs = g.dual()
    u = CoefficientBundle(g, {lab: np.eye(lab.dim) for lab in reversed(labs)})
    assert u.support == labs


def test_json_round_trip(rng):
    for desc in ("S3", "SU2:N=3", "prod(S3,Z/2)", "T:k=2,N=1"):
        g = parse_group(desc)
        u = random_bundle(g, rng)
        text = json.dumps(u.to_json())
        v = CoefficientBundle.loads(text)
        assert v.group == g
        assert all(np.array_equal(u[l], v[l]) for l in g.dual())


def test_json_layout():
    g = catalog("S3")
    u = CoefficientBundle(g, {g.label("std"): np.array([[1, 2j], [3, 4]])})
    assert u.to_json() == {"group": "S3", "entries": [
        {"label": "std", "matrix": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]]}]}
