import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diffgeo.errors import DomainError, InvariantError
from diffgeo.families import exp_inverse_map, mobius_compose_param, mobius_inverse_param
from diffgeo.funcspace import SmoothFunction, grid, sup_norm
from diffgeo.interval import (
    IntervalDiffeo,
    Phi,
    PhiCoords,
    compose,
    dk,
    from_family,
    from_phi1,
    from_Phi,
    identity,
    invert,
    phi,
    phi1_from_Phi,
    rho,
)

N = 512

# int_0^x exp(F) / int_0^1 exp(F) for F = 0.7 x sin(pi x), 30-digit quadrature
BUMP_VALUES = {0.25: 0.206998397175800575537522607, 0.5: 0.459607214270706930867493378, 0.75: 0.752157427342418489291294114}
BUMP_SUP = 0.405461229149563700651593288  # max of F, attained at x = 0.64577...


def bump():
    return SmoothFunction(
        lambda x, m: np.array([
            0.7 * x * np.sin(np.pi * x),
            0.7 * (np.sin(np.pi * x) + np.pi * x * np.cos(np.pi * x)),
            0.7 * (2 * np.pi * np.cos(np.pi * x) - np.pi**2 * x * np.sin(np.pi * x)),
            0.7 * (-3 * np.pi**2 * np.sin(np.pi * x) - np.pi**3 * x * np.cos(np.pi * x)),
        ][: m + 1]),
        max_order=3,
        name="bump",
    )


def test_invariants_enforced():
    good = identity(1, 16).jets.copy()
    bad = good.copy()
    bad[0, -1] = 0.999
    with pytest.raises(InvariantError):
        IntervalDiffeo(bad)
    bad = good.copy()
    bad[1, 3] = 0.0
    with pytest.raises(InvariantError):
        IntervalDiffeo(bad)


def test_from_family_validation():
    with pytest.raises(DomainError):
        from_family("mobius", -1.5)
    with pytest.raises(DomainError):
        from_family("nope", 1.0)
    with pytest.raises(DomainError):
        from_family("exp", (1.0, 2.0))
    assert np.array_equal(from_family("exp", 0.0, 2, 32).jets, identity(2, 32).jets)


def test_json_round_trip_is_exact():
    f = from_family("exp", 1.5, 2, 32)
    text = json.dumps(f.to_dict())
    g = IntervalDiffeo.from_dict(json.loads(text))
    assert np.array_equal(f.jets, g.jets)
    assert json.dumps(g.to_dict()) == text


def test_phi_of_exp_family():
    f = from_family("exp", 2.0, 4, N)
    assert np.allclose(phi(f, 1).values, 2.0 * f.nodes, atol=1e-14)
    assert np.allclose(phi(f, 2).values, 2.0, atol=1e-12)
    assert np.allclose(phi(f, 3).values, 0.0, atol=1e-10)
    assert np.allclose(phi(f, 4).values, 0.0, atol=1e-9)


@pytest.mark.parametrize("t", [-0.6, 0.5, 3.0])
def test_phi_of_mobius_family(t):
    f = from_family("mobius", t, 3, N)
    q = 1 + t * f.nodes
    assert np.allclose(phi(f, 1).values, -2 * np.log(q), atol=1e-13)
    assert np.allclose(phi(f, 2).values, -2 * t / q, atol=1e-11)
    assert np.allclose(phi(f, 3).values, 2 * t**2 / q**2, atol=1e-9)


@pytest.mark.parametrize("a", [-3.0, -0.5, 1.0, 3.0])
def test_exp_distances(a):
    f, e = from_family("exp", a, 3, N), identity(3, N)
    for k in (1, 2, 3):
        assert dk(f, e, k) == pytest.approx(abs(a), abs=1e-8)


@pytest.mark.parametrize("t", [-0.6, 0.5, 3.0])
def test_mobius_distances(t):
    f, e = from_family("mobius", t, 3, N), identity(3, N)
    assert dk(f, e, 1) == pytest.approx(2 * abs(np.log1p(t)), abs=1e-10)
    assert dk(f, e, 2) == pytest.approx(2 * abs(t) / min(1.0, 1.0 + t), rel=1e-9)
    assert dk(f, e, 3) == pytest.approx(max(2 * t**2 / min(1.0, 1.0 + t) ** 2, 2 * abs(t)), rel=1e-8)


def test_from_phi1_against_quadrature_oracle():
    f = from_phi1(bump(), 2, N)
    for x, v in BUMP_VALUES.items():
        assert f(x)[0] == pytest.approx(v, abs=1e-12)
    assert dk(f, identity(2, N), 1) == pytest.approx(BUMP_SUP, abs=1e-8)
    # refined sup beats the node-wise one on an off-grid peak
    assert sup_norm(phi(f, 1)) < BUMP_SUP


def test_Phi_round_trip_with_initial_values():
    f = from_family("mobius", 1.2, 4, N)
    c = Phi(f, 4)
    assert len(c.initial_values) == 2
    assert c.initial_values[-1] == pytest.approx(-2.4)
    g = from_Phi(c, 4)
    assert np.max(np.abs(g.jets[:3] - f.jets[:3])) < 1e-8
    assert np.max(np.abs(phi1_from_Phi(c).values - phi(f, 1).values)) < 1e-9


def test_PhiCoords_validation():
    head = phi(identity(2, 16), 1)
    with pytest.raises(InvariantError):
        PhiCoords(3, head, ())
    with pytest.raises(InvariantError):
        PhiCoords(1, head + 1.0)


def test_compose_matches_mobius_group_law():
    s, t = 0.8, -0.3
    got = compose(from_family("mobius", s, 3, N), from_family("mobius", t, 3, N))
    want = from_family("mobius", mobius_compose_param(s, t), 3, N)
    assert np.max(np.abs(got.jets[:3] - want.jets[:3])) < 1e-9


def test_invert_against_closed_forms():
    f = from_family("exp", 3.0, 4, N)
    g = invert(f)
    want = exp_inverse_map(3.0).jet(grid(N), 4)
    rel = np.abs(g.jets - want) / (1 + np.abs(want))
    assert np.max(rel) < 1e-9
    m = invert(from_family("mobius", 2.0, 3, N))
    want = from_family("mobius", mobius_inverse_param(2.0), 3, N).jets
    assert np.max(np.abs(m.jets - want) / (1 + np.abs(want))) < 1e-8


def test_metric_order_checks():
    f = from_family("exp", 1.0, 1, 32)
    with pytest.raises(DomainError):
        rho(f, f, 2)
    with pytest.raises(DomainError):
        dk(f, f, 2)


def test_rho_exp():
    f, e = from_family("exp", 1.0, 2, N), identity(2, N)
    x = f.nodes
    want = np.max(np.abs(f.values - x)) + np.max(np.abs(f.jets[1] - 1)) + np.max(np.abs(f.jets[2]))
    assert rho(f, e, 2) == pytest.approx(want, rel=1e-14)


params = st.sampled_from(["exp", "mobius"]).flatmap(
    lambda name: st.tuples(st.just(name), st.floats(-3, 3) if name == "exp" else st.floats(-0.7, 3))
)


@given(params)
def test_group_inverse_round_trip(p):
    f = from_family(p[0], p[1], 2, 256)
    h = compose(f, invert(f))
    assert np.max(np.abs(h.jets[:2] - identity(2, 256).jets[:2])) < 1e-8


@given(params, params)
def test_d1_is_right_invariant(p, q):
    f, h = from_family(*p, 1, 256), from_family(*q, 1, 256)
    g = from_family("mobius", 0.4, 1, 256)
    assert abs(dk(compose(f, h), compose(g, h), 1) - dk(f, g, 1)) < 1e-8


@given(params, st.integers(2, 4))
def test_lower_order_distance_bound(p, k):
    f, e = from_family(*p, k, 256), identity(k, 256)
    assert dk(f, e, k - 1) <= 2 * dk(f, e, k) + 1e-8


@given(params, st.floats(0.1, 2.0))
def test_derivative_bounds_from_d1(p, delta):
    f = from_family(*p, 1, 256)
    d = dk(f, identity(1, 256), 1)
    if d <= delta:
        assert np.all(f.jets[1] >= np.exp(-2 * delta) - 1e-12)
        assert np.all(f.jets[1] <= np.exp(2 * delta) + 1e-12)
