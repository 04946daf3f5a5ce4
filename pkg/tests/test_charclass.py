"""Characteristic pairs, sphere bundles, and the signature integral."""

from fractions import Fraction

import pytest

from emfd.charclass import (
    Bundle3Data,
    build_sphere_bundle,
    chi,
    cobordism_order,
    hirzebruch_signature,
    normal_sphere_chi,
    phi,
    rank_one_base,
    xi,
)
from emfd.cohomring import (
    CohomModel,
    ModelError,
    cp2,
    sphere4,
    synthetic_four_manifold,
    t3_x_s3,
)
from emfd.exactlin import signature
from emfd.rng import DEFAULT_SEED, Lcg


def _u0():
    base = cp2()
    return Bundle3Data(base, base.element(4, {}), 1)


def _u1():
    base = cp2()
    return Bundle3Data(base, base.element(4, {"h2": 1}), 1)


# -- signature integral ------------------------------------------------------------


def test_signature_integral_frozen_values():
    assert hirzebruch_signature(cp2()) == 1
    assert hirzebruch_signature(sphere4()) == 0
    assert hirzebruch_signature(cp2().reversed_orientation()) == -1


def test_signature_integral_guards():
    with pytest.raises(ModelError):
        hirzebruch_signature(t3_x_s3())      # not 4-dimensional
    no_tangent = synthetic_four_manifold("x", [[1]])
    with pytest.raises(ModelError):
        hirzebruch_signature(no_tangent)


def test_rank_one_base():
    for s in (-3, 0, 5):
        base = rank_one_base(s)
        assert hirzebruch_signature(base) == s
        assert list(base.all_labels()) == ["1", "v"]


# -- bundle data --------------------------------------------------------------------


def test_bundle_data_guards():
    base = cp2()
    with pytest.raises(ModelError):
        Bundle3Data(t3_x_s3(), t3_x_s3().element(4, {}), 0)
    with pytest.raises(ModelError):
        Bundle3Data(base, base.element(2, {"h": 1}), 1)   # wrong degree
    with pytest.raises(ModelError):
        Bundle3Data(base, base.element(4, {}), Fraction(1, 2))
    with pytest.raises(ModelError, match="contradicts"):
        Bundle3Data(base, base.element(4, {}), 2)         # Sign cp2 = 1


def test_xi_fixture_values():
    assert xi(_u0()) == (1, 0)
    assert xi(_u1()) == (1, 1)


# -- sphere bundle structure ---------------------------------------------------------


def test_sphere_bundle_ring():
    data = _u1()
    sb = build_sphere_bundle(data)
    assert sb.total.dim == 6
    eF = sb.euler_class
    # eF^2 is the pulled-back p1 of the bundle
    assert eF * eF == sb.pullback(data.p1E)
    # fiber integration: pullbacks die, pullback*eF doubles
    h = data.base.basis_element("h")
    assert sb.gysin(sb.pullback(h)).is_zero()
    assert sb.gysin(sb.pullback(h) * eF) == 2 * h
    # the antipodal involution fixes pullbacks and negates eF
    assert sb.tau(eF) == -1 * eF
    assert sb.tau(sb.pullback(h)) == sb.pullback(h)
    # total-space integral doubles the base integral against eF
    v = data.base.basis_element("h2")
    assert sb.total.integrate(sb.pullback(v) * eF) == 2


def test_sphere_bundle_tangent_class():
    data = _u1()
    sb = build_sphere_bundle(data)
    expected = sb.pullback(data.base.tangent_p1 + data.p1E)
    assert sb.total.tangent_p1 == expected


# -- the characteristic pair ---------------------------------------------------------


def test_chi_fixture_values():
    for data, expected in ((_u0(), (1, 0)), (_u1(), (1, 1))):
        sb = build_sphere_bundle(data)
        assert chi(sb.total, sb.euler_class) == expected


def test_chi_guards():
    m = t3_x_s3()
    with pytest.raises(ModelError):
        chi(cp2(), cp2().basis_element("h"))   # not 6-dimensional
    with pytest.raises(ModelError):
        chi(m, m.element(4, {}))               # e must be degree 2
    stripped = CohomModel("w", 6, m.basis, m.products, m.integral)  # no tangent_p1
    with pytest.raises(ModelError):
        chi(stripped, stripped.element(2, {}))


def test_chi_of_exterior_model_vanishes():
    m = t3_x_s3()
    e = m.element(2, {"t1t2": 1, "t1t3": 2, "t2t3": -1})
    assert chi(m, e) == (0, 0)      # e^2 = 0: any two factors share a generator


def test_phi_and_order_hand_computed():
    # W with integral(p1*e) = 0 and integral(e^3) = 1: chi = (-1/6, 1/2)
    w = CohomModel(
        "w", 6,
        {0: ["1"], 2: ["e"], 4: ["f"], 6: ["v"]},
        {("e", "e"): {"f": 1}, ("e", "f"): {"v": 1}, ("f", "f"): {}},
        {"v": 1},
        tangent_p1={},
    )
    e = w.basis_element("e")
    assert chi(w, e) == (Fraction(-1, 6), Fraction(1, 2))
    assert phi(w, e) == (Fraction(5, 6), Fraction(1, 2))
    assert cobordism_order(w, e) == 6
    assert cobordism_order(w, w.element(2, {})) == 1


# -- the bundle identity --------------------------------------------------------------


def test_chi_of_sphere_bundle_equals_xi_random():
    """chi(S(E)) == (Sign X, integral p1E) over 100 seeded random bundles."""
    gen = Lcg(DEFAULT_SEED)
    for i in range(100):
        r = gen.below(3)
        pairing = [[0] * r for _ in range(r)]
        for a in range(r):
            for b in range(a, r):
                c = gen.int_between(-3, 3)
                pairing[a][b] = pairing[b][a] = c
        sign_x = signature(pairing)
        base = synthetic_four_manifold(f"r{i}", pairing, sign_x=sign_x)
        coeff = gen.int_between(-9, 9)
        data = Bundle3Data(base, base.element(4, {"v": coeff} if coeff else {}), sign_x)
        sb = build_sphere_bundle(data)
        assert chi(sb.total, sb.euler_class) == xi(data) == (sign_x, coeff)


def test_normal_sphere_chi_range():
    for s in range(-16, 17):
        assert normal_sphere_chi(s) == (s, -3 * s)
