"""Graded-commutative cohomology models: ring axioms, fixtures, JSON."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emfd.cohomring import (
    CohomModel,
    FIXTURE_BUILDERS,
    ModelError,
    cp2,
    disjoint_union,
    element_from_json,
    element_to_json,
    model_from_json,
    model_to_json,
    point,
    sphere4,
    synthetic_four_manifold,
    t3_x_s3,
    torus3,
    validate_model,
)

small_ints = st.integers(min_value=-4, max_value=4)


# -- fixture models --------------------------------------------------------------


def test_point():
    m = point()
    assert m.dim == 0
    assert m.integrate(m.one()) == 1


def test_sphere4():
    m = sphere4()
    v = m.basis_element("v")
    assert m.integrate(v) == 1
    assert (v * v).is_zero()
    assert m.tangent_p1 is not None and m.tangent_p1.is_zero()


def test_cp2_ring():
    m = cp2()
    h = m.basis_element("h")
    assert h * h == m.basis_element("h2")
    assert m.integrate(h * h) == 1
    assert m.integrate(m.tangent_p1) == 3
    assert (h * h * h).is_zero()   # degree 6 > dim has no classes
    assert validate_model(m, strict=True) == []


def test_torus3_exterior_signs():
    m = torus3()
    t1, t2, t3 = (m.basis_element(x) for x in ("t1", "t2", "t3"))
    t1t2 = m.basis_element("t1t2")
    assert t1 * t2 == t1t2
    assert t2 * t1 == -1 * t1t2           # odd classes anticommute
    assert (t1 * t1).is_zero()
    assert m.integrate(t1 * t2 * t3) == 1
    assert m.integrate(t2 * t1 * t3) == -1
    assert validate_model(m) == []


def test_t3_x_s3():
    m = t3_x_s3()
    assert m.dim == 6
    assert sum(len(m.basis[d]) for d in m.basis) == 16
    assert m.tangent_p1 is not None and m.tangent_p1.is_zero()


def test_fixture_registry():
    for name, build in FIXTURE_BUILDERS.items():
        model = build()
        assert model.name == name
        assert validate_model(model) == []


# -- constructor guards ------------------------------------------------------------


def test_duplicate_label_rejected():
    with pytest.raises(ModelError, match="duplicate"):
        CohomModel("x", 2, {0: ["1"], 2: ["1"]}, {}, {})


def test_missing_unit_rejected():
    with pytest.raises(ModelError, match="degree 0"):
        CohomModel("x", 2, {2: ["a"]}, {}, {})


def test_two_units_one_component_rejected():
    with pytest.raises(ModelError, match="two degree-0"):
        CohomModel("x", 0, {0: ["1", "e"]}, {}, {})


def test_product_degree_mismatch_rejected():
    with pytest.raises(ModelError, match="degree"):
        CohomModel("x", 4, {0: ["1"], 2: ["a"], 4: ["v"]},
                   {("a", "a"): {"a": 1}}, {"v": 1})


def test_inconsistent_mirror_rejected():
    with pytest.raises(ModelError, match="commutativity"):
        CohomModel("x", 4, {0: ["1"], 2: ["a"], 4: ["v"]},
                   {("a", "a"): {"v": 1}, ("1", "a"): {"a": 2}}, {"v": 1})


def test_strict_flags_degenerate_pairing():
    degenerate = synthetic_four_manifold("d", [[0]])
    assert validate_model(degenerate) == []
    assert "middle-degree pairing is degenerate" in validate_model(degenerate, strict=True)


# -- elements ---------------------------------------------------------------------


def test_element_algebra():
    m = cp2()
    h = m.basis_element("h")
    x = 2 * h + h
    assert x.coeff("h") == 3
    assert (x - x).is_zero()
    assert (Fraction(1, 2) * x).coeff("h") == Fraction(3, 2)


def test_element_guards():
    m, other = cp2(), sphere4()
    with pytest.raises(ModelError):
        m.element(2, {"h2": 1})            # wrong degree for the label
    with pytest.raises(ModelError):
        m.element(2, {"nope": 1})
    with pytest.raises(ModelError):
        m.basis_element("h") + other.basis_element("v")
    with pytest.raises(ModelError):
        m.basis_element("h") + m.basis_element("h2")


def test_one_is_neutral():
    m = cp2()
    for label in m.all_labels():
        x = m.basis_element(label)
        assert m.one() * x == x and x * m.one() == x


def test_integrate_off_top_degree_is_zero():
    m = cp2()
    assert m.integrate(m.basis_element("h")) == 0


# -- orientation and unions ---------------------------------------------------------


def test_reversed_orientation_negates_integral():
    m = cp2()
    r = m.reversed_orientation()
    h2 = r.basis_element("h2")
    assert r.integrate(h2) == -1
    assert r.name == "-cp2"
    assert m.integrate(m.basis_element("h2")) == 1   # original untouched


def test_disjoint_union_structure():
    du = disjoint_union([cp2(), sphere4()])
    assert du.name == "cp2+s4"
    assert du.components == ["cp2", "s4"]
    h = du.basis_element("h@cp2")
    assert h * h == du.basis_element("h2@cp2")
    assert (h * du.basis_element("v@s4")).is_zero()  # cross terms vanish
    assert du.integrate(du.basis_element("h2@cp2")) == 1
    assert du.integrate(du.basis_element("v@s4")) == 1
    assert du.one() == du.element(0, {"1@cp2": 1, "1@s4": 1})
    assert validate_model(du) == []


def test_disjoint_union_requires_equal_dim():
    with pytest.raises(ModelError):
        disjoint_union([cp2(), point()])


def test_disjoint_union_of_copies_disambiguates():
    du = disjoint_union([cp2(), cp2()])
    assert du.components == ["cp2", "cp2#1"]
    assert du.integrate(du.basis_element("h2@cp2#1")) == 1


# -- synthetic four-manifolds -------------------------------------------------------


@settings(max_examples=60)
@given(st.integers(min_value=0, max_value=3), st.data())
def test_synthetic_four_manifold_pairing(r, data):
    flat = data.draw(st.lists(small_ints, min_size=r * r, max_size=r * r))
    pairing = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            pairing[i][j] = pairing[j][i] = flat[i * r + j]
    m = synthetic_four_manifold("x", pairing)
    assert validate_model(m) == []
    for i in range(r):
        for j in range(r):
            xi = m.basis_element(f"x{i + 1}")
            xj = m.basis_element(f"x{j + 1}")
            assert m.integrate(xi * xj) == pairing[i][j]


def test_synthetic_tangent_class():
    m = synthetic_four_manifold("x", [[1]], sign_x=1)
    assert m.tangent_p1 == m.element(4, {"v": 3})


# -- JSON interchange ---------------------------------------------------------------


@pytest.mark.parametrize("build", [
    point, sphere4, cp2, torus3, t3_x_s3,
    lambda: disjoint_union([cp2(), sphere4()]),
    lambda: synthetic_four_manifold("x", [[0, 1], [1, 0]], sign_x=0),
])
def test_model_json_round_trip(build):
    m = build()
    doc = model_to_json(m)
    again = model_from_json(doc)
    assert model_to_json(again) == doc
    assert again.dim == m.dim and list(again.all_labels()) == list(m.all_labels())
    labels = list(m.all_labels())
    for a in labels:                       # empty product rows are not serialized,
        for b in labels:                   # so compare the lookups, not the dicts
            assert again.product_entry(a, b) == m.product_entry(a, b)
    assert again.integral == m.integral
    assert again.component_of == m.component_of


def test_element_json_round_trip():
    m = cp2()
    x = m.element(2, {"h": Fraction(-7, 3)})
    assert element_from_json(m, element_to_json(x)) == x


def test_element_json_degree_rules():
    m = cp2()
    with pytest.raises(ModelError, match="degree"):
        element_from_json(m, {})
    assert element_from_json(m, {}, degree=2).is_zero()
    with pytest.raises(ModelError, match="mixes"):
        element_from_json(m, {"h": 1, "h2": 1})


def test_model_from_json_rejects_malformed():
    with pytest.raises(ModelError, match="malformed"):
        model_from_json({"name": "x"})
    with pytest.raises(ModelError, match="duplicate product"):
        model_from_json({
            "name": "x", "dim": 4,
            "basis": {"0": ["1"], "2": ["a"], "4": ["v"]},
            "products": [
                {"a": "a", "b": "a", "value": {"v": "1"}},
                {"a": "a", "b": "a", "value": {"v": "2"}},
            ],
            "integral": {"v": "1"},
        })
