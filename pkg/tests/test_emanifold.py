"""e-class data: classification, the sigma invariant, Haefliger numbers,
and the affine solver."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _linalg import rank as rank_oracle
from emfd.cohomring import ModelError, cp2, disjoint_union, synthetic_four_manifold
from emfd.emanifold import (
    EClass,
    FramedHaefligerData,
    NotEClass,
    QuasiEClass,
    QuasiEData,
    RestrictionData,
    SeifertGeometricData,
    check_sign_eq_4lambda,
    classify_restriction,
    eclass_solve,
    haefliger,
    self_linking,
    sigma_geometric,
    sigma_quasi,
)
from emfd.exactlin import SymmetricForm
from emfd.rng import DEFAULT_SEED, Lcg

small_ints = st.integers(min_value=-4, max_value=4)


def _pairing_model(name, pairing, **kw):
    return synthetic_four_manifold(name, pairing, **kw)


def _random_quasi(gen, tag, m=1):
    r = 1 + gen.below(3)
    pairing = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            c = gen.int_between(-3, 3)
            pairing[i][j] = pairing[j][i] = c
    model = _pairing_model(tag, pairing)
    coeffs = {}
    for k in range(r):
        c = gen.int_between(-3, 3)
        if c:
            coeffs[f"x{k + 1}"] = c
    return QuasiEData(model, model.element(2, coeffs), gen.int_between(-6, 6), m)


# -- restriction classification -----------------------------------------------------


def test_classify_e_class():
    x = cp2()
    data = RestrictionData(x, x.element(2, {}), [1])
    assert isinstance(classify_restriction(data), EClass)


def test_classify_quasi_e_class():
    x = cp2()
    data = RestrictionData(x, x.element(2, {"h": 3}), [1])
    verdict = classify_restriction(data)
    assert isinstance(verdict, QuasiEClass)
    assert verdict.gamma == x.element(2, {"h": Fraction(3, 2)})


def test_classify_not_e_class():
    x = cp2()
    wrong_fiber = RestrictionData(x, x.element(2, {}), [2])
    verdict = classify_restriction(wrong_fiber)
    assert isinstance(verdict, NotEClass) and "requires 2" in verdict.reason

    bad_boundary = RestrictionData(x, x.element(2, {"h": 1}), [1], boundary_ok=False)
    assert isinstance(classify_restriction(bad_boundary), NotEClass)


def test_classification_per_component():
    du = disjoint_union([cp2(), _pairing_model("y", [[1]])])
    ok = RestrictionData(du, du.element(2, {}), [1, 1])
    assert isinstance(classify_restriction(ok), EClass)
    mixed = RestrictionData(du, du.element(2, {}), [1, Fraction(1, 2)])
    assert isinstance(classify_restriction(mixed), NotEClass)
    with pytest.raises(ModelError, match="one fiber coefficient"):
        RestrictionData(du, du.element(2, {}), [1])


# -- sigma ---------------------------------------------------------------------------


def test_sigma_quasi_formula():
    x = _pairing_model("x", [[2]])
    gamma = x.element(2, {"x1": 1})
    assert self_linking(x, gamma) == 2
    assert sigma_quasi(QuasiEData(x, gamma, 3)) == 3 - 8
    assert sigma_quasi(QuasiEData(x, gamma, 3, m=5)) == Fraction(-5, 5)


def test_quasi_data_guards():
    x = _pairing_model("x", [[2]])
    gamma = x.element(2, {"x1": 1})
    with pytest.raises(ModelError):
        QuasiEData(x, x.element(4, {"v": 1}), 0)       # gamma degree
    with pytest.raises(ModelError):
        QuasiEData(x, gamma, Fraction(1, 2))           # signature not integral
    with pytest.raises(ModelError):
        QuasiEData(x, gamma, 0, m=0)                   # multiplicity
    six = disjoint_union([cp2(), cp2()])
    assert six.dim == 4                                # sanity: unions keep dim


def test_sigma_additive_and_antisymmetric_seeded():
    gen = Lcg(DEFAULT_SEED)
    for i in range(100):
        m = 1 + gen.below(3)
        a = _random_quasi(gen, f"a{i}", m)
        b = _random_quasi(gen, f"b{i}", m)
        union = disjoint_union([a.x_model, b.x_model])
        gamma = union.element(2, {
            **{f"{k}@{a.x_model.name}": v for k, v in a.gamma.coeffs.items()},
            **{f"{k}@{b.x_model.name}": v for k, v in b.gamma.coeffs.items()},
        })
        joined = QuasiEData(union, gamma, a.sign_x + b.sign_x, m)
        assert sigma_quasi(joined) == sigma_quasi(a) + sigma_quasi(b)

        flipped = a.x_model.reversed_orientation()
        reversed_data = QuasiEData(flipped, flipped.element(2, dict(a.gamma.coeffs)),
                                   -a.sign_x, m)
        assert sigma_quasi(reversed_data) == -sigma_quasi(a)


def test_sigma_geometric():
    s = _pairing_model("s", [[2]])
    data = SeifertGeometricData(0, s, s.element(2, {"x1": 1}))
    assert sigma_geometric(data) == -2
    data = SeifertGeometricData(4, s, s.element(2, {}))
    assert sigma_geometric(data) == 4


def test_check_sign_eq_4lambda():
    x = _pairing_model("x", [[1]])
    gamma = x.element(2, {"x1": 1})           # Lambda = 1
    good = check_sign_eq_4lambda(x, gamma, 4)
    assert good.passed and good.lhs == good.rhs == 4
    bad = check_sign_eq_4lambda(x, gamma, 3)
    assert not bad.passed
    assert bad.to_json() == {"pass": False, "lhs": "3", "rhs": "4"}


# -- Haefliger numbers ----------------------------------------------------------------


def test_haefliger_hyperbolic_frozen():
    data = FramedHaefligerData(SymmetricForm([[0, 1], [1, 0]]), [1, 1])
    assert haefliger(data) == (1, True, -8)


def test_haefliger_examples():
    # v = (a, b) on the hyperbolic form: H = a*b
    data = FramedHaefligerData(SymmetricForm([[0, 1], [1, 0]]), [3, -2])
    assert haefliger(data) == (-6, True, 48)
    # fractional section classes are legal; integrality is reported, not forced
    data = FramedHaefligerData(SymmetricForm([[0, 1], [1, 0]]), [Fraction(1, 2), 1])
    assert haefliger(data) == (Fraction(1, 2), False, -4)


def test_haefliger_requires_signature_zero():
    with pytest.raises(ModelError, match="signature 0"):
        haefliger(FramedHaefligerData(SymmetricForm([[1, 0], [0, 1]]), [1, 1]))


def test_haefliger_vector_length_checked():
    with pytest.raises(ModelError):
        FramedHaefligerData(SymmetricForm([[0, 1], [1, 0]]), [1])


def test_haefliger_integral_on_seeded_hyperbolic_sums():
    """Integer vectors on sums of hyperbolic blocks always give integer H."""
    gen = Lcg(DEFAULT_SEED)
    for _ in range(100):
        blocks = 1 + gen.below(3)
        n = 2 * blocks
        entries = [[0] * n for _ in range(n)]
        for b in range(blocks):
            entries[2 * b][2 * b + 1] = entries[2 * b + 1][2 * b] = 1
        v = [gen.int_between(-9, 9) for _ in range(n)]
        h, is_integer, sigma = haefliger(FramedHaefligerData(SymmetricForm(entries), v))
        assert is_integer
        assert h == sum(v[2 * b] * v[2 * b + 1] for b in range(blocks))
        assert sigma == -8 * h


# -- affine solver ---------------------------------------------------------------------


def test_eclass_solve_simple():
    sol = eclass_solve([[1, 0], [0, 1], [1, 1]], [1, 2, 3], ker_ix_dim=0)
    assert sol.status == "affine" and sol.simple
    assert sol.point == [1, 2] and sol.dimension == 0
    assert sol.to_json() == {
        "status": "affine", "simple": True, "point": ["1", "2"], "kernel_basis": [],
    }


def test_eclass_solve_empty():
    sol = eclass_solve([[1, 1], [1, 1]], [0, 1])
    assert sol.status == "empty" and not sol.simple
    assert sol.dimension is None
    assert sol.to_json() == {"status": "empty", "simple": False}


def test_eclass_solve_kernel_cross_check():
    sol = eclass_solve([[1, 1, 0]], [2], ker_ix_dim=2)
    assert sol.dimension == 2 and not sol.simple
    with pytest.raises(ModelError, match="contradicts"):
        eclass_solve([[1, 1, 0]], [2], ker_ix_dim=1)
    with pytest.raises(ModelError, match="contradicts"):
        eclass_solve([[1, 1], [1, 1]], [0, 1], ker_ix_dim=0)  # kernel dim is 1


def test_eclass_solve_seeded_dimension_matches_rank():
    """Solution-set dimension equals unknowns minus rank on 100 random systems."""
    gen = Lcg(DEFAULT_SEED)
    solved = 0
    for _ in range(100):
        rows = 1 + gen.below(4)
        cols = 1 + gen.below(4)
        matrix = [[gen.int_between(-3, 3) for _ in range(cols)] for _ in range(rows)]
        target = [gen.int_between(-3, 3) for _ in range(rows)]
        sol = eclass_solve(matrix, target)
        if sol.status == "empty":
            # independently confirm inconsistency: augmenting must raise the rank
            assert rank_oracle([m + [t] for m, t in zip(matrix, target)]) \
                == rank_oracle(matrix) + 1
            continue
        solved += 1
        assert sol.dimension == cols - rank_oracle(matrix)
        assert sol.simple == (sol.dimension == 0)
        for i in range(rows):
            assert sum(matrix[i][j] * sol.point[j] for j in range(cols)) == target[i]
        for vec in sol.kernel_basis:
            for i in range(rows):
                assert sum(matrix[i][j] * vec[j] for j in range(cols)) == 0
    assert solved >= 30   # the stream must exercise both branches


@settings(max_examples=60)
@given(st.data())
def test_eclass_solve_consistent_systems(data):
    rows = data.draw(st.integers(min_value=1, max_value=3))
    cols = data.draw(st.integers(min_value=1, max_value=3))
    flat = data.draw(st.lists(small_ints, min_size=rows * cols, max_size=rows * cols))
    x0 = data.draw(st.lists(small_ints, min_size=cols, max_size=cols))
    matrix = [flat[i * cols:(i + 1) * cols] for i in range(rows)]
    target = [sum(matrix[i][j] * x0[j] for j in range(cols)) for i in range(rows)]
    sol = eclass_solve(matrix, target)
    assert sol.status == "affine"
    assert sol.dimension == cols - rank_oracle(matrix)
