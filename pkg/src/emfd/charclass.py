"""Characteristic numbers of 6-manifold-with-2-plane-field data.

The central construction: from a closed oriented 4-manifold model X with an
oriented 3-plane bundle E (recorded by its first characteristic class p1E and
the signature of X), build the cohomology model of the total space of the
sphere bundle S(E).  The total ring is generated over the pullback of H*(X)
by the fiber Euler class eF subject to eF^2 = pullback(p1E); fiber integration
doubles the base integral against eF.

chi is the pair of characteristic numbers of a 6-model W with a degree-2
class e:

    chi1 = (1/6) * integrate(p1(TW) * e - e^3)
    chi2 = (1/2) * integrate(e^3)

xi of bundle data is (Sign X, integrate(p1E)).  Composing chi with the sphere
bundle construction recovers xi exactly; the verify suites exercise this on
randomized data.
"""

from __future__ import annotations

from fractions import Fraction

from .cohomring import CohomModel, Element, ModelError
from .exactlin import lcm_denominators, mod_z, rat

__all__ = [
    "Bundle3Data",
    "SphereBundleModel",
    "build_sphere_bundle",
    "chi",
    "xi",
    "phi",
    "cobordism_order",
    "hirzebruch_signature",
    "normal_sphere_chi",
    "rank_one_base",
]

_EF_SUFFIX = "*eF"


def hirzebruch_signature(x_model: CohomModel) -> Fraction:
    """(1/3) * integrate(p1(TX)) for a closed oriented 4-model."""
    if x_model.dim != 4:
        raise ModelError(f"expected a 4-dimensional model, got dim {x_model.dim}")
    if x_model.tangent_p1 is None:
        raise ModelError("model has no tangent_p1 data")
    return x_model.integrate(x_model.tangent_p1 * x_model.one()) / 3


class Bundle3Data:
    """A closed oriented 4-model with an oriented 3-plane bundle over it.

    signX is supplied as data; when the base carries tangent_p1, it is
    cross-checked against the signature integral (1/3) * integrate(p1(TX)).
    """

    def __init__(self, base: CohomModel, p1E: Element, sign_x):
        if base.dim != 4:
            raise ModelError("bundle base must be 4-dimensional")
        if p1E.model is not base or p1E.degree != 4:
            raise ModelError("p1E must be a degree-4 element of the base model")
        sign_x = rat(sign_x)
        if sign_x.denominator != 1:
            raise ModelError("signX must be an integer")
        self.base = base
        self.p1E = p1E
        self.sign_x = int(sign_x)
        if base.tangent_p1 is not None:
            expected = hirzebruch_signature(base)
            if expected != self.sign_x:
                raise ModelError(
                    f"signX = {self.sign_x} contradicts the signature integral "
                    f"(1/3)*integral(p1(TX)) = {expected}"
                )


class SphereBundleModel:
    """Total-space model of S(E) together with its structure maps."""

    def __init__(self, data: Bundle3Data, total: CohomModel):
        self.data = data
        self.base = data.base
        self.total = total

    @property
    def euler_class(self) -> Element:
        """The fiberwise Euler class eF (degree 2)."""
        coeffs = {u + _EF_SUFFIX: 1 for u in self.base.basis[0]}
        return self.total.element(2, coeffs)

    def pullback(self, x: Element) -> Element:
        return self.total.element(x.degree, dict(x.coeffs))

    def gysin(self, x: Element) -> Element:
        """Integration over the fiber: pullbacks die, (pullback b)*eF -> 2b."""
        out = {}
        for label, c in x.coeffs.items():
            if label.endswith(_EF_SUFFIX):
                out[label[: -len(_EF_SUFFIX)]] = 2 * c
        return self.base.element(x.degree - 2, out)

    def tau(self, x: Element) -> Element:
        """The fiberwise antipodal involution: fixes pullbacks, negates eF."""
        out = {}
        for label, c in x.coeffs.items():
            out[label] = -c if label.endswith(_EF_SUFFIX) else c
        return self.total.element(x.degree, out)


def build_sphere_bundle(data: Bundle3Data) -> SphereBundleModel:
    """Cohomology model of the sphere bundle S(E) -> X.

    Basis in degree d: pullbacks of the base degree-d basis plus b*eF for b in
    the base degree-(d-2) basis.  Products follow eF^2 = pullback(p1E);
    integration doubles the base integral against the eF part.  When the base
    has tangent_p1, the total carries tangent_p1 = pullback(p1(TX) + p1E).
    """
    base = data.base
    basis = {}
    component_of = {}
    for d in range(0, base.dim + 3):
        labels = []
        for b in base.labels(d):
            labels.append(b)
            component_of[b] = base.component_of[b]
        for b in base.labels(d - 2):
            labels.append(b + _EF_SUFFIX)
            component_of[b + _EF_SUFFIX] = base.component_of[b]
        if labels:
            basis[d] = labels

    def split(label):
        if label.endswith(_EF_SUFFIX):
            return label[: -len(_EF_SUFFIX)], 1
        return label, 0

    def assemble(base_element: Element, ef_power: int):
        # Reduce (base element) * eF^k to the {1, eF} basis via eF^2 = p1E.
        while ef_power >= 2:
            base_element = base_element * data.p1E
            ef_power -= 2
        suffix = _EF_SUFFIX if ef_power else ""
        return {lbl + suffix: c for lbl, c in base_element.coeffs.items()}

    products = {}
    all_labels = [lbl for d in sorted(basis) for lbl in basis[d]]
    for la in all_labels:
        for lb in all_labels:
            ba, ka = split(la)
            bb, kb = split(lb)
            prod = base.basis_element(ba) * base.basis_element(bb)
            products[(la, lb)] = assemble(prod, ka + kb)

    integral = {}
    for b in base.labels(base.dim):
        coeff = base.integral.get(b, Fraction(0))
        if coeff != 0:
            integral[b + _EF_SUFFIX] = 2 * coeff

    tangent = None
    if base.tangent_p1 is not None:
        tangent = dict((base.tangent_p1 + data.p1E).coeffs)

    total = CohomModel(
        f"S({base.name})",
        base.dim + 2,
        basis,
        products,
        integral,
        tangent_p1=tangent,
        component_of=component_of,
        validate=False,
    )
    return SphereBundleModel(data, total)


def chi(w_model: CohomModel, e: Element):
    """The characteristic pair (chi1, chi2) of a closed 6-model with e in H^2."""
    if w_model.dim != 6:
        raise ModelError(f"chi expects a 6-dimensional model, got dim {w_model.dim}")
    if w_model.tangent_p1 is None:
        raise ModelError("chi needs tangent_p1 on the 6-model")
    if e.model is not w_model or e.degree != 2:
        raise ModelError("e must be a degree-2 element of the 6-model")
    e3 = e * e * e
    chi1 = w_model.integrate(w_model.tangent_p1 * e - e3) / 6
    chi2 = w_model.integrate(e3) / 2
    return (chi1, chi2)


def xi(data: Bundle3Data):
    """(Sign X, integrate(p1E)) of bundle data."""
    return (Fraction(data.sign_x), data.base.integrate(data.p1E))


def phi(w_model: CohomModel, e: Element):
    """chi reduced mod Z^2, componentwise in [0, 1)."""
    c1, c2 = chi(w_model, e)
    return (mod_z(c1), mod_z(c2))


def cobordism_order(w_model: CohomModel, e: Element) -> int:
    """Order of phi(W, e) in (Q/Z)^2: the lcm of the chi denominators."""
    return lcm_denominators(chi(w_model, e))


def rank_one_base(sign_x: int, name=None) -> CohomModel:
    """Minimal closed-4-model witness with the given signature.

    Basis {1, v}; tangent_p1 = 3*sign_x*v makes the signature integral exact.
    """
    from .cohomring import synthetic_four_manifold

    return synthetic_four_manifold(name or f"w{sign_x}", [], sign_x=sign_x)


def normal_sphere_chi(sign_x: int):
    """chi of the normal sphere bundle of a signature-sign_x witness.

    The normal bundle of a closed oriented 4-manifold in R^7 satisfies
    integrate(p1(nu)) = -integrate(p1(TX)) = -3*Sign X, so the sphere bundle
    of nu has chi = (Sign X, -3*Sign X).  The value is recomputed through
    build_sphere_bundle and cross-checked before being returned.
    """
    sign_x = int(sign_x)
    base = rank_one_base(sign_x)
    p1_nu = base.element(4, {"v": -3 * sign_x})
    bundle = build_sphere_bundle(Bundle3Data(base, p1_nu, sign_x))
    value = chi(bundle.total, bundle.euler_class)
    expected = (Fraction(sign_x), Fraction(-3 * sign_x))
    if value != expected:
        raise AssertionError(
            f"normal sphere bundle defect: chi = {value}, expected {expected}"
        )
    return value
