"""Invariants of quasi e-manifold data.

A quasi e-manifold record carries a closed oriented 4-model X (possibly a
disjoint union), a degree-2 self-linking class gamma, the signature of X, and
the multiplicity m of the ambient class.  The basic invariant is

    sigma = (Sign X - 4 * integrate(gamma^2)) / m

together with the self-linking number Lambda = integrate(gamma^2), the
closed-case obstruction Sign X = 4 * Lambda, the geometric cross-section
formula Sign S - integrate(e(nu_S)^2), the embedding invariant
H = (1/2) v^T Q v with sigma = -8H, and an exact affine solver for e-class
equations over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cohomring import CohomModel, Element, ModelError
from .exactlin import SymmetricForm, rat, rat_to_str, signature, solve_affine

__all__ = [
    "RestrictionData",
    "EClass",
    "QuasiEClass",
    "NotEClass",
    "classify_restriction",
    "QuasiEData",
    "self_linking",
    "sigma_quasi",
    "SeifertGeometricData",
    "sigma_geometric",
    "Verdict",
    "check_sign_eq_4lambda",
    "FramedHaefligerData",
    "haefliger",
    "EClassSolution",
    "eclass_solve",
]


# -- restriction classification ----------------------------------------------


@dataclass
class RestrictionData:
    """Restriction of an ambient degree-2 class to the singular set X.

    pullback_part is the component of the restriction coming from X itself;
    fiber_coeff lists, per component of X, the coefficient on the normal
    fiber Euler class (the pairing with a normal 2-sphere is twice it).
    boundary_ok records that the boundary compatibility condition holds.
    """

    x_model: CohomModel
    pullback_part: Element
    fiber_coeff: list
    boundary_ok: bool = True

    def __post_init__(self):
        if self.pullback_part.model is not self.x_model or self.pullback_part.degree != 2:
            raise ModelError("pullback_part must be a degree-2 element of X")
        self.fiber_coeff = [rat(c) for c in self.fiber_coeff]
        if len(self.fiber_coeff) != len(self.x_model.components):
            raise ModelError(
                f"need one fiber coefficient per component "
                f"({len(self.x_model.components)} components)"
            )


@dataclass
class EClass:
    kind: str = field(default="e-class", init=False)


@dataclass
class QuasiEClass:
    gamma: Element
    kind: str = field(default="quasi-e-class", init=False)


@dataclass
class NotEClass:
    reason: str
    kind: str = field(default="not-e-class", init=False)


def classify_restriction(data: RestrictionData):
    """Decide e-class / quasi e-class / neither from restriction data.

    An e-class restricts to exactly the normal fiber Euler class (fiber
    coefficient 1 on every component, no pullback part).  A quasi e-class
    allows a pullback part a and records gamma = a/2, provided the boundary
    condition holds.
    """
    for comp, c in zip(data.x_model.components, data.fiber_coeff):
        if c != 1:
            return NotEClass(
                f"normal 2-sphere pairing on component {comp!r} is {rat_to_str(2 * c)}, "
                "an e-class requires 2"
            )
    if data.pullback_part.is_zero():
        return EClass()
    if not data.boundary_ok:
        return NotEClass("boundary compatibility condition fails")
    gamma = Fraction(1, 2) * data.pullback_part
    return QuasiEClass(gamma=gamma)


# -- the quasi e-manifold invariant -------------------------------------------


@dataclass
class QuasiEData:
    """Closed pieces of a quasi e-manifold: (X, gamma, Sign X, multiplicity m)."""

    x_model: CohomModel
    gamma: Element
    sign_x: int
    m: int = 1

    def __post_init__(self):
        if self.x_model.dim != 4:
            raise ModelError("X must be 4-dimensional")
        if self.gamma.model is not self.x_model or self.gamma.degree != 2:
            raise ModelError("gamma must be a degree-2 element of X")
        sign_x = rat(self.sign_x)
        if sign_x.denominator != 1:
            raise ModelError("signX must be an integer")
        self.sign_x = int(sign_x)
        if not (isinstance(self.m, int) and self.m >= 1):
            raise ModelError("multiplicity m must be a positive integer")


def self_linking(x_model: CohomModel, gamma: Element) -> Fraction:
    """Lambda = integrate(gamma^2)."""
    if gamma.model is not x_model or gamma.degree != 2:
        raise ModelError("gamma must be a degree-2 element of X")
    return x_model.integrate(gamma * gamma)


def sigma_quasi(data: QuasiEData) -> Fraction:
    """sigma = (Sign X - 4 * Lambda) / m."""
    lam = self_linking(data.x_model, data.gamma)
    return (data.sign_x - 4 * lam) / Fraction(data.m)


# -- geometric cross-section formula -------------------------------------------


@dataclass
class SeifertGeometricData:
    """A cross-section S of the ambient class: its signature and normal Euler class."""

    sign_s: int
    s_model: CohomModel
    normal_euler: Element

    def __post_init__(self):
        if self.s_model.dim != 4:
            raise ModelError("the cross-section model must be 4-dimensional")
        if self.normal_euler.model is not self.s_model or self.normal_euler.degree != 2:
            raise ModelError("normal_euler must be a degree-2 element of S")
        sign_s = rat(self.sign_s)
        if sign_s.denominator != 1:
            raise ModelError("signS must be an integer")
        self.sign_s = int(sign_s)


def sigma_geometric(data: SeifertGeometricData) -> Fraction:
    """sigma = Sign S - integrate(e(nu_S)^2)."""
    return data.sign_s - data.s_model.integrate(data.normal_euler * data.normal_euler)


# -- closed-case obstruction ---------------------------------------------------


@dataclass
class Verdict:
    passed: bool
    lhs: Fraction
    rhs: Fraction

    def to_json(self):
        return {
            "pass": self.passed,
            "lhs": rat_to_str(self.lhs),
            "rhs": rat_to_str(self.rhs),
        }


def check_sign_eq_4lambda(x_model: CohomModel, gamma: Element, sign_x: int) -> Verdict:
    """For closed quasi e-manifold data, Sign X must equal 4 * Lambda."""
    lhs = Fraction(int(sign_x))
    rhs = 4 * self_linking(x_model, gamma)
    return Verdict(passed=(lhs == rhs), lhs=lhs, rhs=rhs)


# -- framed embedding invariant -------------------------------------------------


@dataclass
class FramedHaefligerData:
    """Middle intersection form Q of a framing-bounding 4-manifold and the
    coordinate vector v of the cross-section class."""

    form: SymmetricForm
    v: list

    def __post_init__(self):
        self.v = [rat(c) for c in self.v]
        if len(self.v) != self.form.n:
            raise ModelError("v length must match the form size")


def haefliger(data: FramedHaefligerData):
    """H = (1/2) v^T Q v on a signature-0 form; sigma = -8H.

    Returns (H, is_integer, sigma).  The signature hypothesis is enforced.
    """
    sig = data.form.signature()
    if sig != 0:
        raise ModelError(f"the framed form must have signature 0, got {sig}")
    total = Fraction(0)
    for i in range(data.form.n):
        for j in range(data.form.n):
            total += data.v[i] * data.form[i, j] * data.v[j]
    h = total / 2
    return h, h.denominator == 1, -8 * h


# -- affine e-class solver -------------------------------------------------------


@dataclass
class EClassSolution:
    """Solution set of an e-class equation R x = t over Q.

    status: 'affine' (non-empty) or 'empty'.  For affine solutions, point is
    one solution, kernel_basis spans the freedom, and simple means the
    solution is unique.
    """

    status: str
    point: list | None = None
    kernel_basis: list | None = None

    @property
    def simple(self) -> bool:
        return self.status == "affine" and not self.kernel_basis

    @property
    def dimension(self) -> int | None:
        if self.status != "affine":
            return None
        return len(self.kernel_basis)

    def to_json(self):
        out = {"status": self.status, "simple": self.simple}
        if self.status == "affine":
            out["point"] = [rat_to_str(x) for x in self.point]
            out["kernel_basis"] = [[rat_to_str(x) for x in vec] for vec in self.kernel_basis]
        return out


def eclass_solve(matrix, target, ker_ix_dim=None) -> EClassSolution:
    """Solve the affine e-class equation exactly.

    The solution set of R x = t is an affine subspace modeled on the kernel
    of R (the restriction-kernel of the ambient inclusion); when ker_ix_dim
    is supplied it is cross-checked against the computed kernel dimension.
    """
    result = solve_affine(matrix, target)
    if result is None:
        sol = EClassSolution(status="empty")
        kernel_dim = len(solve_affine(matrix, [0] * len(matrix))[1]) if matrix else 0
    else:
        point, kernel = result
        sol = EClassSolution(status="affine", point=point, kernel_basis=kernel)
        kernel_dim = len(kernel)
    if ker_ix_dim is not None and ker_ix_dim != kernel_dim:
        raise ModelError(
            f"declared kernel dimension {ker_ix_dim} contradicts the computed "
            f"kernel dimension {kernel_dim}"
        )
    return sol
