"""Finite rational models of graded-commutative cohomology rings.

A model is a finite graded basis, a product table on basis labels, and an
integration functional against the fundamental class.  Product tables are
completed at load time: missing ordered pairs are filled in from graded
commutativity (a*b = (-1)^{|a||b|} b*a) and degree-0 labels act as component
units.  Validation checks the ring axioms and, in strict mode, that the
middle-degree pairing (a, b) -> integrate(a*b) is non-degenerate.

Disjoint unions are supported: degree 0 then has one idempotent label per
component and the unit element is their sum.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import rank, rat, rat_to_str

__all__ = [
    "ModelError",
    "Element",
    "CohomModel",
    "validate_model",
    "model_from_json",
    "model_to_json",
    "element_from_json",
    "element_to_json",
    "point",
    "sphere4",
    "cp2",
    "exterior_model",
    "torus3",
    "t3_x_s3",
    "disjoint_union",
    "synthetic_four_manifold",
    "FIXTURE_BUILDERS",
]


class ModelError(ValueError):
    """A cohomology model violates its contract."""


class Element:
    """A homogeneous element: rational coefficients on one degree's basis."""

    __slots__ = ("model", "degree", "coeffs")

    def __init__(self, model, degree, coeffs=None):
        self.model = model
        self.degree = int(degree)
        clean = {}
        for label, c in (coeffs or {}).items():
            c = rat(c)
            if c == 0:
                continue
            if model.degree_of(label) != self.degree:
                raise ModelError(
                    f"label {label!r} has degree {model.degree_of(label)}, "
                    f"element has degree {self.degree}"
                )
            clean[label] = c
        self.coeffs = clean

    def is_zero(self):
        return not self.coeffs

    def coeff(self, label) -> Fraction:
        return self.coeffs.get(label, Fraction(0))

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.coeffs)
        for label, c in other.coeffs.items():
            out[label] = out.get(label, Fraction(0)) + c
        return Element(self.model, self.degree, out)

    def __neg__(self):
        return Element(self.model, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        s = rat(scalar)
        return Element(self.model, self.degree, {k: s * v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.model.multiply(self, other)
        return self.__rmul__(other)

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.model is other.model
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return f"<0 (deg {self.degree})>"
        parts = " + ".join(f"{rat_to_str(c)}*{k}" for k, c in sorted(self.coeffs.items()))
        return f"<{parts}>"

    def integrate(self) -> Fraction:
        return self.model.integrate(self)

    def _check_compatible(self, other):
        if self.model is not other.model:
            raise ModelError("elements belong to different models")
        if self.degree != other.degree:
            raise ModelError("elements have different degrees")


class CohomModel:
    """Graded basis + product table + integral, with component bookkeeping.

    basis: {degree: [labels]} for 0 <= degree <= dim.
    products: {(a, b): {label: coeff}} on ordered basis pairs; completed.
    integral: {top-degree label: coeff}.
    component_of: {label: component name}; single-component models map every
    label to the model name.
    tangent_p1: optional degree-4 element (first tangent characteristic class).
    """

    def __init__(self, name, dim, basis, products, integral,
                 tangent_p1=None, component_of=None, validate=True, strict=False):
        self.name = str(name)
        self.dim = int(dim)
        self.basis = {int(d): list(labels) for d, labels in basis.items() if labels}
        self._degree_of = {}
        for d, labels in self.basis.items():
            for label in labels:
                if label in self._degree_of:
                    raise ModelError(f"duplicate basis label {label!r}")
                self._degree_of[label] = d
        if 0 not in self.basis or not self.basis[0]:
            raise ModelError("degree 0 basis is empty")
        if component_of is None:
            component_of = {label: self.name for label in self._degree_of}
        self.component_of = dict(component_of)
        self.components = []
        for label in self.basis[0]:
            comp = self.component_of.get(label)
            if comp in self.components:
                raise ModelError(f"two degree-0 labels in component {comp!r}")
            self.components.append(comp)
        self.products = {}
        for (a, b), value in products.items():
            self.products[(a, b)] = {k: rat(v) for k, v in value.items() if rat(v) != 0}
        self.integral = {k: rat(v) for k, v in integral.items()}
        self._complete_units()
        self._complete_commutativity()
        self.tangent_p1 = None
        if tangent_p1 is not None:
            self.tangent_p1 = self.element(4, tangent_p1)
        if validate:
            problems = validate_model(self, strict=strict)
            if problems:
                raise ModelError(f"invalid model {self.name!r}: " + "; ".join(problems))

    # -- construction helpers ------------------------------------------------

    def _complete_units(self):
        # Degree-0 labels act as the idempotent of their component.
        for u in self.basis[0]:
            comp = self.component_of[u]
            for label, d in self._degree_of.items():
                same = self.component_of.get(label) == comp
                expected = {label: Fraction(1)} if same else {}
                for key in ((u, label), (label, u)):
                    if key not in self.products:
                        self.products[key] = dict(expected)

    def _complete_commutativity(self):
        for (a, b), value in list(self.products.items()):
            if (b, a) in self.products:
                continue
            sign = -1 if (self._degree_of[a] % 2 and self._degree_of[b] % 2) else 1
            self.products[(b, a)] = {k: sign * v for k, v in value.items()}

    # -- basic queries -------------------------------------------------------

    def degree_of(self, label) -> int:
        if label not in self._degree_of:
            raise ModelError(f"unknown basis label {label!r}")
        return self._degree_of[label]

    def labels(self, degree):
        return list(self.basis.get(degree, []))

    def all_labels(self):
        for d in sorted(self.basis):
            yield from self.basis[d]

    def zero(self, degree) -> Element:
        return Element(self, degree, {})

    def element(self, degree, coeffs) -> Element:
        return Element(self, degree, coeffs)

    def basis_element(self, label) -> Element:
        return Element(self, self.degree_of(label), {label: 1})

    def one(self) -> Element:
        return Element(self, 0, {u: 1 for u in self.basis[0]})

    # -- ring structure ------------------------------------------------------

    def product_entry(self, a, b):
        return self.products.get((a, b), {})

    def multiply(self, x: Element, y: Element) -> Element:
        degree = x.degree + y.degree
        out = {}
        for la, ca in x.coeffs.items():
            for lb, cb in y.coeffs.items():
                for label, c in self.product_entry(la, lb).items():
                    out[label] = out.get(label, Fraction(0)) + ca * cb * c
        return Element(self, degree, out)

    def integrate(self, x: Element) -> Fraction:
        if x.degree != self.dim:
            return Fraction(0)
        return sum((c * self.integral.get(label, Fraction(0))
                    for label, c in x.coeffs.items()), Fraction(0))

    def reversed_orientation(self, name=None):
        """The same ring with the integration functional negated."""
        return CohomModel(
            name or f"-{self.name}",
            self.dim,
            self.basis,
            self.products,
            {k: -v for k, v in self.integral.items()},
            tangent_p1=dict(self.tangent_p1.coeffs) if self.tangent_p1 is not None else None,
            component_of=self.component_of,
            validate=False,
        )


def validate_model(model: CohomModel, strict: bool = False):
    """Return a list of axiom violations (empty when the model is valid)."""
    problems = []
    for d in model.basis:
        if d < 0 or d > model.dim:
            problems.append(f"basis degree {d} outside 0..{model.dim}")
    for (a, b), value in model.products.items():
        for operand in (a, b):
            if operand not in model._degree_of:
                problems.append(f"product table uses unknown label {operand!r}")
                return problems
        d = model._degree_of[a] + model._degree_of[b]
        for label, c in value.items():
            if label not in model._degree_of:
                problems.append(f"product ({a},{b}) hits unknown label {label!r}")
            elif model._degree_of[label] != d:
                problems.append(
                    f"product ({a},{b}) has degree {d} but hits {label!r} "
                    f"of degree {model._degree_of[label]}"
                )
        if d > model.dim and value:
            problems.append(f"product ({a},{b}) lands beyond the top degree")
    for label in model.integral:
        if label not in model._degree_of or model._degree_of[label] != model.dim:
            problems.append(f"integral supported on non-top label {label!r}")
    one = model.one()
    for label in model.all_labels():
        x = model.basis_element(label)
        if one * x != x or x * one != x:
            problems.append(f"unit axiom fails on {label!r}")
    labels = list(model.all_labels())
    for a in labels:
        da = model._degree_of[a]
        for b in labels:
            db = model._degree_of[b]
            sign = -1 if (da % 2 and db % 2) else 1
            left = model.product_entry(a, b)
            right = model.product_entry(b, a)
            flipped = {k: sign * v for k, v in right.items()}
            if left != flipped:
                problems.append(f"graded commutativity fails on ({a},{b})")
    for a in labels:
        xa = model.basis_element(a)
        for b in labels:
            xb = model.basis_element(b)
            ab = xa * xb
            for c in labels:
                xc = model.basis_element(c)
                if (ab) * xc != xa * (xb * xc):
                    problems.append(f"associativity fails on ({a},{b},{c})")
    if model.tangent_p1 is not None and model.tangent_p1.degree != 4:
        problems.append("tangent_p1 is not a degree-4 element")
    if strict and model.dim % 2 == 0:
        mid = model.labels(model.dim // 2)
        if mid:
            pairing = [
                [
                    model.integrate(model.basis_element(a) * model.basis_element(b))
                    for b in mid
                ]
                for a in mid
            ]
            if rank(pairing) != len(mid):
                problems.append("middle-degree pairing is degenerate")
    return problems


# -- JSON interchange --------------------------------------------------------


def element_to_json(x: Element):
    return {label: rat_to_str(c) for label, c in sorted(x.coeffs.items())}


def element_from_json(model: CohomModel, data, degree=None) -> Element:
    coeffs = {label: rat(c) for label, c in data.items()}
    if degree is None:
        if not coeffs:
            raise ModelError("cannot infer the degree of an empty element")
        degrees = {model.degree_of(label) for label in coeffs}
        if len(degrees) != 1:
            raise ModelError(f"element mixes degrees {sorted(degrees)}")
        degree = degrees.pop()
    return Element(model, degree, coeffs)


def model_to_json(model: CohomModel):
    order = {label: i for i, label in enumerate(model.all_labels())}
    products = []
    seen = set()
    for (a, b), value in model.products.items():
        if not value or (a, b) in seen:
            continue
        if model.degree_of(a) == 0 or model.degree_of(b) == 0:
            continue  # unit rows are regenerated at load
        if order[a] > order[b]:
            continue  # the commutativity completion restores the mirror entry
        seen.add((a, b))
        products.append({
            "a": a,
            "b": b,
            "value": {k: rat_to_str(v) for k, v in sorted(value.items())},
        })
    products.sort(key=lambda row: (order[row["a"]], order[row["b"]]))
    data = {
        "name": model.name,
        "dim": model.dim,
        "basis": {str(d): model.basis[d] for d in sorted(model.basis)},
        "products": products,
        "integral": {k: rat_to_str(v) for k, v in sorted(model.integral.items())},
    }
    if model.tangent_p1 is not None:
        data["tangent_p1"] = element_to_json(model.tangent_p1)
    if set(model.component_of.values()) != {model.name}:
        data["components"] = {k: model.component_of[k] for k in model.all_labels()}
    return data


def model_from_json(data, strict=False) -> CohomModel:
    try:
        name = data["name"]
        dim = data["dim"]
        basis = {int(d): list(labels) for d, labels in data["basis"].items()}
        products = {}
        for row in data.get("products", []):
            key = (row["a"], row["b"])
            if key in products:
                raise ModelError(f"duplicate product row for {key}")
            products[key] = {k: rat(v) for k, v in row["value"].items()}
        integral = {k: rat(v) for k, v in data.get("integral", {}).items()}
        tangent_p1 = data.get("tangent_p1")
        component_of = data.get("components")
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model JSON: {exc}") from exc
    return CohomModel(
        name, dim, basis, products, integral,
        tangent_p1=tangent_p1, component_of=component_of,
        validate=True, strict=strict,
    )


# -- fixtures ----------------------------------------------------------------


def point():
    return CohomModel("point", 0, {0: ["1"]}, {}, {"1": 1})


def sphere4():
    return CohomModel(
        "s4", 4,
        {0: ["1"], 4: ["v"]},
        {("v", "v"): {}},
        {"v": 1},
        tangent_p1={},
    )


def cp2():
    return CohomModel(
        "cp2", 4,
        {0: ["1"], 2: ["h"], 4: ["h2"]},
        {("h", "h"): {"h2": 1}, ("h", "h2"): {}, ("h2", "h2"): {}},
        {"h2": 1},
        tangent_p1={"h2": 3},
    )


def exterior_model(name, generators, tangent_p1_zero=True):
    """Exterior algebra on odd-degree generators, top product integrating to 1.

    generators: ordered [(label, odd degree)].  Basis labels are concatenations
    of generator labels in the given order; signs follow the Koszul rule, which
    for odd generators is the permutation sign.
    """
    gens = [(str(label), int(d)) for label, d in generators]
    for label, d in gens:
        if d % 2 == 0:
            raise ModelError("exterior_model expects odd-degree generators")
    n = len(gens)
    dim = sum(d for _, d in gens)
    subsets = []
    for mask in range(1 << n):
        idx = tuple(i for i in range(n) if mask >> i & 1)
        subsets.append(idx)

    def label_of(idx):
        if not idx:
            return "1"
        return "".join(gens[i][0] for i in idx)

    def degree_of(idx):
        return sum(gens[i][1] for i in idx)

    basis = {}
    for idx in subsets:
        basis.setdefault(degree_of(idx), []).append(label_of(idx))
    products = {}
    for ia in subsets:
        for ib in subsets:
            if not ia or not ib:
                continue
            if set(ia) & set(ib):
                products[(label_of(ia), label_of(ib))] = {}
                continue
            merged = ia + ib
            inversions = sum(
                1 for p in range(len(merged)) for q in range(p + 1, len(merged))
                if merged[p] > merged[q]
            )
            sign = -1 if inversions % 2 else 1
            products[(label_of(ia), label_of(ib))] = {label_of(tuple(sorted(merged))): sign}
    top = label_of(tuple(range(n)))
    kwargs = {"tangent_p1": {}} if (tangent_p1_zero and dim >= 4) else {}
    return CohomModel(name, dim, basis, products, {top: 1}, **kwargs)


def torus3():
    return exterior_model("t3", [("t1", 1), ("t2", 1), ("t3", 1)])


def t3_x_s3():
    return exterior_model("t3s3", [("t1", 1), ("t2", 1), ("t3", 1), ("s", 3)])


def disjoint_union(models, name=None):
    """Disjoint union: direct sum in positive degrees, one unit per component.

    All summands must share the top dimension; the integral is the sum of the
    component integrals.  Labels are suffixed with '@<component>'.
    """
    models = list(models)
    if not models:
        raise ModelError("disjoint union of nothing")
    dim = models[0].dim
    if any(m.dim != dim for m in models):
        raise ModelError("disjoint union requires equal dimensions")
    names = []
    for m in models:
        base = m.name
        candidate = base
        k = 0
        while candidate in names:
            k += 1
            candidate = f"{base}#{k}"
        names.append(candidate)
    name = name or "+".join(names)

    def tag(label, comp_idx):
        # Inner component tags from nested unions are preserved verbatim.
        return f"{label}@{names[comp_idx]}"

    basis = {}
    component_of = {}
    products = {}
    integral = {}
    tangent = {}
    has_tangent = all(m.tangent_p1 is not None for m in models)
    for ci, m in enumerate(models):
        for d in sorted(m.basis):
            basis.setdefault(d, []).extend(tag(lbl, ci) for lbl in m.basis[d])
        for lbl in m.all_labels():
            component_of[tag(lbl, ci)] = names[ci]
        for (a, b), value in m.products.items():
            products[(tag(a, ci), tag(b, ci))] = {tag(k, ci): v for k, v in value.items()}
        for lbl, v in m.integral.items():
            integral[tag(lbl, ci)] = v
        if has_tangent:
            for lbl, v in m.tangent_p1.coeffs.items():
                tangent[tag(lbl, ci)] = v
    return CohomModel(
        name, dim, basis, products, integral,
        tangent_p1=tangent if has_tangent else None,
        component_of=component_of,
        validate=False,
    )


def synthetic_four_manifold(name, pairing, sign_x=None):
    """Closed-4-manifold shadow: 1, x1..xr in degree 2, and a volume dual v.

    pairing is the r x r symmetric rational matrix of integrate(xi * xj).
    When sign_x is given, tangent_p1 is set to 3*sign_x*v so the signature
    integral identity holds by construction.
    """
    r = len(pairing)
    labels = [f"x{i+1}" for i in range(r)]
    basis = {0: ["1"], 4: ["v"]}
    if r:
        basis[2] = labels
    products = {}
    for i in range(r):
        for j in range(r):
            c = rat(pairing[i][j])
            products[(labels[i], labels[j])] = {"v": c} if c != 0 else {}
    tangent = None if sign_x is None else {"v": 3 * rat(sign_x)}
    return CohomModel(name, 4, basis, products, {"v": 1}, tangent_p1=tangent)


FIXTURE_BUILDERS = {
    "point": point,
    "s4": sphere4,
    "cp2": cp2,
    "t3": torus3,
    "t3s3": t3_x_s3,
}
