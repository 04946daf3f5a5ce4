"""Triple linking of algebraically split 3-component links, and its signature model.

The invariant is read off a Magnus expansion truncated at total degree 2:
each Wirtinger arc meridian expands as 1 + x_c + (higher), and the x_i x_j
coefficient of a zero-framed longitude is the triple linking number.  The
companion construction converts that integer into intersection data on a
disjoint union of three closed 4-manifolds whose quasi-invariant evaluates
to -8 times it.

Components are numbered 1..k throughout this module, matching the symbols
x_1..x_k of the expansion (elsewhere in the package component indices are
0-based).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cohomring import CohomModel, element_to_json, model_to_json
from .emanifold import QuasiEData, sigma_quasi
from .exactlin import rat, rat_to_str
from .linkdiag import LinkDiagram, is_algebraically_split

__all__ = [
    "MilnorError",
    "TruncatedMagnus",
    "WirtingerData",
    "magnus_one",
    "magnus_meridian",
    "magnus_mul",
    "magnus_inv",
    "magnus_pow",
    "wirtinger_data",
    "longitude_expansion",
    "mu123",
    "milnor_sigma_model",
    "sigma_of_link",
]


class MilnorError(ValueError):
    pass


class TruncatedMagnus:
    """Element of Q<x_1..x_n> with all terms of degree >= 3 dropped.

    constant: Fraction; linear: {i: Fraction}; quadratic: {(i, j): Fraction}
    with i, j in 1..n_symbols and the pair order significant.
    """

    __slots__ = ("n_symbols", "constant", "linear", "quadratic")

    def __init__(self, n_symbols, constant=0, linear=None, quadratic=None):
        if not (isinstance(n_symbols, int) and n_symbols >= 1):
            raise MilnorError("n_symbols must be a positive integer")
        self.n_symbols = n_symbols
        self.constant = rat(constant)
        self.linear = {}
        for i, c in (linear or {}).items():
            self._check_symbol(i)
            c = rat(c)
            if c:
                self.linear[i] = c
        self.quadratic = {}
        for (i, j), c in (quadratic or {}).items():
            self._check_symbol(i)
            self._check_symbol(j)
            c = rat(c)
            if c:
                self.quadratic[(i, j)] = c

    def _check_symbol(self, i):
        if not (isinstance(i, int) and 1 <= i <= self.n_symbols):
            raise MilnorError(f"symbol index {i!r} outside 1..{self.n_symbols}")

    def coeff(self, key) -> Fraction:
        """Coefficient of the monomial: () for 1, (i,) for x_i, (i, j) for x_i x_j."""
        key = tuple(key)
        if key == ():
            return self.constant
        if len(key) == 1:
            self._check_symbol(key[0])
            return self.linear.get(key[0], Fraction(0))
        if len(key) == 2:
            self._check_symbol(key[0])
            self._check_symbol(key[1])
            return self.quadratic.get(key, Fraction(0))
        raise MilnorError("monomials have degree at most 2 here")

    def __eq__(self, other):
        if not isinstance(other, TruncatedMagnus):
            return NotImplemented
        return (
            self.n_symbols == other.n_symbols
            and self.constant == other.constant
            and self.linear == other.linear
            and self.quadratic == other.quadratic
        )

    def __hash__(self):
        return hash((
            self.n_symbols,
            self.constant,
            frozenset(self.linear.items()),
            frozenset(self.quadratic.items()),
        ))

    def __mul__(self, other):
        return magnus_mul(self, other)

    def __repr__(self):
        parts = []
        if self.constant:
            parts.append(str(self.constant))
        for i in sorted(self.linear):
            parts.append(f"{self.linear[i]}*x{i}")
        for i, j in sorted(self.quadratic):
            parts.append(f"{self.quadratic[(i, j)]}*x{i}x{j}")
        return "TruncatedMagnus(" + (" + ".join(parts) or "0") + ")"

    def to_json(self):
        return {
            "constant": rat_to_str(self.constant),
            "linear": {f"x{i}": rat_to_str(c) for i, c in sorted(self.linear.items())},
            "quadratic": {
                f"x{i}x{j}": rat_to_str(c) for (i, j), c in sorted(self.quadratic.items())
            },
        }


def magnus_one(n_symbols: int) -> TruncatedMagnus:
    return TruncatedMagnus(n_symbols, 1)


def magnus_meridian(n_symbols: int, i: int) -> TruncatedMagnus:
    """The free-group generator image 1 + x_i."""
    return TruncatedMagnus(n_symbols, 1, {i: 1})


def magnus_mul(u: TruncatedMagnus, v: TruncatedMagnus) -> TruncatedMagnus:
    if u.n_symbols != v.n_symbols:
        raise MilnorError("operands use different symbol sets")
    linear = {}
    for i, c in u.linear.items():
        linear[i] = linear.get(i, Fraction(0)) + c * v.constant
    for i, c in v.linear.items():
        linear[i] = linear.get(i, Fraction(0)) + c * u.constant
    quadratic = {}
    for key, c in u.quadratic.items():
        quadratic[key] = quadratic.get(key, Fraction(0)) + c * v.constant
    for key, c in v.quadratic.items():
        quadratic[key] = quadratic.get(key, Fraction(0)) + c * u.constant
    for i, ci in u.linear.items():
        for j, cj in v.linear.items():
            key = (i, j)
            quadratic[key] = quadratic.get(key, Fraction(0)) + ci * cj
    return TruncatedMagnus(u.n_symbols, u.constant * v.constant, linear, quadratic)


def magnus_inv(u: TruncatedMagnus) -> TruncatedMagnus:
    """Inverse of a group element: (1 + l + q)^-1 = 1 - l + (l*l - q)."""
    if u.constant != 1:
        raise MilnorError("only elements with constant term 1 are invertible here")
    linear = {i: -c for i, c in u.linear.items()}
    quadratic = {key: -c for key, c in u.quadratic.items()}
    for i, ci in u.linear.items():
        for j, cj in u.linear.items():
            key = (i, j)
            quadratic[key] = quadratic.get(key, Fraction(0)) + ci * cj
    return TruncatedMagnus(u.n_symbols, 1, linear, quadratic)


def magnus_pow(u: TruncatedMagnus, e: int) -> TruncatedMagnus:
    out = magnus_one(u.n_symbols)
    base = u if e >= 0 else magnus_inv(u)
    for _ in range(abs(e)):
        out = magnus_mul(out, base)
    return out


# -- Wirtinger arcs and longitudes ------------------------------------------------


@dataclass
class WirtingerData:
    """Arc bookkeeping for the expansion.

    An arc is a maximal run of edges between two passages *under* a crossing;
    its identifier is its first edge (for a component that never passes under,
    the whole cycle is one arc named by its smallest edge).

    arcs: arc -> component (1-based).
    relations: per crossing, (outgoing under-arc, incoming under-arc,
        over-arc, sign); the outgoing meridian is the incoming one conjugated
        by the over-meridian^sign.
    base_arc: component -> arc where its traversal starts.
    conjugators: arc -> expansion of the word w_a with m_a = w_a^-1 (1+x_c) w_a.
    meridians: arc -> expansion m_a (linear part exactly x_{component}).
    longitudes: component -> expansion of its zero-framed longitude.
    """

    arcs: dict
    relations: list
    base_arc: dict
    conjugators: dict
    meridians: dict
    longitudes: dict

    def to_json(self):
        return {
            "arcs": {str(a): c for a, c in sorted(self.arcs.items())},
            "relations": [list(r) for r in self.relations],
            "base_arc": {str(c): a for c, a in sorted(self.base_arc.items())},
            "longitudes": {
                str(c): l.to_json() for c, l in sorted(self.longitudes.items())
            },
        }


def _arc_partition(diagram: LinkDiagram):
    """Map every edge to its arc and list each component's arcs in cycle order."""
    breaker = {x.under_out for x in diagram.crossings}
    arc_of = {}
    comp_arcs = []
    for cyc in diagram.components:
        starts = [e for e in cyc if e in breaker]
        if not starts:
            for e in cyc:
                arc_of[e] = cyc[0]
            comp_arcs.append([cyc[0]])
            continue
        i0 = cyc.index(starts[0])
        order = []
        cur = None
        for off in range(len(cyc)):
            e = cyc[(i0 + off) % len(cyc)]
            if e in breaker:
                cur = e
                order.append(e)
            arc_of[e] = cur
        comp_arcs.append(order)
    return arc_of, comp_arcs


def wirtinger_data(diagram: LinkDiagram, base_arcs=None) -> WirtingerData:
    """Run the two-pass expansion over every component.

    base_arcs optionally maps 1-based component numbers to arc identifiers;
    unspecified components start at the arc containing their smallest edge.
    """
    k = diagram.n_components
    if k < 1:
        raise MilnorError("the diagram has no components")
    arc_of, comp_arcs = _arc_partition(diagram)
    arcs = {a: ci + 1 for ci, order in enumerate(comp_arcs) for a in order}

    base_arc = {}
    for ci, cyc in enumerate(diagram.components):
        base_arc[ci + 1] = arc_of[cyc[0]]
    for comp, arc in (base_arcs or {}).items():
        if comp not in base_arc:
            raise MilnorError(f"no component {comp}")
        if arcs.get(arc) != comp:
            raise MilnorError(f"arc {arc} does not belong to component {comp}")
        base_arc[comp] = arc

    head_under = {x.under_in: x for x in diagram.crossings}
    relations = [
        (arc_of[x.under_out], arc_of[x.under_in], arc_of[x.over_in], x.sign)
        for x in diagram.crossings
    ]

    def walk(ci):
        # edges of component ci in cycle order, starting at the base arc
        cyc = diagram.components[ci]
        start = base_arc[ci + 1]
        i0 = cyc.index(start)  # an arc's identifier is its first edge
        return [cyc[(i0 + off) % len(cyc)] for off in range(len(cyc))]

    # pass 1: linear conjugator parts; only these feed the degree-2 meridians
    lin = {}
    for ci in range(k):
        acc = {}
        for e in walk(ci):
            a = arc_of[e]
            if a not in lin:
                lin[a] = dict(acc)
            x = head_under.get(e)
            if x is not None:
                over = arcs[arc_of[x.over_in]]
                acc[over] = acc.get(over, 0) + x.sign
    assert set(lin) == set(arcs), "pass 1 missed an arc"

    # pass 2: exact degree-2 meridians, full conjugators, longitudes
    meridians = {}
    for a, comp in arcs.items():
        ell = lin[a]
        quadratic = {}
        for j, c in ell.items():
            quadratic[(comp, j)] = quadratic.get((comp, j), Fraction(0)) + c
            quadratic[(j, comp)] = quadratic.get((j, comp), Fraction(0)) - c
        meridians[a] = TruncatedMagnus(k, 1, {comp: 1}, quadratic)
        assert meridians[a].linear == {comp: Fraction(1)}

    conjugators = {}
    longitudes = {}
    for ci in range(k):
        w = magnus_one(k)
        for e in walk(ci):
            a = arc_of[e]
            if a not in conjugators:
                conjugators[a] = w
                assert {i: c for i, c in w.linear.items()} == {
                    i: Fraction(c) for i, c in lin[a].items() if c
                }, "conjugator passes disagree"
            x = head_under.get(e)
            if x is not None:
                w = magnus_mul(w, magnus_pow(meridians[arc_of[x.over_in]], x.sign))
        framing = w.coeff((ci + 1,))
        if framing.denominator != 1:
            raise MilnorError("longitude framing is not integral")
        lon = magnus_mul(w, magnus_pow(magnus_meridian(k, ci + 1), -int(framing)))
        assert lon.coeff((ci + 1,)) == 0, "framing correction failed"
        longitudes[ci + 1] = lon

    return WirtingerData(arcs, relations, base_arc, conjugators, meridians, longitudes)


def longitude_expansion(diagram: LinkDiagram, component: int, base_arcs=None) -> TruncatedMagnus:
    """Zero-framed longitude of one component (1-based) in the truncated ring."""
    if not 1 <= component <= diagram.n_components:
        raise MilnorError(f"no component {component}")
    return wirtinger_data(diagram, base_arcs).longitudes[component]


def mu123(diagram: LinkDiagram, base_arcs=None) -> int:
    """Triple linking number: the x1 x2 coefficient of longitude 3.

    Requires exactly three components with pairwise linking numbers zero;
    under that hypothesis the result has no indeterminacy.
    """
    if diagram.n_components != 3:
        raise MilnorError("the triple linking number needs exactly 3 components")
    if not is_algebraically_split(diagram):
        raise MilnorError("the diagram is not algebraically split")
    value = longitude_expansion(diagram, 3, base_arcs).coeff((1, 2))
    if value.denominator != 1:
        raise MilnorError("non-integral triple linking coefficient")
    return int(value)


# -- the signature model -----------------------------------------------------------


def milnor_sigma_model(mu: int):
    """Intersection model of three closed pieces carrying the triple linking.

    Pieces X1, X2, X3 carry degree-2 classes g12, g13 (on X1) and g23 (on X2)
    with g_ij^2 = 0, g12*g13 = mu * top(X1) and all products against g23 zero;
    gamma is their sum, Sign X = 0 and the multiplicity is 1.  Returns
    (QuasiEData, sigma) with sigma = -8 * mu.
    """
    mu_r = rat(mu)
    if mu_r.denominator != 1:
        raise MilnorError("mu must be an integer")
    mu = int(mu_r)
    parts = {1: ["u1", "g12", "g13", "t1"], 2: ["u2", "g23", "t2"], 3: ["u3", "t3"]}
    component_of = {label: f"X{i}" for i, labels in parts.items() for label in labels}
    model = CohomModel(
        "milnor-model",
        4,
        {0: ["u1", "u2", "u3"], 2: ["g12", "g13", "g23"], 4: ["t1", "t2", "t3"]},
        {
            ("g12", "g12"): {},
            ("g13", "g13"): {},
            ("g23", "g23"): {},
            ("g12", "g13"): {"t1": mu},
            ("g12", "g23"): {},
            ("g13", "g23"): {},
        },
        {"t1": 1, "t2": 1, "t3": 1},
        component_of=component_of,
    )
    gamma = model.element(2, {"g12": 1, "g13": 1, "g23": 1})
    g12 = model.basis_element("g12")
    g13 = model.basis_element("g13")
    if model.integrate(gamma * gamma) != 2 * model.integrate(g12 * g13):
        raise MilnorError("defect: the square of gamma lost its cross term")
    data = QuasiEData(x_model=model, gamma=gamma, sign_x=0, m=1)
    sigma = sigma_quasi(data)
    if sigma != -8 * mu:
        raise MilnorError("defect: model sigma disagrees with -8*mu")
    return data, sigma


def sigma_of_link(diagram: LinkDiagram, base_arcs=None) -> Fraction:
    """Signature of the associated pairing: -8 times the triple linking number."""
    _, sigma = milnor_sigma_model(mu123(diagram, base_arcs))
    return sigma


def milnor_to_json(diagram: LinkDiagram, base_arcs=None):
    """JSON payload: the invariant, its signature, and the model pieces."""
    mu = mu123(diagram, base_arcs)
    data, sigma = milnor_sigma_model(mu)
    return {
        "mu123": mu,
        "sigma": rat_to_str(sigma),
        "model": {
            "x_model": model_to_json(data.x_model),
            "gamma": element_to_json(data.gamma),
            "signX": data.sign_x,
            "m": data.m,
        },
    }
