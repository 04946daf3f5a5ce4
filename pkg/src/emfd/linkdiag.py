"""Oriented link diagrams from PD codes.

Format: whitespace-separated terms.  "X(a,b,c,d)" is a crossing whose four
edge labels are read counterclockwise starting at the incoming under-strand
(the under-strand runs a -> c; the over-strand occupies b and d, its direction
recovered from the labels).  "U(k)" is a crossingless unknot component with
single edge label k.  An optional leading header "components: [[..],[..]]"
pins component order.  Edge labels are positive integers, increasing along
the orientation within each component (cyclically, one wrap allowed).

Sign convention: +1 when the under-strand passes right-to-left beneath the
over-strand, i.e. when the over-strand runs d -> b (det[over, under] > 0 in
the plane); see docs/conventions.md for the picture.

The parsed diagram is canonically relabeled 1..N in traversal order, so any
two textual presentations of the same labeled diagram normalize identically.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "PDError",
    "Crossing",
    "LinkDiagram",
    "parse_pd",
    "linking_matrix",
    "is_algebraically_split",
    "split_pieces",
    "mirror",
    "reverse_component",
    "reverse_all",
    "ambient_mirror",
    "relabel_components",
]


class PDError(ValueError):
    """Malformed or inconsistent PD input."""


_TERM = re.compile(r"([XU])\(([^()]*)\)")


@dataclass(frozen=True)
class Crossing:
    quad: tuple          # (a, b, c, d) canonical edge labels, CCW from under-in
    sign: int            # +1 or -1

    @property
    def under_in(self):
        return self.quad[0]

    @property
    def under_out(self):
        return self.quad[2]

    @property
    def over_in(self):
        # sign +1: over runs d -> b; sign -1: over runs b -> d
        return self.quad[3] if self.sign > 0 else self.quad[1]

    @property
    def over_out(self):
        return self.quad[1] if self.sign > 0 else self.quad[3]


class LinkDiagram:
    """Canonicalized oriented link diagram.

    crossings: list of Crossing with canonical labels.
    components: list of edge-label cycles in traversal order.
    unknots: indices of crossingless components.
    """

    def __init__(self, crossings, components, unknot_flags):
        self.crossings = crossings
        self.components = components
        self.unknot_flags = unknot_flags
        self.n_components = len(components)
        self.component_of = {}
        for ci, cyc in enumerate(components):
            for e in cyc:
                self.component_of[e] = ci
        self._succ = {}
        for cyc in components:
            for i, e in enumerate(cyc):
                self._succ[e] = cyc[(i + 1) % len(cyc)]

    def successor(self, edge):
        return self._succ[edge]

    @property
    def n_edges(self):
        return sum(len(c) for c in self.components)

    def writhes(self):
        """Per-component self-writhe (sum of signs of self-crossings)."""
        w = [0] * self.n_components
        for x in self.crossings:
            cu = self.component_of[x.under_in]
            co = self.component_of[x.over_in]
            if cu == co:
                w[cu] += x.sign
        return w

    def total_writhe(self):
        return sum(x.sign for x in self.crossings)

    def to_text(self):
        parts = []
        for i, cyc in enumerate(self.components):
            if self.unknot_flags[i]:
                parts.append(f"U({cyc[0]})")
        parts.extend("X({},{},{},{})".format(*x.quad) for x in self.crossings)
        return " ".join(parts)

    def __repr__(self):
        return f"LinkDiagram({self.n_components} components, {len(self.crossings)} crossings)"


# -- parsing -------------------------------------------------------------------


def _tokenize(text: str):
    """Split the source into the optional component header and X/U terms."""
    header = None
    body = text
    # strip comment lines
    lines = [ln for ln in body.splitlines() if not ln.lstrip().startswith("#")]
    body = "\n".join(lines)
    m = re.search(r"components\s*:\s*(\[.*\])", body, re.DOTALL)
    if m:
        try:
            header = json.loads(m.group(1))
        except json.JSONDecodeError as exc:
            raise PDError(f"unreadable components header: {exc}") from exc
        if not (
            isinstance(header, list)
            and all(
                isinstance(grp, list) and all(type(v) is int for v in grp)
                for grp in header
            )
        ):
            raise PDError("unreadable components header: expected a list of integer lists")
        body = body[: m.start()] + body[m.end():]
    terms = []
    consumed = []
    for tm in _TERM.finditer(body):
        kind, inner = tm.group(1), tm.group(2)
        fields = [f.strip() for f in inner.split(",")] if inner.strip() else []
        try:
            labels = tuple(int(f) for f in fields)
        except ValueError as exc:
            raise PDError(f"non-integer label in {tm.group(0)!r}") from exc
        if kind == "X" and len(labels) != 4:
            raise PDError(f"{tm.group(0)!r}: a crossing needs exactly 4 labels")
        if kind == "U" and len(labels) != 1:
            raise PDError(f"{tm.group(0)!r}: an unknot term needs exactly 1 label")
        if any(v <= 0 for v in labels):
            raise PDError(f"{tm.group(0)!r}: labels must be positive integers")
        terms.append((kind, labels))
        consumed.append(tm.group(0))
    leftover = _TERM.sub("", body).strip()
    if leftover:
        raise PDError(f"unrecognized input near {leftover.split()[0]!r}")
    if not terms:
        raise PDError("empty PD code")
    return header, terms


class _UnionFind(dict):
    def find(self, x):
        root = x
        while self.setdefault(root, root) != root:
            root = self[root]
        while self[x] != root:
            self[x], x = root, self[x]
        return root

    def union(self, a, b):
        self[self.find(a)] = self.find(b)


def _raw_components(quads, u_labels):
    """Partition labels into components and derive cyclic successor order.

    Within a component, labels must increase along the orientation, wrapping
    once; the successor of a label is the next-larger label of its component.
    """
    uf = _UnionFind()
    for a, b, c, d in quads:
        uf.union(a, c)
        uf.union(b, d)
    groups = {}
    for a, b, c, d in quads:
        for v in (a, b, c, d):
            groups.setdefault(uf.find(v), set()).add(v)
    comps = [sorted(g) for g in groups.values()]
    for k in u_labels:
        comps.append([k])
    comps.sort(key=lambda g: g[0])
    return comps


def _resolve_signs(quads, succ, component_of, positions):
    """Determine each crossing's sign, disambiguating 2-edge over-components.

    positions: label -> list of (crossing index, slot) occurrences.
    Returns list of signs aligned with quads.
    """
    signs = [0] * len(quads)
    for idx, (a, b, c, d) in enumerate(quads):
        if succ[a] != c:
            raise PDError(
                f"crossing X({a},{b},{c},{d}): under-strand {a}->{c} "
                f"contradicts label order (expected {a}->{succ[a]})"
            )
        fwd = succ[d] == b   # over runs d -> b  (+1)
        bwd = succ[b] == d   # over runs b -> d  (-1)
        if fwd and not bwd:
            signs[idx] = 1
        elif bwd and not fwd:
            signs[idx] = -1
        elif not fwd and not bwd:
            raise PDError(
                f"crossing X({a},{b},{c},{d}): over-strand labels {b},{d} are "
                "not consecutive along their component"
            )
        else:
            # Both orders are formally consistent: the over-strand belongs to a
            # 2-edge component whose sorted cyclic order carries no direction.
            signs[idx] = _disambiguate(idx, quads, succ, positions, a, b, c, d)
    return signs


def _disambiguate(idx, quads, succ, positions, a, b, c, d):
    comp_edges = {b, d}
    if b == d:
        raise PDError(
            f"crossing X({a},{b},{c},{d}): a component meeting the diagram in a "
            "single edge cannot cross anything"
        )
    # The component {b, d} has exactly two passages.  If the other passage is
    # an under-passage, its incoming slot fixes the direction: an edge heads
    # into slot a there, so its occurrence here must be outgoing.
    for e in (b, d):
        for (cj, slot) in positions[e]:
            if cj == idx and slot in (1, 3):
                continue
            if slot == 0:
                # e is incoming (head) at crossing cj, so outgoing here.
                # It sits at slot 1 (b) or 3 (d) of this crossing.
                out_slot = 1 if e == b else 3
                # over exits at b => entered at d => +1 ; exits at d => -1
                return 1 if out_slot == 1 else -1
            if slot == 2:
                # e is outgoing at cj, so incoming here.
                in_slot = 1 if e == b else 3
                return 1 if in_slot == 3 else -1
    # Both passages are over-passages: direction is genuinely absent from the
    # code.  Convention: the smaller edge label exits (is the over-out edge)
    # at its first-listed occurrence, scanning crossings in input order.
    e = min(b, d)
    first = min(positions[e])
    slot_here = 1 if e == b else 3
    if first[0] == idx:
        # e is over-out here: exits at b => entered at d => +1
        return 1 if slot_here == 1 else -1
    # e exits at the other crossing, so it is the over-in edge here
    return 1 if slot_here == 3 else -1


def parse_pd(text: str) -> LinkDiagram:
    header, terms = _tokenize(text)
    quads = [labels for kind, labels in terms if kind == "X"]
    u_labels = [labels[0] for kind, labels in terms if kind == "U"]

    seen = {}
    for kind, labels in terms:
        for v in labels:
            seen[v] = seen.get(v, 0) + 1
    for v, count in sorted(seen.items()):
        expect = 1 if v in u_labels else 2
        if count != expect:
            raise PDError(f"edge label {v} appears {count} times (expected {expect})")
    if set(u_labels) & {v for q in quads for v in q}:
        raise PDError("an unknot-term label also appears in a crossing")

    comps = _raw_components(quads, u_labels)
    for g in comps:
        if len(g) > 1 and len(g) % 2 != 0:
            raise PDError(
                f"component with edges {g} has an odd number of edges; a closed "
                "strand meets the crossings an even number of times"
            )

    if header is not None:
        claimed = [sorted(g) for g in header]
        if sorted(map(tuple, claimed)) != sorted(map(tuple, comps)):
            raise PDError("components header does not match the label partition")
        comps = claimed

    succ = {}
    for g in comps:
        for i, e in enumerate(g):
            succ[e] = g[(i + 1) % len(g)]

    component_of = {e: ci for ci, g in enumerate(comps) for e in g}
    positions = {}
    for ci, q in enumerate(quads):
        for slot, e in enumerate(q):
            positions.setdefault(e, []).append((ci, slot))

    signs = _resolve_signs(quads, succ, component_of, positions)

    # canonical relabel: components in given order, each starting at its
    # smallest original label, new labels 1..N in traversal order
    relabel = {}
    next_label = 1
    new_components = []
    unknot_flags = []
    for g in comps:
        cyc = []
        start = g[0]
        e = start
        for _ in range(len(g)):
            relabel[e] = next_label
            cyc.append(next_label)
            next_label += 1
            e = succ[e]
        assert e == start, "component cycle failed to close"
        new_components.append(cyc)
        unknot_flags.append(len(g) == 1 and g[0] in u_labels)

    crossings = [
        Crossing(quad=tuple(relabel[v] for v in q), sign=s)
        for q, s in zip(quads, signs)
    ]
    diagram = LinkDiagram(crossings, new_components, unknot_flags)
    _validate_planarity(diagram)
    return diagram


# -- planar structure ----------------------------------------------------------
#
# Corner k of a crossing is the region between slots k and k+1 (mod 4), with
# slots in counterclockwise order.  Faces of the diagram are orbits of corners
# under "walk the boundary keeping the face on the left": leave along the edge
# at slot k, arrive at its far end in slot j, continue with corner j-1.


def _edge_endpoints(diagram):
    """edge -> {'tail': (ci, slot), 'head': (ci, slot)} over crossing slots.

    Slot 0 is an incoming (head) position and slot 2 outgoing; the over slots
    follow the crossing's sign.
    """
    ends = {}

    def put(e, kind, pos):
        slot = ends.setdefault(e, {})
        if kind in slot:
            raise PDError(f"edge {e} has two {kind} endpoints; inconsistent code")
        slot[kind] = pos

    for ci, x in enumerate(diagram.crossings):
        a, b, c, d = x.quad
        put(a, "head", (ci, 0))
        put(c, "tail", (ci, 2))
        put(x.over_in, "head", (ci, 3 if x.sign > 0 else 1))
        put(x.over_out, "tail", (ci, 1 if x.sign > 0 else 3))
    return ends


def _slot_of(diagram, ends):
    """(ci, slot) -> edge label at that slot."""
    at = {}
    for e, pos in ends.items():
        for kind in ("tail", "head"):
            at[pos[kind]] = e
    for ci, x in enumerate(diagram.crossings):
        for slot, e in enumerate(x.quad):
            assert at[(ci, slot)] == e
    return at


def faces(diagram):
    """Faces of the 4-valent diagram as corner orbits; also checks planarity.

    Returns (faces, corner_face) where faces is a list of corner lists and
    corner_face maps (ci, k) -> face index.
    """
    ends = _edge_endpoints(diagram)
    for e, pos in ends.items():
        if "head" not in pos or "tail" not in pos:
            raise PDError(f"edge {e} is missing an endpoint; inconsistent code")

    n = len(diagram.crossings)
    corners = [(ci, k) for ci in range(n) for k in range(4)]

    def next_corner(corner):
        # corner k sits between slots k and k+1 (counterclockwise); walking
        # with the face on the left we leave along the strand at slot k and
        # take the corner clockwise-adjacent to the slot we arrive at
        ci, k = corner
        e = diagram.crossings[ci].quad[k]
        here = (ci, k)
        far = ends[e]["head"] if ends[e]["tail"] == here else ends[e]["tail"]
        cj, j = far
        return (cj, (j - 1) % 4)

    face_list = []
    corner_face = {}
    for corner in corners:
        if corner in corner_face:
            continue
        orbit = []
        cur = corner
        while cur not in corner_face:
            corner_face[cur] = len(face_list)
            orbit.append(cur)
            cur = next_corner(cur)
        assert cur == corner, "corner walk re-entered an orbit off its start"
        face_list.append(orbit)
    return face_list, corner_face


def _validate_planarity(diagram):
    """Euler check per connected piece: V - E + F must equal 2."""
    if not diagram.crossings:
        return
    face_list, corner_face = faces(diagram)
    for piece in split_pieces(diagram):
        if not piece:   # crossingless component
            continue
        v = len(piece)
        e = 2 * v
        piece_faces = {corner_face[(ci, k)] for ci in piece for k in range(4)}
        f = len(piece_faces)
        if v - e + f != 2:
            raise PDError(
                "diagram is not planar: a connected piece has Euler "
                f"characteristic {v - e + f} (V={v}, E={e}, F={f})"
            )


def split_pieces(diagram):
    """Connected pieces of the diagram as sets of crossing indices.

    Crossingless components contribute an empty set each, at the end.
    """
    uf = _UnionFind()
    for ci, x in enumerate(diagram.crossings):
        for e in x.quad:
            uf.union(("c", ci), ("e", e))
    groups = {}
    for ci in range(len(diagram.crossings)):
        groups.setdefault(uf.find(("c", ci)), set()).add(ci)
    pieces = sorted(groups.values(), key=min)
    for flag in diagram.unknot_flags:
        if flag:
            pieces.append(set())
    return pieces


# -- pairwise linking ----------------------------------------------------------


def linking_matrix(diagram: LinkDiagram):
    """lk(K_i, K_j) = half the signed count of crossings between i and j.

    Diagonal entries are 0; self-writhes are reported by writhes().
    """
    n = diagram.n_components
    lk = [[0] * n for _ in range(n)]
    for x in diagram.crossings:
        i = diagram.component_of[x.under_in]
        j = diagram.component_of[x.over_in]
        if i != j:
            lk[i][j] += x.sign
            lk[j][i] += x.sign
    for i in range(n):
        for j in range(n):
            if i != j:
                half = Fraction(lk[i][j], 2)
                assert half.denominator == 1, "odd crossing count between closed curves"
                lk[i][j] = int(half)
    return lk


def is_algebraically_split(diagram: LinkDiagram) -> bool:
    lk = linking_matrix(diagram)
    n = diagram.n_components
    return all(lk[i][j] == 0 for i in range(n) for j in range(n) if i != j)


# -- diagram transforms ----------------------------------------------------------


def _rebuild(diagram, quads, u_labels, comps):
    """Re-run canonicalization on transformed raw data."""
    parts = [f"X({q[0]},{q[1]},{q[2]},{q[3]})" for q in quads]
    parts.extend(f"U({k})" for k in u_labels)
    text = " ".join(parts)
    if comps is not None:
        text = "components: " + json.dumps(comps) + "\n" + text
    return parse_pd(text)


def mirror(diagram: LinkDiagram) -> LinkDiagram:
    """Flip every crossing (exchange over- and under-strand).

    The new quadruple starts at the new incoming under-strand, which is the
    old over-strand's entry: positive (a,b,c,d) -> (d,a,b,c), negative
    (a,b,c,d) -> (b,c,d,a).
    """
    quads = []
    for x in diagram.crossings:
        a, b, c, d = x.quad
        quads.append((d, a, b, c) if x.sign > 0 else (b, c, d, a))
    u_labels = [cyc[0] for cyc, f in zip(diagram.components, diagram.unknot_flags) if f]
    comps = [sorted(c) for c in diagram.components]
    return _rebuild(diagram, quads, u_labels, comps)


def reverse_component(diagram: LinkDiagram, index: int) -> LinkDiagram:
    """Reverse the orientation of one component (0-based index)."""
    if not 0 <= index < diagram.n_components:
        raise PDError(f"no component {index}")
    cyc = diagram.components[index]
    k = len(cyc)
    labels = sorted(cyc)
    if k == 2 and not diagram.unknot_flags[index]:
        mine0 = set(cyc)
        if not any(x.under_in in mine0 for x in diagram.crossings):
            # the label remap is the identity on a two-edge cycle and no
            # under-passage quad records the direction, so the reversal
            # would be silently lost on re-parse
            raise PDError(
                "cannot reverse a two-edge component that never passes "
                "under: its orientation is fixed by convention"
            )
    # old traversal visits sorted labels cyclically; the reversed traversal
    # from the smallest label visits them in descending wrap order, so the
    # j-th sorted label maps to position k+1-j (1-based), keeping label j=0.
    remap = {labels[0]: labels[0]}
    for j in range(1, k):
        remap[labels[j]] = labels[k - j]
    mine = set(cyc)

    def fix(e):
        return remap[e] if e in mine else e

    quads = []
    for x in diagram.crossings:
        a, b, c, d = (fix(v) for v in x.quad)
        if x.under_in in mine:
            a, b, c, d = c, d, a, b   # incoming under switches ends
        quads.append((a, b, c, d))
    u_labels = [c[0] for c, f in zip(diagram.components, diagram.unknot_flags) if f]
    comps = [sorted(c) for c in diagram.components]
    return _rebuild(diagram, quads, u_labels, comps)


def reverse_all(diagram: LinkDiagram) -> LinkDiagram:
    """Reverse every component at once.

    Reversing both strands of a crossing keeps its sign, and the quadruple
    read from the reversed traversal is the old one rotated by two, so this
    works even where a single-component reversal would be inexpressible.
    """
    remap = {}
    for cyc in diagram.components:
        labels = sorted(cyc)
        k = len(labels)
        remap[labels[0]] = labels[0]
        for j in range(1, k):
            remap[labels[j]] = labels[k - j]
    quads = [
        (remap[x.quad[2]], remap[x.quad[3]], remap[x.quad[0]], remap[x.quad[1]])
        for x in diagram.crossings
    ]
    u_labels = [c[0] for c, f in zip(diagram.components, diagram.unknot_flags) if f]
    comps = [sorted(c) for c in diagram.components]
    out = _rebuild(diagram, quads, u_labels, comps)
    for x, y in zip(diagram.crossings, out.crossings):
        if x.sign != y.sign:
            # an all-over two-edge component re-parsed the other way around
            raise PDError(
                "reversal of this diagram is not expressible: a two-edge "
                "component's orientation is pinned by convention"
            )
    return out


def ambient_mirror(diagram: LinkDiagram) -> LinkDiagram:
    """Mirror image with all component orientations reversed.

    This is the image of the link under an ambient reflection composed with
    reversing every component, the operation that negates the triple linking
    number; the bare crossing flip does not (see docs/conventions.md).
    """
    return reverse_all(mirror(diagram))


def relabel_components(diagram: LinkDiagram, perm) -> LinkDiagram:
    """Reorder components by perm: new component i is old component perm[i]."""
    if sorted(perm) != list(range(diagram.n_components)):
        raise PDError("perm must be a permutation of component indices")
    comps = [sorted(diagram.components[p]) for p in perm]
    quads = [x.quad for x in diagram.crossings]
    u_labels = [c[0] for c, f in zip(diagram.components, diagram.unknot_flags) if f]
    return _rebuild(diagram, quads, u_labels, comps)
