"""Seifert surfaces from link diagrams: circles, genus basis, Seifert matrix.

Pipeline per connected piece of the diagram:

1. Oriented smoothing turns every crossing into two parallel arcs; the arcs
   close up into disjoint embedded circles (Seifert circles).
2. The circles and the regions between them form a tree (s circles always cut
   the plane into s+1 regions).  The diagram is in braid form when that tree
   is a path and no region touches two circles from the same side; otherwise
   a finger move (a crossing-pair insertion across an offending region) brings
   it closer, and finitely many such moves always succeed.
3. In braid form the surface is a stack of disks joined by twisted bands, one
   band per crossing.  Rows of bands between consecutive disks yield the
   standard genus basis (loops through consecutive band pairs), and the
   Seifert pairing of pushed-off basis loops is read off a small case table.

Split diagrams are processed per piece and assembled block-diagonally
(signatures add over split unions); crossingless components contribute a
circle and nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactlin import signature
from .linkdiag import (
    LinkDiagram,
    PDError,
    _rebuild,
    _UnionFind,
    faces,
    linking_matrix,
    split_pieces,
)

__all__ = ["SeifertData", "seifert_matrix", "link_signature", "seifert_circles"]

# Seifert pairing of basis loops from adjacent rows whose feet interleave on
# the shared disk: (V[x][y], V[y][x]) keyed by which loop's interval starts
# first along the disk boundary.  Derived by pushing loops off the stacked-disk
# surface and counting crossings; validated against torus-knot diagrams (and
# their mirrors) whose signatures and Alexander polynomials are classical.
# Negating both pairs is a basis change, so only the relative sign is rigid.
_ADJ_X_FIRST = (-1, 0)
_ADJ_Y_FIRST = (1, 0)


@dataclass
class SeifertData:
    """Output of the Seifert construction.

    seifert_circles: edge-label cycles after smoothing the *input* diagram.
    genus_basis: one bookkeeping record per basis loop of the spanning
        surface (piece / row / band pair with signs, in basis order).
    V: the Seifert matrix (integer, square, block-diagonal over pieces).
    pieces: component indices per connected piece, recording the block
        structure used in place of explicit connecting bands.
    moves: total number of finger moves needed to reach braid form.
    """

    seifert_circles: list
    genus_basis: list
    V: list
    pieces: list
    moves: int = 0

    def to_json(self):
        return {
            "seifert_circles": [list(c) for c in self.seifert_circles],
            "genus_basis": [dict(b) for b in self.genus_basis],
            "V": [list(row) for row in self.V],
            "pieces": [list(p) for p in self.pieces],
            "moves": self.moves,
        }


# -- smoothing -------------------------------------------------------------------


def _smooth_succ(diagram):
    """Successor map of the oriented smoothing: in-edge -> out-edge."""
    succ = {}
    for x in diagram.crossings:
        succ[x.under_in] = x.over_out
        succ[x.over_in] = x.under_out
    return succ


def seifert_circles(diagram: LinkDiagram):
    """Disjoint circles produced by smoothing every crossing coherently.

    Each circle is a list of edge labels in traversal order, starting at its
    smallest label; circles are sorted by that label.  Crossingless components
    appear as their own (one-edge) circles.
    """
    succ = _smooth_succ(diagram)
    seen = set()
    circles = []
    for e in sorted(succ):
        if e in seen:
            continue
        cyc = [e]
        seen.add(e)
        cur = succ[e]
        while cur != e:
            cyc.append(cur)
            seen.add(cur)
            cur = succ[cur]
        circles.append(cyc)
    for cyc, flag in zip(diagram.components, diagram.unknot_flags):
        if flag:
            circles.append(list(cyc))
    circles.sort(key=lambda c: c[0])
    return circles


def _smoothed_faces(diagram):
    """Union the diagram faces across each smoothed crossing channel.

    Returns (face_of_corner, circle_sides) where face_of_corner maps a corner
    to its smoothed-region id and circle_sides maps each circle index to its
    (left region, right region) pair.  Also returns the circles (crossing
    pieces only) and the edge -> circle index map.
    """
    face_list, corner_face = faces(diagram)
    uf = _UnionFind()
    for ci, x in enumerate(diagram.crossings):
        # the two corners swallowed by the smoothing channel
        if x.sign > 0:
            uf.union(corner_face[(ci, 1)], corner_face[(ci, 3)])
        else:
            uf.union(corner_face[(ci, 0)], corner_face[(ci, 2)])
    for f in range(len(face_list)):
        uf.find(f)

    succ = _smooth_succ(diagram)
    circles = []
    seen = set()
    for e in sorted(succ):
        if e in seen:
            continue
        cyc = [e]
        seen.add(e)
        cur = succ[e]
        while cur != e:
            cyc.append(cur)
            seen.add(cur)
            cur = succ[cur]
        circles.append(cyc)
    circle_of = {e: i for i, cyc in enumerate(circles) for e in cyc}

    # tails of edges: where the walk along the edge leaves its crossing
    tails = {}
    for ci, x in enumerate(diagram.crossings):
        tails[x.under_out] = (ci, 2)
        tails[x.over_out] = (ci, 1 if x.sign > 0 else 3)

    def left_face(e):
        ci, slot = tails[e]
        return uf.find(corner_face[(ci, slot)])

    def right_face(e):
        ci, slot = tails[e]
        return uf.find(corner_face[(ci, (slot - 1) % 4)])

    sides = []
    for cyc in circles:
        lf = {left_face(e) for e in cyc}
        rf = {right_face(e) for e in cyc}
        assert len(lf) == 1 and len(rf) == 1, "circle sides are not uniform"
        left, right = lf.pop(), rf.pop()
        assert left != right, "a circle cannot bound the same region twice"
        sides.append((left, right))

    regions = {uf.find(f) for f in range(len(face_list))}
    assert len(regions) == len(circles) + 1, "region count != circles + 1"
    return circles, circle_of, sides


# -- finger moves toward braid form ----------------------------------------------


def _find_defect(diagram, circle_of):
    """Arcs of two different circles bordering one face from the same side.

    This is the obstruction to braid form; the returned pair (u, v, side) can
    be resolved by one finger move across that face.  Faces here are faces of
    the diagram itself, not of the smoothing, so the move stays planar.
    Returns None when the diagram is defect-free.  Deterministic scan order.
    """
    _, corner_face = faces(diagram)
    by_face = {}
    for ci, x in enumerate(diagram.crossings):
        for e, slot in ((x.under_out, 2), (x.over_out, 1 if x.sign > 0 else 3)):
            left = corner_face[(ci, slot)]
            right = corner_face[(ci, (slot - 1) % 4)]
            by_face.setdefault(left, {}).setdefault("left", []).append(e)
            by_face.setdefault(right, {}).setdefault("right", []).append(e)
    for f in sorted(by_face):
        for side in ("left", "right"):
            group = sorted(by_face[f].get(side, []))
            if len(group) < 2:
                continue
            u = group[0]
            v = next((e for e in group[1:] if circle_of[e] != circle_of[u]), None)
            if v is not None:
                return u, v, side
    return None


def _insert_finger(diagram, u_edge, v_edge, side):
    """Push the arc u over the arc v across a region they both border.

    Adds a cancelling crossing pair; u and v are each cut into three segments
    (u = u1, then u2, u3 and likewise v).  Orientations, linking numbers and
    self-writhes are all preserved.
    """
    u2, u3, v2, v3 = ("u2",), ("u3",), ("v2",), ("v3",)   # placeholder labels
    cycles = []
    for cyc in diagram.components:
        out = []
        for e in cyc:
            out.append(e)
            if e == u_edge:
                out.extend([u2, u3])
            if e == v_edge:
                out.extend([v2, v3])
        cycles.append(out)

    # the head occurrence of a subdivided edge now belongs to its last segment
    heads = {}
    for x in diagram.crossings:
        heads[x.under_in] = (x, 0)
        heads[x.over_in] = (x, 3 if x.sign > 0 else 1)
    quads = []
    for x in diagram.crossings:
        quad = list(x.quad)
        for old, last in ((u_edge, u3), (v_edge, v3)):
            xh, slot = heads[old]
            if xh is x:
                quad[slot] = last
        quads.append(tuple(quad))

    # with the shared region on the left of both arcs they run antiparallel,
    # so u's first new crossing is v's second (and vice versa on the right)
    if side == "left":
        quads.append((v2, u2, v3, u_edge))   # positive: u dives over v
        quads.append((v_edge, u2, v2, u3))   # negative: u climbs back
    else:
        quads.append((v2, u_edge, v3, u2))   # negative
        quads.append((v_edge, u3, v2, u2))   # positive

    relabel = {}
    nxt = 1
    comps = []
    for cyc in cycles:
        for e in cyc:
            relabel[e] = nxt
            nxt += 1
        comps.append(sorted(relabel[e] for e in cyc))
    new_quads = [tuple(relabel[e] for e in q) for q in quads]
    u_labels = [relabel[c[0]] for c, f in zip(cycles, diagram.unknot_flags) if f]
    return _rebuild(diagram, new_quads, u_labels, comps)


def _to_braid_form(diagram):
    """Apply finger moves until no face sees two circles from one side."""
    cap = 4 * (len(diagram.crossings) + diagram.n_edges + 4) ** 2 + 16
    lk0 = linking_matrix(diagram)
    w0 = diagram.writhes()
    moves = 0
    while True:
        _, circle_of, _ = _smoothed_faces(diagram)
        defect = _find_defect(diagram, circle_of)
        if defect is None:
            return diagram, moves
        u_edge, v_edge, side = defect
        diagram = _insert_finger(diagram, u_edge, v_edge, side)
        moves += 1
        assert linking_matrix(diagram) == lk0, "finger move changed linking"
        assert diagram.writhes() == w0, "finger move changed a writhe"
        if moves > cap:
            raise RuntimeError("braid-form reduction failed to terminate")


# -- reading the braid-form surface ----------------------------------------------


def _circle_path(circles, sides):
    """Order the circles along the region tree; requires it to be a path."""
    s = len(circles)
    deg = {}
    for left, right in sides:
        deg[left] = deg.get(left, 0) + 1
        deg[right] = deg.get(right, 0) + 1
    ends = [r for r, d in deg.items() if d == 1]
    assert len(deg) == s + 1
    if s == 1:
        return [0]
    assert len(ends) == 2, "region tree is not a path"
    # start from the end whose circle has the smaller minimal edge
    incident = {}
    for i, (left, right) in enumerate(sides):
        incident.setdefault(left, []).append(i)
        incident.setdefault(right, []).append(i)
    first = {r: incident[r][0] for r in ends}
    start = min(ends, key=lambda r: circles[first[r]][0])

    order = []
    region, prev_circle = start, None
    while len(order) < s:
        nxt = [i for i in incident[region] if i != prev_circle]
        assert len(nxt) == 1, "region tree is not a path"
        i = nxt[0]
        order.append(i)
        left, right = sides[i]
        region = right if region == left else left
        prev_circle = i
    return order


def _braided_seifert(diagram, piece_tag):
    """Seifert matrix of a connected braid-form diagram.

    Returns (V block, basis bookkeeping records).
    """
    circles, circle_of, sides = _smoothed_faces(diagram)
    order = _circle_path(circles, sides)
    pos_in_path = {c: i for i, c in enumerate(order)}
    s = len(order)

    rows = [[] for _ in range(s - 1)]
    for ci, x in enumerate(diagram.crossings):
        i = pos_in_path[circle_of[x.under_in]]
        j = pos_in_path[circle_of[x.over_in]]
        assert abs(i - j) == 1, "a crossing joins non-adjacent circles"
        rows[min(i, j)].append(ci)
    assert all(rows), "adjacent circles with no joining crossing"

    def foot(ci, path_idx):
        """In-edge of crossing ci on the path_idx-th circle."""
        x = diagram.crossings[ci]
        if circle_of[x.under_in] == order[path_idx]:
            return x.under_in
        assert circle_of[x.over_in] == order[path_idx]
        return x.over_in

    def positions(path_idx, members):
        cyc = circles[order[path_idx]]
        at = {e: k for k, e in enumerate(cyc)}
        return {ci: at[foot(ci, path_idx)] for ci in members}, len(cyc)

    # cut cascade: row 0 is ordered along the first circle starting at its
    # smallest edge; each later row is ordered along the circle it shares
    # with the previous row, cut just before that row's first band
    row_order = [None] * (s - 1)
    upper = [None] * (s - 1)   # keys of row t's feet on circle t+1
    lower = [None] * (s - 1)   # keys of row t's feet on circle t
    p0, _ = positions(0, rows[0])
    row_order[0] = sorted(rows[0], key=lambda ci: p0[ci])
    lower[0] = {ci: p0[ci] for ci in rows[0]}
    for t in range(s - 1):
        p, length = positions(t + 1, row_order[t])
        q0 = p[row_order[t][0]]
        upper[t] = {ci: (p[ci] - q0) % length for ci in row_order[t]}
        assert sorted(row_order[t], key=lambda ci: upper[t][ci]) == row_order[t], (
            "band order disagrees between the two disks of a row"
        )
        if t + 1 < s - 1:
            pn, _ = positions(t + 1, rows[t + 1])
            lower[t + 1] = {ci: (pn[ci] - q0) % length for ci in rows[t + 1]}
            row_order[t + 1] = sorted(rows[t + 1], key=lambda ci: lower[t + 1][ci])

    basis = []   # (row t, band pair (ci, cj))
    records = []
    for t in range(s - 1):
        bands = row_order[t]
        for j in range(len(bands) - 1):
            basis.append((t, bands[j], bands[j + 1]))
            records.append({
                "piece": piece_tag,
                "row": t,
                "bands": (j, j + 1),
                "signs": (diagram.crossings[bands[j]].sign,
                          diagram.crossings[bands[j + 1]].sign),
            })
    n_expected = len(diagram.crossings) - s + 1
    assert len(basis) == n_expected, "basis size != first Betti number"

    sign = lambda ci: diagram.crossings[ci].sign
    V = [[0] * len(basis) for _ in range(len(basis))]
    for a, (t, p, q) in enumerate(basis):
        for b, (u, r, w) in enumerate(basis):
            if a == b:
                V[a][b] = -(sign(p) + sign(q)) // 2
            elif t == u:
                if q == r:          # consecutive loops sharing band q
                    V[a][b] = (sign(q) - 1) // 2
                elif p == w:        # the transpose position of the above
                    V[a][b] = (sign(p) + 1) // 2
                # non-adjacent loops in one row never link
            elif u == t + 1:
                kp, kq = upper[t][p], upper[t][q]
                kr, ks = lower[u][r], lower[u][w]
                if kp < kr < kq < ks:
                    V[a][b], V[b][a] = _ADJ_X_FIRST
                elif kr < kp < ks < kq:
                    V[a][b], V[b][a] = _ADJ_Y_FIRST
                # nested or disjoint intervals never link
    return V, records


# -- public entry points ----------------------------------------------------------


def seifert_matrix(diagram: LinkDiagram) -> SeifertData:
    """Seifert circles, genus basis and Seifert matrix for a diagram.

    Split diagrams give a block-diagonal matrix (one block per connected
    piece); the `pieces` field records which components share a block.
    """
    circles = seifert_circles(diagram)
    blocks = []
    records = []
    pieces_out = []
    total_moves = 0
    for piece in split_pieces(diagram):
        if not piece:
            continue   # crossingless component: no band, no basis loop
        sub, comp_ids = _extract_piece(diagram, piece)
        braided, moves = _to_braid_form(sub)
        total_moves += moves
        V, recs = _braided_seifert(braided, len(pieces_out))
        blocks.append(V)
        records.extend(recs)
        pieces_out.append(comp_ids)
    for ci, flag in enumerate(diagram.unknot_flags):
        if flag:
            pieces_out.append([ci])

    n = sum(len(b) for b in blocks)
    V = [[0] * n for _ in range(n)]
    at = 0
    for b in blocks:
        for i, row in enumerate(b):
            V[at + i][at:at + len(b)] = row
        at += len(b)
    return SeifertData(circles, records, V, pieces_out, total_moves)


def _extract_piece(diagram, piece):
    """Sub-diagram spanned by a set of crossing indices, as a LinkDiagram."""
    quads = [diagram.crossings[ci].quad for ci in sorted(piece)]
    edges = {e for q in quads for e in q}
    comp_ids = sorted({diagram.component_of[e] for e in edges})
    comps = [sorted(diagram.components[ci]) for ci in comp_ids]
    assert all(set(c) <= edges for c in comps), "component split across pieces"
    return _rebuild(diagram, quads, [], comps), comp_ids


def link_signature(diagram: LinkDiagram) -> int:
    """Signature of V + Vᵀ for the Seifert matrix V of the diagram."""
    data = seifert_matrix(diagram)
    n = len(data.V)
    sym = [[data.V[i][j] + data.V[j][i] for j in range(n)] for i in range(n)]
    return signature(sym)
