"""Combinatorial model of an abstract page: a compact oriented surface with
marked binding circles, braid punctures, and embedded curves.

The surface is stored as a rotation system (combinatorial map): a set of
darts (directed half-edges), a fixed-point-free pairing involution ``alpha``
matching the two darts of each edge, and a rotation permutation ``sigma``
giving the cyclic order of darts around each vertex.  Faces are orbits of
``sigma . alpha``.  Boundary components of the surface are faces marked as
*binding* faces; the surface-with-boundary is the closed complex minus the
open binding discs.

Curves (leaves of a foliation, describing arcs, stabilization arcs) are
walks: dart sequences in the complex.  Two curves may share cells; a shared
vertex models a transverse crossing of superimposed curves, which is exactly
what the tree test needs.  Equality of curves is equality of normal forms
(backtrack removal), which keeps every predicate here decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple


class PageError(ValueError):
    """Raised when a surface or curve violates a structural precondition."""


# ---------------------------------------------------------------------------
# Walks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Walk:
    """A walk in a surface complex, stored as a dart sequence.

    ``kind`` is ``"arc"`` (open, endpoints on binding circles) or
    ``"circle"`` (closed).  Consecutive darts must be incident: the head of
    each dart is the tail of the next, and circles close up.
    """

    kind: str
    darts: Tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("arc", "circle"):
            raise PageError("walk kind must be 'arc' or 'circle'")
        if not self.darts:
            raise PageError("a walk needs at least one dart")

    def reversed(self, surface: "CombinatorialSurface") -> "Walk":
        return Walk(self.kind, tuple(surface.alpha[d] for d in reversed(self.darts)))


@dataclass(frozen=True)
class CutReport:
    """Census of the pieces obtained by cutting a surface along one curve.

    ``components`` lists per piece ``(genus, boundary_count, puncture_count,
    binding_labels)``.  A binding circle severed by the cut contributes its
    label to every piece holding one of its arcs.
    """

    components: Tuple[Tuple[int, int, int, FrozenSet[str]], ...]
    cut_kind: str

    @property
    def is_disc_component_flags(self) -> Tuple[bool, ...]:
        return tuple(g == 0 and b == 1 for (g, b, _, _) in self.components)


#: Arc classification labels.
BOUNDARY_PARALLEL = "boundary_parallel"
ESSENTIAL_NOT_STRONGLY = "essential_not_strongly"
STRONGLY_ESSENTIAL = "strongly_essential"

SEPARATING = "separating"
NON_SEPARATING = "non_separating"


# ---------------------------------------------------------------------------
# The surface complex
# ---------------------------------------------------------------------------

class CombinatorialSurface:
    """An oriented surface complex with labelled binding circles.

    Instances are immutable by convention: every surgery returns a new
    surface.  ``bindings`` maps a binding label to a representative dart of
    its marked face; ``punctures`` maps a puncture id to a representative
    dart of the interior face containing it; ``fdtc`` optionally records the
    boundary twisting coefficient of the monodromy at each binding.
    """

    def __init__(
        self,
        alpha: Dict[int, int],
        sigma: Dict[int, int],
        bindings: Dict[str, int],
        punctures: Optional[Dict[str, int]] = None,
        fdtc: Optional[Dict[str, Fraction]] = None,
    ):
        self.alpha = dict(alpha)
        self.sigma = dict(sigma)
        self.bindings = dict(bindings)
        self.punctures = dict(punctures or {})
        self.fdtc = {k: Fraction(v) for k, v in (fdtc or {}).items()}
        self._check_structure()
        self._vertex_of: Dict[int, int] = {}
        self._vertices: List[Tuple[int, ...]] = []
        self._face_of: Dict[int, int] = {}
        self._faces: List[Tuple[int, ...]] = []
        self._index_orbits()
        self._check_surface()

    # -- structure ---------------------------------------------------------

    def _check_structure(self):
        darts = set(self.alpha)
        if not darts:
            raise PageError("the complex has no darts")
        if set(self.sigma) != darts:
            raise PageError("alpha and sigma must act on the same darts")
        for d, e in self.alpha.items():
            if e == d or self.alpha.get(e) != d:
                raise PageError("alpha must be a fixed-point-free involution")
        if set(self.sigma.values()) != darts:
            raise PageError("sigma must be a permutation of the darts")

    def _index_orbits(self):
        def orbits(perm: Dict[int, int]) -> List[Tuple[int, ...]]:
            seen: Set[int] = set()
            out: List[Tuple[int, ...]] = []
            for d in sorted(perm):
                if d in seen:
                    continue
                orbit = [d]
                seen.add(d)
                e = perm[d]
                while e != d:
                    orbit.append(e)
                    seen.add(e)
                    e = perm[e]
                out.append(tuple(orbit))
            return out

        self._vertices = orbits(self.sigma)
        for i, orb in enumerate(self._vertices):
            for d in orb:
                self._vertex_of[d] = i
        phi = {d: self.sigma[self.alpha[d]] for d in self.alpha}
        self._faces = orbits(phi)
        for i, orb in enumerate(self._faces):
            for d in orb:
                self._face_of[d] = i

    def _check_surface(self):
        for label, rep in self.bindings.items():
            if rep not in self.alpha:
                raise PageError(f"binding {label!r} references a missing dart")
        marked = {self._face_of[rep] for rep in self.bindings.values()}
        if len(marked) != len(self.bindings):
            raise PageError("two bindings mark the same face")
        for pid, rep in self.punctures.items():
            if self._face_of[rep] in marked:
                raise PageError(f"puncture {pid!r} lies in a binding face")
        if not self.bindings:
            raise PageError("a page must have at least one binding circle")
        if not self._connected():
            raise PageError("surface complex is not connected")

    def _connected(self) -> bool:
        darts = sorted(self.alpha)
        seen = {darts[0]}
        stack = [darts[0]]
        while stack:
            d = stack.pop()
            for e in (self.alpha[d], self.sigma[d]):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        return len(seen) == len(self.alpha)

    # -- basic queries -----------------------------------------------------

    @property
    def darts(self) -> Tuple[int, ...]:
        return tuple(sorted(self.alpha))

    def tail(self, d: int) -> int:
        return self._vertex_of[d]

    def head(self, d: int) -> int:
        return self._vertex_of[self.alpha[d]]

    def face(self, d: int) -> int:
        return self._face_of[d]

    def vertex_count(self) -> int:
        return len(self._vertices)

    def edge_count(self) -> int:
        return len(self.alpha) // 2

    def face_count(self) -> int:
        return len(self._faces)

    def edge_key(self, d: int) -> Tuple[int, int]:
        return (d, self.alpha[d]) if d < self.alpha[d] else (self.alpha[d], d)

    def face_darts(self, rep: int) -> Tuple[int, ...]:
        return self._faces[self._face_of[rep]]

    def vertex_darts(self, v: int) -> Tuple[int, ...]:
        return self._vertices[v]

    def sigma_prev(self, d: int) -> int:
        for x in self.vertex_darts(self.tail(d)):
            if self.sigma[x] == d:
                return x
        raise PageError("broken rotation")

    def binding_faces(self) -> Dict[str, int]:
        return {lab: self._face_of[rep] for lab, rep in self.bindings.items()}

    def marked_face_ids(self) -> Set[int]:
        return set(self.binding_faces().values())

    def binding_of_vertex(self, v: int) -> Optional[str]:
        for lab, rep in self.bindings.items():
            for d in self.face_darts(rep):
                if self.tail(d) == v:
                    return lab
        return None

    def binding_circle_vertices(self, label: str) -> Tuple[int, ...]:
        rep = self.bindings[label]
        return tuple(self.tail(d) for d in self.face_darts(rep))

    def euler_characteristic_closed(self) -> int:
        return self.vertex_count() - self.edge_count() + self.face_count()

    def euler_characteristic(self) -> int:
        """chi of the surface-with-boundary (binding discs removed)."""
        return self.euler_characteristic_closed() - len(self.bindings)

    @property
    def boundary_count(self) -> int:
        return len(self.bindings)

    @property
    def genus(self) -> int:
        chi = self.euler_characteristic()
        g2 = 2 - len(self.bindings) - chi
        if g2 % 2 != 0 or g2 < 0:
            raise PageError("inconsistent Euler characteristic")
        return g2 // 2

    # -- walks -------------------------------------------------------------

    def check_walk(self, walk: Walk) -> None:
        for d in walk.darts:
            if d not in self.alpha:
                raise PageError(f"walk uses unknown dart {d}")
        for a, b in zip(walk.darts, walk.darts[1:]):
            if self.head(a) != self.tail(b):
                raise PageError("walk darts are not consecutive")
        if walk.kind == "circle":
            if self.head(walk.darts[-1]) != self.tail(walk.darts[0]):
                raise PageError("circle walk does not close up")

    def walk_vertices(self, walk: Walk) -> Tuple[int, ...]:
        verts = [self.tail(walk.darts[0])]
        verts.extend(self.head(d) for d in walk.darts)
        return tuple(verts)

    def is_simple(self, walk: Walk) -> bool:
        verts = self.walk_vertices(walk)
        if walk.kind == "circle":
            verts = verts[:-1]
        if len(set(verts)) != len(verts):
            return False
        edges = [self.edge_key(d) for d in walk.darts]
        return len(set(edges)) == len(edges)

    def normalize(self, walk: Walk) -> Walk:
        """Normal form of a walk: iterated backtrack removal; circles are
        rotated so the smallest dart comes first."""
        darts = list(walk.darts)
        changed = True
        while changed:
            changed = False
            i = 0
            while i + 1 < len(darts):
                if self.alpha[darts[i]] == darts[i + 1]:
                    del darts[i : i + 2]
                    changed = True
                    i = max(i - 1, 0)
                else:
                    i += 1
            if walk.kind == "circle" and len(darts) >= 2 and self.alpha[darts[-1]] == darts[0]:
                darts = darts[1:-1]
                changed = True
        if not darts:
            raise PageError("walk normalized to nothing")
        if walk.kind == "circle":
            k = darts.index(min(darts))
            darts = darts[k:] + darts[:k]
        return Walk(walk.kind, tuple(darts))

    def walks_equal(self, a: Walk, b: Walk) -> bool:
        if a.kind != b.kind:
            return False
        na = self.normalize(a)
        return na == self.normalize(b) or na == self.normalize(b.reversed(self))

    # -- sides and crossings -------------------------------------------------

    def _sigma_interval(self, start: int, stop: int) -> List[int]:
        """Darts strictly between ``start`` and ``stop`` in rotation order."""
        out = []
        d = self.sigma[start]
        while d != stop:
            if d == start:
                raise PageError("rotation interval did not close")
            out.append(d)
            d = self.sigma[d]
        return out

    def passages(self, walk: Walk) -> List[Tuple[int, int, int]]:
        """Interior passages of a walk: (vertex, incoming dart, outgoing dart)."""
        darts = walk.darts
        pairs = list(zip(darts, darts[1:]))
        if walk.kind == "circle":
            pairs.append((darts[-1], darts[0]))
        return [(self.head(a), a, b) for a, b in pairs]

    def side_at(self, walk: Walk, vertex: int, dart: int) -> str:
        """Side of ``walk`` on which ``dart`` (emanating from a passage
        vertex of the walk) lies: "L", "R", or "ON" for the walk's own darts.

        The convention: at a passage (in ``a_in``, out ``a_out``) the "L"
        darts are those in the rotation interval from ``a_out`` to
        ``alpha(a_in)``.
        """
        for v, a_in, a_out in self.passages(walk):
            if v != vertex:
                continue
            rev_in = self.alpha[a_in]
            if dart in (rev_in, a_out):
                return "ON"
            if rev_in == a_out:
                return "R"
            if dart in self._sigma_interval(a_out, rev_in):
                return "L"
            return "R"
        raise PageError("dart is not at a passage vertex of the walk")

    def transversal_crossings(self, curve: Walk, core: Walk) -> int:
        """Number of transverse crossings of ``curve`` with the circle
        ``core``.

        Contact runs of ``curve`` along ``core`` (shared vertices joined by
        shared edges) count one crossing when the run enters and leaves on
        opposite sides of the core.
        """
        core_vertices = set(self.walk_vertices(core))
        core_edges = {self.edge_key(d) for d in core.darts}
        verts = self.walk_vertices(curve)
        darts = curve.darts
        n = len(verts) - (1 if curve.kind == "circle" else 0)

        def core_side(v: int, d: int) -> str:
            return self.side_at(core, v, d)

        crossings = 0
        i = 1 if curve.kind == "arc" else 0
        limit = len(verts) - 1 if curve.kind == "arc" else len(verts) - 1
        seen_runs = set()
        idx = 0
        positions = list(range(1, len(verts) - 1)) if curve.kind == "arc" else list(range(len(verts) - 1))
        pos_set = [p for p in positions if verts[p] in core_vertices]
        used = set()
        for p in pos_set:
            if p in used:
                continue
            # extend the run while consecutive positions are joined by core edges
            run = [p]
            q = p
            while True:
                dart_after = darts[q % len(darts)]
                nxt = q + 1
                if (
                    nxt in pos_set
                    and self.edge_key(dart_after) in core_edges
                ):
                    run.append(nxt)
                    used.add(nxt)
                    q = nxt
                else:
                    break
            enter_v = verts[run[0]]
            exit_v = verts[run[-1]]
            d_in = darts[(run[0] - 1) % len(darts)]
            d_out = darts[run[-1] % len(darts)]
            if self.edge_key(d_in) in core_edges or self.edge_key(d_out) in core_edges:
                raise PageError("curve enters or leaves the core along it")
            s_in = core_side(enter_v, self.alpha[d_in])
            s_out = core_side(exit_v, d_out)
            if "ON" in (s_in, s_out):
                raise PageError("degenerate contact with the core")
            if s_in != s_out:
                crossings += 1
        return crossings

    # -- surgeries (all return new surfaces) --------------------------------

    def _fresh_darts(self, n: int) -> List[int]:
        base = max(self.alpha) + 1
        return [base + i for i in range(n)]

    def _tables(self) -> Tuple[Dict[int, int], Dict[int, int]]:
        return dict(self.alpha), dict(self.sigma)

    def subdivide_edge(self, d: int) -> Tuple["CombinatorialSurface", int]:
        """Insert a midpoint vertex on the edge of dart ``d``.

        Returns the new surface and the dart from the midpoint toward the
        original head of ``d``.  Faces are preserved.
        """
        alpha, sigma = self._tables()
        D = alpha[d]
        d2, D2 = self._fresh_darts(2)
        alpha[d] = D2
        alpha[D2] = d
        alpha[d2] = D
        alpha[D] = d2
        sigma[d2] = D2
        sigma[D2] = d2
        return (
            CombinatorialSurface(alpha, sigma, self.bindings, self.punctures, self.fdtc),
            d2,
        )

    def split_face(self, d1: int, d2: int) -> Tuple["CombinatorialSurface", int]:
        """Add a chord across the face at the corners of ``d1`` and ``d2``.

        The chord runs from tail(d1) to tail(d2) inside the common face and
        splits it in two.  Returns the new surface and the chord dart from
        tail(d1).
        """
        if self._face_of[d1] != self._face_of[d2] or d1 == d2:
            raise PageError("chord endpoints must be distinct corners of one face")
        alpha, sigma = self._tables()
        c, C = self._fresh_darts(2)
        alpha[c] = C
        alpha[C] = c

        def insert_before(target: int, new: int):
            prev = self.sigma_prev(target)
            if sigma[prev] != target:
                # the predecessor changed by the first insertion
                for x in list(sigma):
                    if sigma[x] == target and x != new:
                        prev = x
                        break
            sigma[prev] = new
            sigma[new] = target

        insert_before(d1, c)
        insert_before(d2, C)
        surf = CombinatorialSurface(alpha, sigma, self.bindings, self.punctures, self.fdtc)
        return surf, c

    def with_fdtc(self, fdtc: Dict[str, Fraction]) -> "CombinatorialSurface":
        return CombinatorialSurface(self.alpha, self.sigma, self.bindings, self.punctures, fdtc)

    def with_punctures(self, punctures: Dict[str, int]) -> "CombinatorialSurface":
        return CombinatorialSurface(self.alpha, self.sigma, self.bindings, punctures, self.fdtc)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def _closed_genus_g(genus: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Rotation tables of a canonical closed genus-g complex: the two-dart
    sphere for genus 0, the one-vertex 4g-gon otherwise."""
    if genus == 0:
        return {0: 1, 1: 0}, {0: 0, 1: 1}
    alpha: Dict[int, int] = {}
    ring: List[int] = []
    for i in range(genus):
        a, A, b, B = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        alpha[a], alpha[A] = A, a
        alpha[b], alpha[B] = B, b
        ring.extend([a, b, A, B])
    sigma = {ring[i]: ring[(i + 1) % len(ring)] for i in range(len(ring))}
    return alpha, sigma


def build_surface(genus: int, bindings: int, punctures: int) -> CombinatorialSurface:
    """Canonical page of the given genus with binding circles ``C1..Cr``
    and punctures ``p0..`` placed in one interior face.

    Dart numbering is deterministic, so serialized surfaces are stable.
    """
    if genus < 0:
        raise PageError("genus must be non-negative")
    if bindings < 1:
        raise PageError("a page must have at least one binding circle")
    if punctures < 0:
        raise PageError("puncture count must be non-negative")
    alpha, sigma = _closed_genus_g(genus)

    binding_reps: Dict[str, int] = {}
    anchor = 0
    for i in range(bindings):
        nxt = max(alpha) + 1
        x, X, s, S = nxt, nxt + 1, nxt + 2, nxt + 3
        alpha[x], alpha[X] = X, x
        alpha[s], alpha[S] = S, s
        # new vertex w carries the binding loop (x, X) and the spoke end S
        sigma[x] = S
        sigma[S] = X
        sigma[X] = x
        sigma[s] = sigma[anchor]
        sigma[anchor] = s
        binding_reps[f"C{i + 1}"] = x
        anchor = s

    surf = CombinatorialSurface(alpha, sigma, binding_reps)
    marked = surf.marked_face_ids()
    interior_rep = None
    for d in surf.darts:
        if surf.face(d) not in marked:
            interior_rep = d
            break
    if interior_rep is None:
        raise PageError("no interior face available")
    punct = {f"p{i}": interior_rep for i in range(punctures)}
    expected_chi = 2 - 2 * genus - bindings
    out = CombinatorialSurface(alpha, sigma, binding_reps, punct)
    if out.euler_characteristic() != expected_chi:
        raise PageError("constructed surface has wrong Euler characteristic")
    return out


def refine_binding(surface: CombinatorialSurface, label: str, slots: int) -> CombinatorialSurface:
    """Subdivide a binding circle until it carries at least ``slots`` vertices."""
    surf = surface
    while len(set(surf.binding_circle_vertices(label))) < slots:
        rep = surf.bindings[label]
        d = surf.face_darts(rep)[0]
        surf, _ = surf.subdivide_edge(d)
    return surf


# ---------------------------------------------------------------------------
# Cutting
# ---------------------------------------------------------------------------

def cut_along(surface: CombinatorialSurface, curve: Walk) -> CutReport:
    """Census of the surface cut along an embedded arc or circle.

    The surface is not modified.  Arc endpoints must lie on binding circles
    and the rest of the curve must avoid them.  The component census
    satisfies sum(chi) = chi(S) + (1 for an arc), which is asserted.
    """
    surface.check_walk(curve)
    if not surface.is_simple(curve):
        raise PageError("cut curve must be a simple walk")
    verts = surface.walk_vertices(curve)
    marked = surface.marked_face_ids()

    if curve.kind == "arc":
        interior = verts[1:-1]
        ends = (verts[0], verts[-1])
        for v in ends:
            if surface.binding_of_vertex(v) is None:
                raise PageError("arc endpoint is not on a binding circle")
    else:
        interior = verts[:-1]
        ends = ()
    for v in interior:
        if surface.binding_of_vertex(v) is not None:
            raise PageError("curve interior touches a binding circle")
    cut_edges = {surface.edge_key(d) for d in curve.darts}
    for d in curve.darts:
        if surface.face(d) in marked or surface.face(surface.alpha[d]) in marked:
            raise PageError("curve runs along a binding circle")

    # ---- connectivity nodes: interior faces and binding arcs -------------
    parent: Dict[object, object] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    end_set = set(ends)
    binding_arc_of: Dict[int, object] = {}
    arcs_by_label: Dict[str, List[Tuple[object, List[int]]]] = {}
    for label, rep in surface.bindings.items():
        cycle = list(surface.face_darts(rep))
        cuts = [i for i, d in enumerate(cycle) if surface.tail(d) in end_set]
        segments: List[List[int]] = []
        if not cuts:
            segments = [cycle]
        else:
            for j, start in enumerate(cuts):
                stop = cuts[(j + 1) % len(cuts)]
                seg = []
                i = start
                while True:
                    seg.append(cycle[i])
                    i = (i + 1) % len(cycle)
                    if i == stop:
                        break
                segments.append(seg)
        arcs_by_label[label] = []
        for k, seg in enumerate(segments):
            node = ("b", label, k)
            find(node)
            arcs_by_label[label].append((node, seg))
            for d in seg:
                binding_arc_of[d] = node

    def side_node(d: int):
        fid = surface.face(d)
        if fid in marked:
            return binding_arc_of[d]
        return ("f", fid)

    for d in surface.darts:
        if d > surface.alpha[d]:
            continue
        if surface.edge_key(d) in cut_edges:
            continue
        union(side_node(d), side_node(surface.alpha[d]))

    # ---- vertex copies ----------------------------------------------------
    marks: Dict[int, Set[int]] = {}
    for v, a_in, a_out in surface.passages(curve):
        marks.setdefault(v, set()).update({surface.alpha[a_in], a_out})
    if curve.kind == "arc":
        marks.setdefault(verts[0], set()).add(curve.darts[0])
        marks.setdefault(verts[-1], set()).add(surface.alpha[curve.darts[-1]])
        for v in ends:
            for d in surface.vertex_darts(v):
                if surface.face(d) in marked:
                    marks[v].add(d)

    vertex_copy_nodes: Dict[int, List[object]] = {}
    for v in range(surface.vertex_count()):
        ring = list(surface.vertex_darts(v))
        ms = marks.get(v)
        if not ms:
            vertex_copy_nodes[v] = [find(side_node(ring[0]))]
            continue
        copies = []
        order = sorted(ring.index(m) for m in ms)
        for j, start in enumerate(order):
            stop = order[(j + 1) % len(order)]
            first = ring[start]
            copies.append(find(side_node(surface.sigma[first])))
            if len(order) == 1:
                break
        vertex_copy_nodes[v] = copies

    # ---- per-component censuses -------------------------------------------
    comps: Dict[object, Dict[str, object]] = {}

    def comp(node):
        r = find(node)
        if r not in comps:
            comps[r] = {"F": 0, "E": 0, "V": 0, "punct": 0, "labels": set()}
        return comps[r]

    for fid in range(surface.face_count()):
        if fid in marked:
            continue
        rep = surface._faces[fid][0]
        comp(("f", fid))["F"] += 1
    for label, entries in arcs_by_label.items():
        for node, seg in entries:
            comp(node)["labels"].add(label)
    for d in surface.darts:
        if d > surface.alpha[d]:
            continue
        if surface.edge_key(d) in cut_edges:
            comp(side_node(d))["E"] += 1
            comp(side_node(surface.alpha[d]))["E"] += 1
        else:
            comp(side_node(d))["E"] += 1
    for v, copies in vertex_copy_nodes.items():
        for c in copies:
            comp(c)["V"] += 1
    for pid, rep in surface.punctures.items():
        comp(("f", surface.face(rep)))["punct"] += 1

    # ---- boundary circles --------------------------------------------------
    # Segments: binding arcs and the two side copies of each curve dart.
    # The copy of dart d on the side of face(d) is ("s", d); the other copy
    # is ("s", alpha(d)).
    seg_comp: Dict[object, object] = {}
    for label, entries in arcs_by_label.items():
        for node, seg in entries:
            seg_comp[node] = find(node)
    for d in curve.darts:
        seg_comp[("s", d)] = find(("f", surface.face(d)))
        seg_comp[("s", surface.alpha[d])] = find(("f", surface.face(surface.alpha[d])))

    link_parent: Dict[object, object] = {k: k for k in seg_comp}

    def lfind(x):
        while link_parent[x] != x:
            link_parent[x] = link_parent[link_parent[x]]
            x = link_parent[x]
        return x

    def llink(a, b):
        ra, rb = lfind(a), lfind(b)
        if ra != rb:
            link_parent[ra] = rb

    darts = curve.darts
    pairs = list(zip(darts, darts[1:]))
    if curve.kind == "circle":
        pairs.append((darts[-1], darts[0]))
    for a, b in pairs:
        llink(("s", a), ("s", b))
        llink(("s", surface.alpha[a]), ("s", surface.alpha[b]))

    if curve.kind == "arc":
        def arc_nodes_at(v: int) -> Tuple[object, object]:
            """(arc starting at v, arc ending at v) on v's binding circle."""
            label = surface.binding_of_vertex(v)
            start = end = None
            for node, seg in arcs_by_label[label]:
                if surface.tail(seg[0]) == v:
                    start = node
                if surface.head(seg[-1]) == v:
                    end = node
            if start is None or end is None:
                raise PageError("binding circle was not severed at an endpoint")
            return start, end

        d1, dk = darts[0], darts[-1]
        start_node, end_node = arc_nodes_at(verts[0])
        llink(("s", surface.alpha[d1]), end_node)
        llink(("s", d1), start_node)
        start_node, end_node = arc_nodes_at(verts[-1])
        llink(("s", dk), end_node)
        llink(("s", surface.alpha[dk]), start_node)

    circles_of: Dict[object, Set[object]] = {}
    for key, root in seg_comp.items():
        circles_of.setdefault(root, set()).add(lfind(key))

    # ---- assemble ----------------------------------------------------------
    results = []
    total_chi = 0
    for root, data in comps.items():
        chi = data["V"] - data["E"] + data["F"]
        r = len(circles_of.get(root, ()))
        if r == 0:
            raise PageError("cut produced a piece without boundary")
        g2 = 2 - r - chi
        if g2 % 2 != 0 or g2 < 0:
            raise PageError("cut produced an inconsistent component census")
        results.append((g2 // 2, r, data["punct"], frozenset(data["labels"])))
        total_chi += chi
    expected = surface.euler_characteristic() + (1 if curve.kind == "arc" else 0)
    if total_chi != expected:
        raise PageError(f"cut chi bookkeeping failed: {total_chi} != {expected}")
    results.sort(key=lambda t: (t[0], t[1], t[2], sorted(t[3])))
    return CutReport(tuple(results), curve.kind)


def classify_arc(surface: CombinatorialSurface, arc: Walk) -> Tuple[str, str]:
    """Classify a binding-to-binding arc.

    Returns ``(essence, separation)``.  A cut side witnesses
    boundary-parallelism only when the cut disconnects the page; a
    non-separating arc is never boundary-parallel.
    """
    if arc.kind != "arc":
        raise PageError("classify_arc expects an arc")
    report = cut_along(surface, arc)
    comps = report.components
    if len(comps) == 1:
        return STRONGLY_ESSENTIAL, NON_SEPARATING
    discs = [(g, b, p) for (g, b, p, _) in comps if g == 0 and b == 1]
    if not discs:
        return STRONGLY_ESSENTIAL, SEPARATING
    if all(p >= 1 for (_, _, p) in discs):
        return ESSENTIAL_NOT_STRONGLY, SEPARATING
    return BOUNDARY_PARALLEL, SEPARATING


def classify_circle_essential(surface: CombinatorialSurface, circle: Walk) -> bool:
    """True when a simple closed curve bounds no empty disc side."""
    if circle.kind != "circle":
        raise PageError("expected a circle walk")
    report = cut_along(surface, circle)
    if len(report.components) == 1:
        return True
    for (g, b, p, labels) in report.components:
        if g == 0 and b == 1 and p == 0 and not labels:
            return False
    return True


def is_tree(surface: CombinatorialSurface, curves: Sequence[Walk]) -> bool:
    """True when the union of the walks is a connected acyclic 1-subcomplex."""
    edges: Set[Tuple[int, int]] = set()
    verts: Set[int] = set()
    for c in curves:
        surface.check_walk(c)
        for d in c.darts:
            edges.add(surface.edge_key(d))
        for v in surface.walk_vertices(c):
            verts.add(v)
    if not verts:
        return True
    adj: Dict[int, List[int]] = {v: [] for v in verts}
    for (d, D) in edges:
        u, w = surface.tail(d), surface.head(d)
        adj[u].append(w)
        adj[w].append(u)
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(verts):
        return False
    return len(edges) == len(verts) - 1


# ---------------------------------------------------------------------------
# Dehn twists and plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlumbingResult:
    surface: CombinatorialSurface
    core: Walk
    band_dart: int
    relabeling: Dict[str, str]


def dehn_twist(surface: CombinatorialSurface, core: Walk, curve: Walk, power: int) -> Walk:
    """Rewrite ``curve`` by the Dehn twist along the circle ``core``.

    Each transverse contact run of ``curve`` with ``core`` is rerouted once
    around the core, in the direction given by ``power``.  Endpoints and the
    transverse crossing count with the core are preserved; curves disjoint
    from the core come back unchanged.
    """
    if power not in (1, -1):
        raise PageError("twist power must be +1 or -1")
    surface.check_walk(core)
    surface.check_walk(curve)
    if core.kind != "circle":
        raise PageError("twist core must be a circle")
    core_vertices = [surface.tail(d) for d in core.darts]
    for v in core_vertices:
        if surface.binding_of_vertex(v) is not None:
            raise PageError("twist core touches the binding")
    before = surface.transversal_crossings(curve, core)
    if before == 0:
        return curve
    loop_darts = core.darts if power == 1 else tuple(
        surface.alpha[d] for d in reversed(core.darts)
    )
    loop_vertices = [surface.tail(d) for d in loop_darts]

    core_vset = set(core_vertices)
    core_edges = {surface.edge_key(d) for d in core.darts}
    verts = surface.walk_vertices(curve)
    out: List[int] = []
    i = 0
    n = len(curve.darts)
    while i < n:
        d = curve.darts[i]
        out.append(d)
        v = surface.head(d)
        is_last = i == n - 1 and curve.kind == "arc"
        if v in core_vset and not is_last and surface.edge_key(d) not in core_edges:
            # contact run starts here; find its end
            j = i
            while (
                j + 1 < n
                and surface.edge_key(curve.darts[j + 1]) in core_edges
            ):
                j += 1
                out.append(curve.darts[j])
            exit_vertex = surface.head(curve.darts[j])
            d_out = curve.darts[j + 1] if j + 1 < n else None
            s_in = surface.side_at(core, v, surface.alpha[d])
            s_out = (
                surface.side_at(core, exit_vertex, d_out) if d_out is not None else None
            )
            if d_out is not None and s_in != s_out:
                k = loop_vertices.index(exit_vertex)
                out.extend(loop_darts[k:] + loop_darts[:k])
            i = j + 1
            continue
        i += 1
    result = surface.normalize(Walk(curve.kind, tuple(out)))
    after = surface.transversal_crossings(result, core)
    if after != before:
        raise PageError("twist did not preserve the crossing count with the core")
    return result


def plumb_annulus(surface: CombinatorialSurface, arc: Walk) -> PlumbingResult:
    """Plumb an annulus to the page along a properly embedded arc.

    A band is attached to the binding at the two endpoints of ``arc``; the
    plumbed annulus is the band together with a neighborhood of the arc, and
    its core circle runs along the arc and back across the band.  chi drops
    by one; binding circles merge or split and the relabeling is returned.
    """
    surface.check_walk(arc)
    if arc.kind != "arc" or not surface.is_simple(arc):
        raise PageError("plumbing arc must be a simple arc")
    verts = surface.walk_vertices(arc)
    x, y = verts[0], verts[-1]
    lab_x = surface.binding_of_vertex(x)
    lab_y = surface.binding_of_vertex(y)
    if lab_x is None or lab_y is None:
        raise PageError("plumbing arc endpoints must lie on binding circles")
    for v in verts[1:-1]:
        if surface.binding_of_vertex(v) is not None:
            raise PageError("plumbing arc interior touches the binding")

    alpha, sigma = surface._tables()

    def binding_dart_at(label: str, v: int) -> int:
        rep = surface.bindings[label]
        for d in surface.face_darts(rep):
            if surface.tail(d) == v:
                return d
        raise PageError("endpoint not on its binding circle")

    bx = binding_dart_at(lab_x, x)
    by = binding_dart_at(lab_y, y)

    g1, G1, g2, G2 = surface._fresh_darts(4)
    alpha[g1], alpha[G1] = G1, g1
    alpha[g2], alpha[G2] = G2, g2

    def insert_after(at: int, new: int):
        sigma[new] = sigma[at]
        sigma[at] = new

    # The band leaves the binding circle right at x and lands right at y.
    # Rotation at x gains g1 then g2 after the binding dart; at y the pair
    # arrives in the opposite order, making the band an embedded rectangle.
    insert_after(bx, g2)
    insert_after(bx, g1)
    insert_after(by, G1)
    insert_after(by, G2)

    probe = CombinatorialSurface(alpha, sigma, {"probe": bx})
    new_bindings: Dict[str, int] = {}
    relabeling: Dict[str, str] = {}
    for lab, rep in surface.bindings.items():
        if lab not in (lab_x, lab_y):
            new_bindings[lab] = rep
            relabeling[lab] = lab
    if lab_x == lab_y:
        fa, fb = probe.face(bx), probe.face(by)
        if fa == fb:
            raise PageError("plumbing failed to split the binding circle")
        new_bindings[f"{lab_x}a"] = bx
        new_bindings[f"{lab_x}b"] = by
        relabeling[lab_x] = f"{lab_x}a+{lab_x}b"
    else:
        if probe.face(bx) != probe.face(by):
            raise PageError("plumbing failed to merge the binding circles")
        merged = f"{lab_x}{lab_y}"
        new_bindings[merged] = bx
        relabeling[lab_x] = merged
        relabeling[lab_y] = merged
    out = CombinatorialSurface(alpha, sigma, new_bindings, surface.punctures, {})
    if out.euler_characteristic() != surface.euler_characteristic() - 1:
        raise PageError("plumbing must drop chi by one")
    core = out.normalize(Walk("circle", tuple(arc.darts) + (G1,)))
    if not out.is_simple(core):
        raise PageError("plumbing core is not embedded")
    return PlumbingResult(out, core, g1, relabeling)
