"""Combinatorial sutured and bordered sutured Heegaard diagrams.

A diagram is a polygonal map: faces carry cyclic boundary words over
oriented edges, every interior edge is traversed once in each direction,
boundary edges once positively.  Edge kinds are "alpha", "beta",
"boundary" and "seam"; seams are interior non-curve edges used to encode
non-disk regions (slits), 1-handle feet and glued interface intervals.
Regions are faces merged across seams; all counting (niceness, suture
status, disk censuses) happens at region level.

Curves are ordered edge chains: closed curves are cycles, arcs end on
interface marked points.  Bordered diagrams additionally carry arc
interfaces: an arc diagram (intervals of matched points), the boundary
edges realizing each interval, and the assignment of arc indices to
diagram arcs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

CURVE_KINDS = ("alpha", "beta")
EDGE_KINDS = ("alpha", "beta", "boundary", "seam")


# ---------------------------------------------------------------------------
# data model


@dataclass
class Edge:
    id: str
    kind: str
    curve: str | None
    frm: str
    to: str

    def end(self, direction: int) -> str:
        return self.to if direction > 0 else self.frm

    def start(self, direction: int) -> str:
        return self.frm if direction > 0 else self.to


@dataclass
class Face:
    id: str
    word: list  # list of (edge_id, +1/-1)
    suture: bool


@dataclass
class Curve:
    id: str
    closed: bool
    segments: list  # edge ids, oriented along the traversal


@dataclass
class ArcDiagram:
    """Intervals of marked points with a 2-to-1 matching onto arcs."""

    intervals: list  # list of lists of point ids
    matching: dict  # point id -> arc index (int)
    kind: str  # which curve family carries the arcs in a diagram

    def arc_indices(self):
        return sorted(set(self.matching.values()))

    def points(self):
        return [p for iv in self.intervals for p in iv]

    def reversed(self) -> "ArcDiagram":
        """Orientation reversal: every interval flips."""
        return ArcDiagram(
            [list(reversed(iv)) for iv in self.intervals],
            dict(self.matching),
            self.kind,
        )

    def mirrored(self) -> "ArcDiagram":
        """Role mirror: the arcs switch curve family."""
        other = "beta" if self.kind == "alpha" else "alpha"
        return ArcDiagram([list(iv) for iv in self.intervals], dict(self.matching), other)

    def validate(self) -> list:
        problems = []
        pts = self.points()
        if len(pts) != len(set(pts)):
            problems.append("arc diagram repeats a marked point")
        if self.kind not in CURVE_KINDS:
            problems.append(f"arc diagram kind {self.kind!r} invalid")
        if set(self.matching) != set(pts):
            problems.append("matching domain differs from the marked points")
            return problems
        by_arc = {}
        for p, a in self.matching.items():
            by_arc.setdefault(a, []).append(p)
        for a, ps in sorted(by_arc.items()):
            if len(ps) != 2:
                problems.append(f"arc {a} has {len(ps)} points (needs 2)")
        if problems:
            return problems
        # surgery on every matched pair must leave no closed component.
        # Segments between consecutive points are nodes; surgery joins
        # left-of-p with right-of-q crosswise.  A closed component is a
        # cycle of segments none of which touches an interval end.
        seg_left = {}
        seg_right = {}
        free = set()
        for i, iv in enumerate(self.intervals):
            segs = [("seg", i, k) for k in range(len(iv) + 1)]
            free.add(segs[0])
            free.add(segs[-1])
            for k, p in enumerate(iv):
                seg_left[p] = segs[k]
                seg_right[p] = segs[k + 1]
        links = {}

        def link(a, b):
            links.setdefault(a, []).append(b)
            links.setdefault(b, []).append(a)

        for a, (p, q) in sorted((a, sorted(ps)) for a, ps in by_arc.items()):
            link(seg_left[p], seg_right[q])
            link(seg_left[q], seg_right[p])
        seen = set()
        for node in sorted(links):
            if node in seen:
                continue
            comp = {node}
            queue = [node]
            while queue:
                cur = queue.pop()
                for nxt in links.get(cur, []):
                    if nxt not in comp:
                        comp.add(nxt)
                        queue.append(nxt)
            seen |= comp
            if not comp & free:
                problems.append("surgery on the matched pairs closes a component")
                break
        return problems


@dataclass
class Interface:
    """One boundary interface: arc diagram + embedded intervals + arcs."""

    arc_diagram: ArcDiagram
    intervals: list  # list of lists of boundary edge ids, boundary order
    arcs: dict  # arc index -> curve id


@dataclass
class Diagram:
    vertices: set
    edges: dict  # id -> Edge
    faces: dict  # id -> Face
    alpha_curves: dict  # id -> Curve
    beta_curves: dict  # id -> Curve
    interfaces: list  # list of Interface
    eh: list = field(default_factory=list)  # tagged generator (vertex ids)
    marks: dict = field(default_factory=dict)  # name -> vertex id

    # -- basic accessors ----------------------------------------------------

    def curves(self, family=None):
        if family == "alpha":
            return self.alpha_curves
        if family == "beta":
            return self.beta_curves
        merged = dict(self.alpha_curves)
        merged.update(self.beta_curves)
        return merged

    def family_of(self, curve_id):
        if curve_id in self.alpha_curves:
            return "alpha"
        if curve_id in self.beta_curves:
            return "beta"
        raise KeyError(curve_id)

    def copy(self) -> "Diagram":
        return Diagram(
            set(self.vertices),
            {e: Edge(v.id, v.kind, v.curve, v.frm, v.to) for e, v in self.edges.items()},
            {f: Face(v.id, list(v.word), v.suture) for f, v in self.faces.items()},
            {c: Curve(v.id, v.closed, list(v.segments)) for c, v in self.alpha_curves.items()},
            {c: Curve(v.id, v.closed, list(v.segments)) for c, v in self.beta_curves.items()},
            [
                Interface(
                    ArcDiagram(
                        [list(iv) for iv in i.arc_diagram.intervals],
                        dict(i.arc_diagram.matching),
                        i.arc_diagram.kind,
                    ),
                    [list(iv) for iv in i.intervals],
                    dict(i.arcs),
                )
                for i in self.interfaces
            ],
            list(self.eh),
            dict(self.marks),
        )

    def fresh_id(self, prefix: str) -> str:
        used = self.vertices | set(self.edges) | set(self.faces)
        used |= set(self.alpha_curves) | set(self.beta_curves)
        n = 0
        while f"{prefix}{n}" in used:
            n += 1
        return f"{prefix}{n}"

    def interface_edge_ids(self) -> set:
        out = set()
        for itf in self.interfaces:
            for iv in itf.intervals:
                out |= set(iv)
        return out

    def boundary_edge_ids(self) -> set:
        return {e for e, ed in self.edges.items() if ed.kind == "boundary"}

    def free_boundary_edge_ids(self) -> set:
        return self.boundary_edge_ids() - self.interface_edge_ids()

    def marked_vertices(self) -> dict:
        """Interface marked points: point id -> vertex id.

        Point k of an interval is the shared vertex of edges k and k+1 of
        its embedded edge list.
        """
        out = {}
        for itf in self.interfaces:
            for pts, edges in zip(itf.arc_diagram.intervals, itf.intervals):
                for k, p in enumerate(pts):
                    out[p] = self.edges[edges[k]].to
        return out

    def intersection_vertices(self) -> list:
        fams = {}
        for ed in self.edges.values():
            if ed.kind in CURVE_KINDS:
                fams.setdefault(ed.frm, set()).add(ed.kind)
                fams.setdefault(ed.to, set()).add(ed.kind)
        return sorted(v for v, fs in fams.items() if fs == {"alpha", "beta"})


# ---------------------------------------------------------------------------
# derived structure: corners, vertex links, regions


def side_occurrences(d: Diagram) -> dict:
    """(edge, direction) -> list of (face id, word position)."""
    occ = {}
    for f in d.faces.values():
        for i, (e, s) in enumerate(f.word):
            occ.setdefault((e, s), []).append((f.id, i))
    return occ


def corners_at(d: Diagram) -> dict:
    """vertex -> list of corners (face id, position).

    The corner (f, i) sits at the start vertex of side i of f, between
    side i-1 (incoming) and side i (outgoing).
    """
    out = {}
    for f in d.faces.values():
        n = len(f.word)
        for i in range(n):
            e, s = f.word[i]
            v = d.edges[e].start(s)
            out.setdefault(v, []).append((f.id, i))
    return out


def corner_flanks(d: Diagram, corner):
    """The (incoming side, outgoing side) of a corner."""
    f, i = corner
    word = d.faces[f].word
    return word[i - 1], word[i]


def vertex_links(d: Diagram):
    """Cyclic (or linear) link of every vertex, as alternating lists.

    Returns vertex -> ("cycle" | "path", items) where items alternate
    edge incidences ("inc", edge, end) and corners ("corner", face, pos).
    A path link starts and ends with boundary-edge incidences.  Raises
    ValueError on a non-manifold vertex (disconnected link).
    """
    occ = side_occurrences(d)
    corners = corners_at(d)
    links = {}
    for v in sorted(d.vertices):
        cs = corners.get(v, [])
        if not cs:
            links[v] = ("cycle", [])
            continue
        # a corner's outgoing side (e, s) is crossed to reach the corner
        # following the opposite occurrence (e, -s); boundary edges stop.
        by_in = {}
        for c in cs:
            inc, _out = corner_flanks(d, c)
            by_in[inc] = c
        # a corner whose incoming side has no opposite starts a path link
        start = None
        for c in cs:
            inc, _out = corner_flanks(d, c)
            e, s = inc
            if (e, -s) not in occ:
                start = c
                break
        kind = "path" if start is not None else "cycle"
        cur = start if start is not None else min(cs)
        items = []
        visited = set()
        while True:
            inc, out = corner_flanks(d, cur)
            items.append(("inc", inc))
            items.append(("corner", cur))
            visited.add(cur)
            e, s = out
            if (e, -s) not in occ:
                items.append(("inc", out))
                break
            nxt = by_in.get((e, -s))
            if nxt is None:
                raise ValueError(f"broken link at vertex {v}")
            if nxt in visited:
                if kind == "cycle" and nxt == cur or nxt == (start or min(cs)):
                    pass
                break
            cur = nxt
        if len(visited) != len(cs):
            raise ValueError(f"vertex {v} has a disconnected link")
        links[v] = (kind, items)
    return links


def regions(d: Diagram) -> list:
    """Faces merged across seam edges; returns lists of face ids."""
    parent = {f: f for f in d.faces}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    occ = side_occurrences(d)
    for e, ed in d.edges.items():
        if ed.kind != "seam":
            continue
        touching = [f for (ee, s), fs in occ.items() if ee == e for f, _ in fs]
        for a, b in zip(touching, touching[1:]):
            union(a, b)
    groups = {}
    for f in d.faces:
        groups.setdefault(find(f), []).append(f)
    return [sorted(g) for g in sorted(groups.values())]


def region_of(d: Diagram):
    """face id -> frozenset of face ids of its region."""
    out = {}
    for group in regions(d):
        fs = frozenset(group)
        for f in group:
            out[f] = fs
    return out


def region_boundary_chain(d: Diagram, group) -> dict:
    """Signed edge chain of a region's boundary; seams cancel."""
    chain = {}
    for f in group:
        for (e, s) in d.faces[f].word:
            chain[e] = chain.get(e, 0) + s
    return {e: c for e, c in chain.items() if c != 0 or d.edges[e].kind != "seam"}


def recompute_suture_flags(d: Diagram) -> Diagram:
    """Suture status: the region touches a free (non-interface) piece of
    the surface boundary."""
    free = d.free_boundary_edge_ids()
    for group in regions(d):
        touches = any(
            e in free for f in group for (e, _s) in d.faces[f].word
        )
        for f in group:
            d.faces[f].suture = touches
    return d


# ---------------------------------------------------------------------------
# validation


def validate(d: Diagram) -> list:
    """All structural invariants; returns a list of problem strings."""
    problems = []
    ids = list(d.edges) + list(d.faces) + list(d.alpha_curves) + list(d.beta_curves)
    if len(ids) != len(set(ids)):
        problems.append("duplicate ids across edges/faces/curves")

    for e, ed in sorted(d.edges.items()):
        if ed.kind not in EDGE_KINDS:
            problems.append(f"edge {e} has unknown kind {ed.kind!r}")
        if ed.frm not in d.vertices or ed.to not in d.vertices:
            problems.append(f"edge {e} references a missing vertex")
        if ed.kind in CURVE_KINDS and ed.curve is None:
            problems.append(f"curve edge {e} lacks a curve id")
        if ed.kind not in CURVE_KINDS and ed.curve is not None:
            problems.append(f"non-curve edge {e} carries a curve id")

    # usage counts and signs
    usage = {}
    for f in d.faces.values():
        for (e, s) in f.word:
            if e not in d.edges:
                problems.append(f"face {f.id} references missing edge {e}")
                continue
            usage.setdefault(e, []).append(s)
    for e, ed in sorted(d.edges.items()):
        signs = sorted(usage.get(e, []))
        if ed.kind == "boundary":
            if signs != [1]:
                problems.append(f"boundary edge {e} used {signs}, expected once +")
        else:
            if signs != [-1, 1]:
                problems.append(f"interior edge {e} used {signs}, expected once each way")

    # face words connect head to tail
    for f in d.faces.values():
        n = len(f.word)
        if n == 0:
            problems.append(f"face {f.id} has an empty word")
            continue
        for i in range(n):
            e1, s1 = f.word[i - 1]
            e2, s2 = f.word[i]
            if e1 not in d.edges or e2 not in d.edges:
                continue
            if d.edges[e1].end(s1) != d.edges[e2].start(s2):
                problems.append(f"face {f.id} word breaks at position {i}")

    if problems:
        return problems  # the link walk needs a coherent complex

    # vertex links are single fans (manifold condition)
    try:
        links = vertex_links(d)
    except ValueError as err:
        return problems + [str(err)]

    # boundary edges chain into circles: one in, one out per vertex
    bout, bin_ = {}, {}
    for e, ed in d.edges.items():
        if ed.kind != "boundary":
            continue
        if ed.frm in bout or ed.to in bin_:
            problems.append(f"boundary branches at edge {e}")
        bout[ed.frm] = e
        bin_[ed.to] = e
    if set(bout) != set(bin_):
        problems.append("boundary chains do not close up")
        return problems

    # every boundary circle carries at least one suture side
    free = d.free_boundary_edge_ids()
    seen = set()
    suture_faces_edges = {
        e for f in d.faces.values() if f.suture for (e, _s) in f.word
    }
    for start in sorted(bout.values()):
        if start in seen:
            continue
        circle = []
        e = start
        while True:
            circle.append(e)
            seen.add(e)
            e = bout[d.edges[e].to]
            if e == start:
                break
        if not any(e in suture_faces_edges for e in circle):
            problems.append(f"boundary circle through {start} has no suture side")

    # curves
    seg_owner = {}
    for family in CURVE_KINDS:
        for c in d.curves(family).values():
            if not c.segments:
                problems.append(f"curve {c.id} has no segments")
                continue
            for e in c.segments:
                if e not in d.edges:
                    problems.append(f"curve {c.id} references missing edge {e}")
                    continue
                if d.edges[e].kind != family or d.edges[e].curve != c.id:
                    problems.append(f"edge {e} mislabeled for curve {c.id}")
                if e in seg_owner:
                    problems.append(f"edge {e} appears in two curves")
                seg_owner[e] = c.id
            for e1, e2 in zip(c.segments, c.segments[1:]):
                if d.edges[e1].to != d.edges[e2].frm:
                    problems.append(f"curve {c.id} breaks between {e1} and {e2}")
            if c.closed:
                if d.edges[c.segments[-1]].to != d.edges[c.segments[0]].frm:
                    problems.append(f"closed curve {c.id} does not close")
            else:
                ends = (d.edges[c.segments[0]].frm, d.edges[c.segments[-1]].to)
                marked = set(d.marked_vertices().values())
                for v in ends:
                    if v not in marked:
                        problems.append(f"arc {c.id} ends at unmarked vertex {v}")
    for e, ed in d.edges.items():
        if ed.kind in CURVE_KINDS and e not in seg_owner:
            problems.append(f"curve edge {e} belongs to no curve")

    # intersection vertices: degree four, alternating families
    for v in d.intersection_vertices():
        kind, items = links[v]
        incs = [it for it in items if it[0] == "inc"]
        fams = [d.edges[e].kind for (_t, (e, _s)) in incs]
        if not all(f in CURVE_KINDS for f in fams):
            continue  # mixed with seams: not a crossing vertex
        if kind == "cycle":
            if len(incs) != 4:
                problems.append(f"intersection vertex {v} has degree {len(incs)}")
            elif fams[0] == fams[1]:
                problems.append(f"intersection vertex {v} is not alternating")

    # balanced (only meaningful once every interface has been glued up;
    # a bordered piece may carry spare closed curves on either side)
    if not d.interfaces:
        na = sum(1 for c in d.alpha_curves.values() if c.closed)
        nb = sum(1 for c in d.beta_curves.values() if c.closed)
        if na != nb:
            problems.append(f"unbalanced diagram: {na} closed alpha vs {nb} closed beta")

    # suture flags match region contact with free boundary
    reg = region_of(d)
    for group in regions(d):
        touches = any(e in free for f in group for (e, _s) in d.faces[f].word)
        for f in group:
            if d.faces[f].suture != touches:
                problems.append(
                    f"face {f} suture flag {d.faces[f].suture} but region "
                    f"{'touches' if touches else 'avoids'} free boundary"
                )

    # interfaces
    marked = d.marked_vertices()
    all_interval_edges = []
    for k, itf in enumerate(d.interfaces):
        problems += [f"interface {k}: {p}" for p in itf.arc_diagram.validate()]
        if len(itf.intervals) != len(itf.arc_diagram.intervals):
            problems.append(f"interface {k}: interval count mismatch")
            continue
        for pts, edges in zip(itf.arc_diagram.intervals, itf.intervals):
            if len(edges) != len(pts) + 1:
                problems.append(f"interface {k}: interval needs {len(pts)+1} edges")
                continue
            all_interval_edges += edges
            for e in edges:
                if e not in d.edges or d.edges[e].kind != "boundary":
                    problems.append(f"interface {k}: {e} is not a boundary edge")
            for e1, e2 in zip(edges, edges[1:]):
                if d.edges[e1].to != d.edges[e2].frm:
                    problems.append(f"interface {k}: interval breaks at {e2}")
        arcs_by_index = {}
        for p, a in itf.arc_diagram.matching.items():
            arcs_by_index.setdefault(a, []).append(p)
        if set(itf.arcs) != set(arcs_by_index):
            problems.append(f"interface {k}: arc assignment indices mismatch")
            continue
        for a, curve_id in sorted(itf.arcs.items()):
            fam = itf.arc_diagram.kind
            if curve_id not in d.curves(fam):
                problems.append(f"interface {k}: arc {a} names missing {fam} {curve_id}")
                continue
            c = d.curves(fam)[curve_id]
            if c.closed:
                problems.append(f"interface {k}: arc {a} names closed curve {curve_id}")
                continue
            ends = {d.edges[c.segments[0]].frm, d.edges[c.segments[-1]].to}
            want = {marked[p] for p in arcs_by_index[a]}
            if ends != want:
                problems.append(f"interface {k}: arc {a} endpoints mismatch")
    if len(all_interval_edges) != len(set(all_interval_edges)):
        problems.append("interface intervals overlap")

    # arcs all assigned to some interface
    assigned = {cid for itf in d.interfaces for cid in itf.arcs.values()}
    for family in CURVE_KINDS:
        for c in d.curves(family).values():
            if not c.closed and c.id not in assigned:
                problems.append(f"arc {c.id} not assigned to any interface")

    # diagram condition: components cut along one family reach allowed boundary
    for family in CURVE_KINDS:
        fam_interface_edges = {
            e
            for itf in d.interfaces
            if itf.arc_diagram.kind == family
            for iv in itf.intervals
            for e in iv
        }
        allowed = d.boundary_edge_ids() - fam_interface_edges
        parent = {f: f for f in d.faces}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        occ = side_occurrences(d)
        for e, ed in d.edges.items():
            if ed.kind == family or ed.kind == "boundary":
                continue
            touching = [f for (ee, _s), fs in occ.items() if ee == e for f, _ in fs]
            for a, b in zip(touching, touching[1:]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        comps = {}
        for f in d.faces:
            comps.setdefault(find(f), set()).add(f)
        for comp in comps.values():
            edges_here = {e for f in comp for (e, _s) in d.faces[f].word}
            if not edges_here & allowed:
                problems.append(
                    f"a component cut along {family} avoids the free boundary"
                )

    # tags
    for v in d.eh:
        if v not in d.vertices:
            problems.append(f"eh tag names missing vertex {v}")
    for name, v in sorted(d.marks.items()):
        if v not in d.vertices:
            problems.append(f"mark {name} names missing vertex {v}")

    return problems


def euler_characteristic(d: Diagram) -> int:
    return len(d.vertices) - len(d.edges) + len(d.faces)


# ---------------------------------------------------------------------------
# JSON serialization


def to_json_dict(d: Diagram) -> dict:
    return {
        "vertices": sorted(d.vertices),
        "edges": [
            {"id": e.id, "kind": e.kind, "curve": e.curve, "from": e.frm, "to": e.to}
            for e in d.edges.values()
        ],
        "faces": [
            {
                "id": f.id,
                "boundary": [[e, "+" if s > 0 else "-"] for (e, s) in f.word],
                "suture": f.suture,
            }
            for f in d.faces.values()
        ],
        "alpha_curves": [
            {"id": c.id, "closed": c.closed, "segments": list(c.segments)}
            for c in d.alpha_curves.values()
        ],
        "beta_curves": [
            {"id": c.id, "closed": c.closed, "segments": list(c.segments)}
            for c in d.beta_curves.values()
        ],
        "arc_interfaces": [
            {
                "arc_diagram": {
                    "intervals": [list(iv) for iv in i.arc_diagram.intervals],
                    "matching": {p: a for p, a in sorted(i.arc_diagram.matching.items())},
                    "kind": i.arc_diagram.kind,
                },
                "intervals": [list(iv) for iv in i.intervals],
                "arcs": {str(a): c for a, c in sorted(i.arcs.items())},
            }
            for i in d.interfaces
        ],
        "tags": {"eh": list(d.eh), "marks": {k: v for k, v in sorted(d.marks.items())}},
    }


def from_json_dict(data: dict) -> Diagram:
    edges = {
        e["id"]: Edge(e["id"], e["kind"], e.get("curve"), e["from"], e["to"])
        for e in data["edges"]
    }
    faces = {
        f["id"]: Face(
            f["id"],
            [(e, 1 if s == "+" else -1) for (e, s) in f["boundary"]],
            bool(f["suture"]),
        )
        for f in data["faces"]
    }
    mk = lambda cs: {c["id"]: Curve(c["id"], bool(c["closed"]), list(c["segments"])) for c in cs}
    interfaces = [
        Interface(
            ArcDiagram(
                [list(iv) for iv in i["arc_diagram"]["intervals"]],
                {p: int(a) for p, a in i["arc_diagram"]["matching"].items()},
                i["arc_diagram"]["kind"],
            ),
            [list(iv) for iv in i["intervals"]],
            {int(a): c for a, c in i["arcs"].items()},
        )
        for i in data.get("arc_interfaces", [])
    ]
    tags = data.get("tags", {})
    return Diagram(
        set(data["vertices"]),
        edges,
        faces,
        mk(data["alpha_curves"]),
        mk(data["beta_curves"]),
        interfaces,
        list(tags.get("eh", [])),
        dict(tags.get("marks", {})),
    )


def serialize(d: Diagram) -> str:
    return json.dumps(to_json_dict(d), sort_keys=True, indent=1) + "\n"


def parse(text: str) -> Diagram:
    try:
        return from_json_dict(json.loads(text))
    except (KeyError, TypeError, AttributeError) as err:
        raise ValueError(f"malformed diagram document: {err!r}") from err


# ---------------------------------------------------------------------------
# canonical form and isomorphism


def _component_faces(d: Diagram) -> list:
    adj = {}
    occ = side_occurrences(d)
    for (e, _s), fs in occ.items():
        faces_touching = [f for f, _ in fs]
        other = [f for f, _ in occ.get((e, 1), [])] + [f for f, _ in occ.get((e, -1), [])]
        for f in faces_touching:
            adj.setdefault(f, set()).update(other)
    comps = []
    seen = set()
    for f in sorted(d.faces):
        if f in seen:
            continue
        comp = {f}
        queue = [f]
        while queue:
            cur = queue.pop()
            for nxt in adj.get(cur, ()):  # pragma: no branch
                if nxt not in comp:
                    comp.add(nxt)
                    queue.append(nxt)
        seen |= comp
        comps.append(sorted(comp))
    return comps


def _signature_from_flag(d: Diagram, comp, start_face, start_pos):
    """Deterministic traversal signature starting at one flag."""
    face_no = {}
    edge_no = {}
    vert_no = {}
    curve_no = {}
    order = []

    def enum_vertex(v):
        if v not in vert_no:
            vert_no[v] = len(vert_no)
        return vert_no[v]

    def enum_edge(e):
        if e not in edge_no:
            edge_no[e] = len(edge_no)
            ed = d.edges[e]
            if ed.curve is not None and ed.curve not in curve_no:
                curve_no[ed.curve] = len(curve_no)
        return edge_no[e]

    occ = side_occurrences(d)
    queue = [(start_face, start_pos)]
    face_no[start_face] = 0
    sig_faces = []
    while queue:
        f, pos = queue.pop(0)
        face = d.faces[f]
        n = len(face.word)
        rotated = [face.word[(pos + k) % n] for k in range(n)]
        entry = []
        for (e, s) in rotated:
            ed = d.edges[e]
            enum_vertex(ed.start(s))
            enum_vertex(ed.end(s))
            entry.append(
                (
                    enum_edge(e),
                    s,
                    ed.kind,
                    None if ed.curve is None else curve_no[ed.curve],
                )
            )
            opp = occ.get((e, -s))
            if opp:
                of, oi = opp[0]
                if of not in face_no:
                    face_no[of] = len(face_no)
                    queue.append((of, (oi + 1) % len(d.faces[of].word)))
        sig_faces.append((tuple(entry), face.suture))
        order.append(f)
    if len(face_no) != len(comp):
        raise ValueError("component traversal incomplete")
    # curve payload: family, closed, segment numbers in order
    curves_sig = []
    for cid, no in sorted(curve_no.items(), key=lambda kv: kv[1]):
        fam = d.family_of(cid)
        c = d.curves(fam)[cid]
        curves_sig.append((fam, c.closed, tuple(edge_no[e] for e in c.segments)))
    # interfaces touching this component
    itf_sig = []
    for itf in d.interfaces:
        edges_flat = [e for iv in itf.intervals for e in iv]
        if not edges_flat or edges_flat[0] not in edge_no:
            continue
        itf_sig.append(
            (
                tuple(tuple(edge_no[e] for e in iv) for iv in itf.intervals),
                tuple(tuple(iv) for iv in itf.arc_diagram.intervals),
                tuple(sorted(itf.arc_diagram.matching.items())),
                itf.arc_diagram.kind,
                tuple(
                    (a, curve_no[c]) for a, c in sorted(itf.arcs.items()) if c in curve_no
                ),
            )
        )
    itf_sig.sort()
    eh_sig = tuple(sorted(vert_no[v] for v in d.eh if v in vert_no))
    marks_sig = tuple(
        (k, vert_no[v]) for k, v in sorted(d.marks.items()) if v in vert_no
    )
    return (tuple(sig_faces), tuple(curves_sig), tuple(itf_sig), eh_sig, marks_sig)


def canonical_signature(d: Diagram):
    """A label-independent signature; equal iff diagrams are isomorphic."""
    comps = _component_faces(d)
    comp_sigs = []
    for comp in comps:
        best = None
        # cheap prefilter on local flag data keeps the flag set small
        flags = []
        for f in comp:
            word = d.faces[f].word
            n = len(word)
            for i in range(n):
                e, s = word[i]
                ed = d.edges[e]
                local = (n, d.faces[f].suture, ed.kind, s)
                flags.append((local, f, i))
        min_local = min(fl[0] for fl in flags)
        for local, f, i in flags:
            if local != min_local:
                continue
            sig = _signature_from_flag(d, comp, f, i)
            if best is None or sig < best:
                best = sig
        comp_sigs.append(best)
    return tuple(sorted(comp_sigs))


def equivalent(d1: Diagram, d2: Diagram) -> bool:
    """Equality up to relabeling."""
    return canonical_signature(d1) == canonical_signature(d2)


def canonical_form(d: Diagram) -> Diagram:
    """Relabel by the canonical traversal; stable across isomorphic inputs."""
    comps = _component_faces(d)
    plans = []
    for comp in comps:
        best = None
        best_flag = None
        flags = []
        for f in comp:
            word = d.faces[f].word
            for i in range(len(word)):
                e, s = word[i]
                ed = d.edges[e]
                flags.append(((len(word), d.faces[f].suture, ed.kind, s), f, i))
        min_local = min(fl[0] for fl in flags)
        for local, f, i in flags:
            if local != min_local:
                continue
            sig = _signature_from_flag(d, comp, f, i)
            if best is None or sig < best:
                best = sig
                best_flag = (f, i)
        plans.append((best, best_flag, comp))
    plans.sort(key=lambda p: p[0])

    vmap, emap, fmap, cmap = {}, {}, {}, {}
    face_order = []
    occ = side_occurrences(d)
    for _sig, (start_face, start_pos), comp in plans:
        queue = [(start_face, start_pos)]
        seen = {start_face}
        while queue:
            f, pos = queue.pop(0)
            fmap[f] = f"f{len(fmap)}"
            face_order.append((f, pos))
            face = d.faces[f]
            n = len(face.word)
            for k in range(n):
                e, s = face.word[(pos + k) % n]
                ed = d.edges[e]
                for v in (ed.start(s), ed.end(s)):
                    if v not in vmap:
                        vmap[v] = f"v{len(vmap)}"
                if e not in emap:
                    emap[e] = f"e{len(emap)}"
                    if ed.curve is not None and ed.curve not in cmap:
                        fam = d.family_of(ed.curve)
                        prefix = "a" if fam == "alpha" else "b"
                        cmap[ed.curve] = f"{prefix}{len(cmap)}"
                opp = occ.get((e, -s))
                if opp:
                    (of, oi) = opp[0]
                    if of not in seen:
                        seen.add(of)
                        queue.append((of, (oi + 1) % len(d.faces[of].word)))

    out = Diagram(set(), {}, {}, {}, {}, [], [], {})
    out.vertices = {vmap[v] for v in d.vertices if v in vmap}
    for f, pos in face_order:
        face = d.faces[f]
        n = len(face.word)
        word = [
            (emap[e], s) for (e, s) in (face.word[(pos + k) % n] for k in range(n))
        ]
        out.faces[fmap[f]] = Face(fmap[f], word, face.suture)
    for e, ed in d.edges.items():
        if e not in emap:
            continue
        out.edges[emap[e]] = Edge(
            emap[e],
            ed.kind,
            None if ed.curve is None else cmap[ed.curve],
            vmap[ed.frm],
            vmap[ed.to],
        )
    for family, store in (("alpha", out.alpha_curves), ("beta", out.beta_curves)):
        ordered = sorted(
            (c for c in d.curves(family).values() if c.id in cmap),
            key=lambda c: cmap[c.id],
        )
        for c in ordered:
            store[cmap[c.id]] = Curve(cmap[c.id], c.closed, [emap[e] for e in c.segments])
    itfs = []
    for itf in d.interfaces:
        edges_flat = [e for iv in itf.intervals for e in iv]
        if not all(e in emap for e in edges_flat):
            continue
        itfs.append(
            Interface(
                ArcDiagram(
                    [list(iv) for iv in itf.arc_diagram.intervals],
                    dict(itf.arc_diagram.matching),
                    itf.arc_diagram.kind,
                ),
                [[emap[e] for e in iv] for iv in itf.intervals],
                {a: cmap[c] for a, c in itf.arcs.items()},
            )
        )
    itfs.sort(key=lambda i: [i.intervals])
    out.interfaces = itfs
    out.eh = sorted(vmap[v] for v in d.eh if v in vmap)
    out.marks = {k: vmap[v] for k, v in sorted(d.marks.items()) if v in vmap}
    return out


# ---------------------------------------------------------------------------
# local edits: subdivision, dissolution, chord insertion


def _check(d: Diagram) -> Diagram:
    problems = validate(d)
    if problems:
        raise ValueError("invalid diagram: " + "; ".join(problems))
    return d


def subdivide_edge(d: Diagram, eid: str):
    """Split an edge at a fresh vertex; returns (first, second, vertex)."""
    if eid in d.interface_edge_ids():
        raise ValueError(f"cannot subdivide interface edge {eid}")
    ed = d.edges.pop(eid)
    w = d.fresh_id("w")
    d.vertices.add(w)
    first = d.fresh_id(f"{eid}.")
    d.edges[first] = Edge(first, ed.kind, ed.curve, ed.frm, w)
    second = d.fresh_id(f"{eid}.")
    d.edges[second] = Edge(second, ed.kind, ed.curve, w, ed.to)
    for f in d.faces.values():
        word = []
        for (e, s) in f.word:
            if e != eid:
                word.append((e, s))
            elif s > 0:
                word += [(first, 1), (second, 1)]
            else:
                word += [(second, -1), (first, -1)]
        f.word = word
    if ed.curve is not None:
        c = d.curves(ed.kind)[ed.curve]
        segs = []
        for e in c.segments:
            segs += [first, second] if e == eid else [e]
        c.segments = segs
    return first, second, w


def _prune_tags(d: Diagram) -> None:
    d.eh = [v for v in d.eh if v in d.vertices]
    d.marks = {k: v for k, v in d.marks.items() if v in d.vertices}


def _drop_orphan_vertices(d: Diagram, candidates) -> None:
    used = set()
    for ed in d.edges.values():
        used.add(ed.frm)
        used.add(ed.to)
    for v in candidates:
        if v in d.vertices and v not in used:
            d.vertices.discard(v)


def dissolve_edge(d: Diagram, eid: str) -> bool:
    """Remove an interior edge, merging or trimming its faces.

    Returns False (leaving the diagram untouched) when the edge has both
    sides on one face non-adjacently; dissolving it would create a
    non-disk face.  Curve edges must be released from their curve first.
    """
    ed = d.edges[eid]
    for family in CURVE_KINDS:
        for c in d.curves(family).values():
            if eid in c.segments:
                raise ValueError(f"edge {eid} still belongs to curve {c.id}")
    sides = []
    for f in d.faces.values():
        for i, (e, _s) in enumerate(f.word):
            if e == eid:
                sides.append((f.id, i))
    if len(sides) != 2:
        raise ValueError(f"edge {eid} is not interior")
    (f1, i1), (f2, i2) = sides
    if f1 != f2:
        wa = d.faces[f1].word
        wb = d.faces[f2].word
        rotated = wb[i2 + 1 :] + wb[:i2]
        d.faces[f1].word = wa[:i1] + rotated + wa[i1 + 1 :]
        d.faces[f1].suture = d.faces[f1].suture or d.faces[f2].suture
        del d.faces[f2]
    else:
        word = d.faces[f1].word
        n = len(word)
        lo, hi = sorted((i1, i2))
        if hi - lo == 1:
            new = word[:lo] + word[hi + 1 :]
        elif lo == 0 and hi == n - 1:
            new = word[1 : n - 1]
        else:
            return False
        if not new:
            raise ValueError(f"dissolving {eid} empties face {f1}")
        d.faces[f1].word = new
    del d.edges[eid]
    _drop_orphan_vertices(d, [ed.frm, ed.to])
    return True


def _corner_positions(d: Diagram, face_id: str, v: str):
    word = d.faces[face_id].word
    return [i for i, (e, s) in enumerate(word) if d.edges[e].start(s) == v]


def split_face_by_chord(d: Diagram, face_id, pos1, pos2, edge_id, kind, curve):
    """Cut a face along a new edge between the corners at pos1 and pos2."""
    face = d.faces.pop(face_id)
    word = face.word
    n = len(word)
    v1 = d.edges[word[pos1][0]].start(word[pos1][1])
    v2 = d.edges[word[pos2][0]].start(word[pos2][1])
    d.edges[edge_id] = Edge(edge_id, kind, curve, v1, v2)
    slice1 = [word[(pos2 + k) % n] for k in range((pos1 - pos2) % n)]
    slice2 = [word[(pos1 + k) % n] for k in range((pos2 - pos1) % n)]
    fa = d.fresh_id("f")
    d.faces[fa] = Face(fa, [(edge_id, 1)] + slice1, face.suture)
    fb = d.fresh_id("f")
    d.faces[fb] = Face(fb, [(edge_id, -1)] + slice2, face.suture)
    return fa, fb


def _route_and_insert_chord(d, piece_set, v1, v2, family, curve_id, crossing_curves, crossings_out):
    """Insert a curve chord from v1 to v2 inside the pieces of one face.

    If the endpoints were separated by previously inserted chords of the
    curves in crossing_curves, the chord crosses them (the pieces of a
    disk face form a tree, so the route is unique); each forced crossing
    subdivides the crossed chord at a fresh intersection vertex, which is
    appended to crossings_out.  Returns the new edge ids in order.
    """

    def piece_with(v):
        hits = []
        for f in sorted(piece_set):
            for i in _corner_positions(d, f, v):
                hits.append((f, i))
        if len(hits) != 1:
            raise ValueError(f"vertex {v} is not an unambiguous corner ({hits})")
        return hits[0]

    start, _ = piece_with(v1)
    goal, _ = piece_with(v2)
    crossable = {e for c in crossing_curves for e in c.segments}
    prev = {start: None}
    queue = [start]
    while queue and goal not in prev:
        cur = queue.pop(0)
        for (e, s) in d.faces[cur].word:
            if e not in crossable:
                continue
            for f in sorted(piece_set):
                if f == cur:
                    continue
                if any(ee == e for (ee, _ss) in d.faces[f].word) and f not in prev:
                    prev[f] = (cur, e)
                    queue.append(f)
    if goal not in prev:
        raise ValueError(f"no route between {v1} and {v2}")
    hops = []
    node = goal
    while prev[node] is not None:
        cur, e = prev[node]
        hops.append(e)
        node = cur
    hops.reverse()
    chain = [v1]
    for e in hops:
        _a, _b, w = subdivide_edge(d, e)
        crossings_out.append(w)
        chain.append(w)
    chain.append(v2)
    new_edges = []
    for wa, wb in zip(chain, chain[1:]):
        hit = None
        for f in sorted(piece_set):
            pa = _corner_positions(d, f, wa)
            pb = _corner_positions(d, f, wb)
            if pa and pb:
                if hit is not None:
                    raise ValueError(f"chord {wa}->{wb} is ambiguous")
                if len(pa) != 1 or len(pb) != 1:
                    raise ValueError(f"repeated corner for chord {wa}->{wb}")
                hit = (f, pa[0], pb[0])
        if hit is None:
            raise ValueError(f"no piece contains both {wa} and {wb}")
        f, pa, pb = hit
        eid = d.fresh_id(f"{curve_id}.")
        fa, fb = split_face_by_chord(d, f, pa, pb, eid, family, curve_id)
        piece_set.discard(f)
        piece_set.add(fa)
        piece_set.add(fb)
        new_edges.append(eid)
    return new_edges


# ---------------------------------------------------------------------------
# handle attachments


@dataclass
class TransversePath:
    """A transverse path: alternating face and edge ids, starting and
    ending with the faces containing the two handle feet."""

    items: list

    def faces(self):
        return self.items[0::2]

    def crossed(self):
        return self.items[1::2]


def _require_free_suture_edge(d: Diagram, eid: str) -> None:
    if eid not in d.free_boundary_edge_ids():
        raise ValueError(f"{eid} is not a free boundary edge")
    for f in d.faces.values():
        if any(e == eid for (e, _s) in f.word) and not f.suture:
            raise ValueError(f"{eid} does not bound a suture region")


def _make_foot(d: Diagram, eid: str) -> dict:
    left, rest, v1 = subdivide_edge(d, eid)
    seam, right, v2 = subdivide_edge(d, rest)
    d.edges[seam].kind = "seam"
    return {"left": left, "seam": seam, "right": right, "v1": v1, "v2": v2}


def _attach_one_handle(d: Diagram, p: str, q: str):
    _require_free_suture_edge(d, p)
    if p == q:
        first, second, _w = subdivide_edge(d, p)
        p, q = first, second
    else:
        _require_free_suture_edge(d, q)
    fp = _make_foot(d, p)
    fq = _make_foot(d, q)
    s1 = d.fresh_id("s")
    d.edges[s1] = Edge(s1, "boundary", None, fp["v1"], fq["v2"])
    s2 = d.fresh_id("s")
    d.edges[s2] = Edge(s2, "boundary", None, fq["v1"], fp["v2"])
    strip = d.fresh_id("f")
    d.faces[strip] = Face(
        strip,
        [(fp["seam"], -1), (s1, 1), (fq["seam"], -1), (s2, 1)],
        True,
    )
    return {"p": fp, "q": fq, "s1": s1, "s2": s2, "strip": strip}


def attach_one_handle(d: Diagram, p: str, q: str) -> Diagram:
    """Attach a 1-handle with feet on the free suture edges p and q.

    Each foot replaces the middle of its edge by a seam; the strip face
    between the two seams is a new suture region with two free sides.
    """
    out = d.copy()
    _attach_one_handle(out, p, q)
    recompute_suture_flags(out)
    return _check(out)


def _subdivide_ports(d: Diagram, seam: str, order) -> dict:
    first_part, rest, u1 = subdivide_edge(d, seam)
    _mid, _last, u2 = subdivide_edge(d, rest)
    return {order[0]: u1, order[1]: u2}


def attach_two_handle(
    d: Diagram,
    p: str,
    q: str,
    a_path: TransversePath,
    b_path: TransversePath,
    port_order_p=("b", "a"),
    port_order_q=("b", "a"),
):
    """Attach a 2-handle along a curve through the suture points p, q.

    The attaching curve is split by the feet into the two declared
    transverse paths; a 1-handle strip joins the feet and each path is
    closed up through the strip into a new closed curve (beta along
    b_path, alpha along a_path).  The two new curves intersect exactly
    once; that point is returned alongside the diagram.
    """
    out = d.copy()
    for path in (a_path, b_path):
        for e in path.crossed():
            ed = out.edges.get(e)
            if ed is None or ed.kind == "boundary":
                raise ValueError(f"path cannot cross {e}")
        for f in path.faces():
            if f not in out.faces:
                raise ValueError(f"path names missing face {f}")
    if set(a_path.crossed()) & set(b_path.crossed()):
        raise ValueError("the two paths must cross distinct edges")
    face_p = next(
        f for f, face in d.faces.items() if any(e == p for (e, _s) in face.word)
    )
    face_q = next(
        f for f, face in d.faces.items() if any(e == q for (e, _s) in face.word)
    )
    for path in (a_path, b_path):
        if path.faces()[0] != face_p or path.faces()[-1] != face_q:
            raise ValueError("paths must run from the face at p to the face at q")

    handle = _attach_one_handle(out, p, q)
    ports_p = _subdivide_ports(out, handle["p"]["seam"], port_order_p)
    ports_q = _subdivide_ports(out, handle["q"]["seam"], port_order_q)

    pieces = {}

    def piece_set(face_id):
        return pieces.setdefault(face_id, {face_id})

    beta_id = out.fresh_id("B")
    alpha_id = out.fresh_id("A")
    crossings = []

    def insert_closed(path, curve_id, family, port_p, port_q, crossing_curves):
        segs = []
        waypoints = [port_p]
        for e in path.crossed():
            _a, _b, w = subdivide_edge(out, e)
            waypoints.append(w)
        waypoints.append(port_q)
        for fdecl, wa, wb in zip(path.faces(), waypoints, waypoints[1:]):
            segs += _route_and_insert_chord(
                out, piece_set(fdecl), wa, wb, family, curve_id,
                crossing_curves, crossings,
            )
        segs += _route_and_insert_chord(
            out, piece_set(handle["strip"]), port_q, port_p, family, curve_id,
            crossing_curves, crossings,
        )
        return segs

    beta_segs = insert_closed(b_path, beta_id, "beta", ports_p["b"], ports_q["b"], [])
    out.beta_curves[beta_id] = Curve(beta_id, True, beta_segs)
    n_before = len(crossings)
    assert n_before == 0
    alpha_segs = insert_closed(
        a_path, alpha_id, "alpha", ports_p["a"], ports_q["a"],
        [out.beta_curves[beta_id]],
    )
    out.alpha_curves[alpha_id] = Curve(alpha_id, True, alpha_segs)
    if len(crossings) != 1:
        raise ValueError(
            f"paths are not disjoint: {len(crossings)} forced crossings"
        )
    x0 = crossings[0]
    name = "x0"
    n = 0
    while name in out.marks:
        n += 1
        name = f"x0_{n}"
    out.marks[name] = x0
    recompute_suture_flags(out)
    return _check(out), x0


def attach_trivial_bypass(d: Diagram, site: str, sign: str):
    """Attach a trivial bypass along the free suture edge `site`.

    This is literally a 1-handle attachment followed by a 2-handle whose
    attaching paths stay inside the new strip's collar; the sign picks
    which side of the strip the single forced intersection lands on.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    out = d.copy()
    handle = _attach_one_handle(out, site, site)
    face_site = next(
        f
        for f, face in out.faces.items()
        if any(e == handle["p"]["right"] for (e, _s) in face.word)
    )
    a_path = TransversePath([face_site, handle["p"]["seam"], handle["strip"]])
    b_path = TransversePath([face_site, handle["q"]["seam"], handle["strip"]])
    recompute_suture_flags(out)
    port_q = ("a", "b") if sign == "+" else ("b", "a")
    return attach_two_handle(
        out,
        handle["p"]["right"],
        handle["s1"],
        a_path,
        b_path,
        port_order_p=("a", "b"),
        port_order_q=port_q,
    )


# ---------------------------------------------------------------------------
# destabilization


def _curve_vertices(d: Diagram, c: Curve) -> set:
    out = set()
    for e in c.segments:
        out.add(d.edges[e].frm)
        out.add(d.edges[e].to)
    return out


def fuse_edges_at(d: Diagram, v: str) -> bool:
    """Erase a two-valent vertex by fusing its two like edges."""
    incident = [
        (e, end)
        for e, ed in d.edges.items()
        for end in (("to",) if ed.to == v else ()) + (("frm",) if ed.frm == v else ())
    ]
    if len(incident) != 2:
        return False
    (e1, end1), (e2, end2) = incident
    if e1 == e2:
        return False
    a, b = d.edges[e1], d.edges[e2]
    if a.kind != b.kind or a.curve != b.curve:
        return False
    protected = set(d.marks.values()) | set(d.eh) | set(d.marked_vertices().values())
    iface = d.interface_edge_ids()
    if v in protected or e1 in iface or e2 in iface:
        return False
    # orient the fusion as first -> v -> second
    if a.to == v and b.frm == v:
        first, second = a, b
    elif b.to == v and a.frm == v:
        first, second = b, a
    else:
        return False  # both heads or both tails: not a through vertex
    for f in d.faces.values():
        word = []
        i = 0
        n = len(f.word)
        if n >= 2 and f.word[0][0] in (first.id, second.id):
            # rotate so a fused pair never wraps
            for r in range(n):
                if f.word[r][0] not in (first.id, second.id):
                    f.word = f.word[r:] + f.word[:r]
                    break
        while i < len(f.word):
            e, s = f.word[i]
            if e == first.id and s > 0:
                assert f.word[i + 1] == (second.id, 1)
                word.append((first.id, 1))
                i += 2
            elif e == second.id and s < 0:
                assert f.word[i + 1] == (first.id, -1)
                word.append((first.id, -1))
                i += 2
            else:
                word.append((e, s))
                i += 1
        f.word = word
    if first.curve is not None:
        c = d.curves(first.kind)[first.curve]
        segs = []
        for e in c.segments:
            if e == second.id:
                continue
            segs.append(e)
        c.segments = segs
    first.to = second.to
    del d.edges[second.id]
    d.vertices.discard(v)
    return True


def simplify(d: Diagram) -> Diagram:
    """Dissolve dissolvable seams and fuse two-valent vertices.

    Regions, curves and boundary structure are unchanged up to
    normalization; only redundant subdivision is removed.
    """
    changed = True
    while changed:
        changed = False
        for e in sorted(d.edges):
            if d.edges[e].kind == "seam" and e not in d.interface_edge_ids():
                if dissolve_edge(d, e):
                    changed = True
                    break
        if changed:
            continue
        for v in sorted(d.vertices):
            if fuse_edges_at(d, v):
                changed = True
                break
    _prune_tags(d)
    return d


def trivial_destabilize(d: Diagram, alpha_id: str, beta_id: str):
    """Remove a stabilizing curve pair crossing once and nothing else.

    The surface is surgered along the alpha curve (cut and capped on both
    sides) and the then-dangling beta arc is erased; the faces around the
    removed pair merge.  Returns the simplified diagram and the id the
    forced intersection point had.
    """
    out = d.copy()
    alpha = out.alpha_curves.pop(alpha_id)
    beta = out.beta_curves.pop(beta_id)
    if not alpha.closed or not beta.closed:
        raise ValueError("only closed curves can be destabilized")
    across = _curve_vertices(out, alpha) & _curve_vertices(out, beta)
    if len(across) != 1:
        raise ValueError(f"curves meet at {sorted(across)}, need a single point")
    forced = next(iter(across))
    pair_edges = set(alpha.segments) | set(beta.segments)
    for v in _curve_vertices(out, alpha) | _curve_vertices(out, beta):
        for e, ed in out.edges.items():
            if v in (ed.frm, ed.to) and ed.kind in CURVE_KINDS and e not in pair_edges:
                raise ValueError(f"curve edge {e} touches the pair at {v}")

    links = vertex_links(out)
    alpha_edges = list(alpha.segments)
    alpha_set = set(alpha_edges)

    # cut: split every vertex on alpha into a + and a - copy
    side_of_vertex_end = {}  # (edge id, "frm"/"to") -> new vertex id
    for v in sorted(_curve_vertices(out, alpha)):
        kind, items = links[v]
        if kind != "cycle":
            raise ValueError(f"alpha vertex {v} lies on the boundary")
        incs = [it[1] for it in items if it[0] == "inc"]
        alpha_positions = [i for i, (e, _s) in enumerate(incs) if e in alpha_set]
        if len(alpha_positions) != 2:
            raise ValueError(f"vertex {v} is not a simple alpha vertex")
        i1, i2 = alpha_positions
        n = len(incs)
        arcs = [
            [incs[(i1 + k) % n] for k in range(1, (i2 - i1) % n)],
            [incs[(i2 + k) % n] for k in range(1, (i1 - i2) % n)],
        ]
        signs = [incs[i1][1], incs[i2][1]]
        if signs[0] == signs[1]:
            raise ValueError(f"inconsistent sides at {v}")
        plus = out.fresh_id("v")
        out.vertices.add(plus)
        minus = out.fresh_id("v")
        out.vertices.add(minus)
        copies = {1: plus, -1: minus}
        # the arc following the incidence with sign s lies on side s
        for (e, s), arc in zip([incs[i1], incs[i2]], arcs):
            target = copies[s]
            for (ee, ss) in arc:
                side_of_vertex_end[(ee, "to" if ss > 0 else "frm")] = target
        side_of_vertex_end[("alpha+", v)] = plus
        side_of_vertex_end[("alpha-", v)] = minus
        out.vertices.discard(v)
    for (e, end), target in side_of_vertex_end.items():
        if e in ("alpha+", "alpha-") or e in alpha_set:
            continue
        setattr(out.edges[e], "to" if end == "to" else "frm", target)

    copy_edges = []
    occ_rewrite = {}
    for e in alpha_edges:
        ed = out.edges.pop(e)
        ep = out.fresh_id(f"{e}+")
        em = out.fresh_id(f"{e}-")
        out.edges[ep] = Edge(
            ep,
            "seam",
            None,
            side_of_vertex_end[("alpha+", ed.frm)],
            side_of_vertex_end[("alpha+", ed.to)],
        )
        out.edges[em] = Edge(
            em,
            "seam",
            None,
            side_of_vertex_end[("alpha-", ed.frm)],
            side_of_vertex_end[("alpha-", ed.to)],
        )
        occ_rewrite[(e, 1)] = (ep, 1)
        occ_rewrite[(e, -1)] = (em, -1)
        copy_edges += [ep, em]
    for f in out.faces.values():
        f.word = [occ_rewrite.get((e, s), (e, s)) for (e, s) in f.word]
    plus_ids = [occ_rewrite[(e, 1)][0] for e in alpha_edges]
    minus_ids = [occ_rewrite[(e, -1)][0] for e in alpha_edges]
    cap_plus = out.fresh_id("f")
    out.faces[cap_plus] = Face(cap_plus, [(e, -1) for e in reversed(plus_ids)], False)
    cap_minus = out.fresh_id("f")
    out.faces[cap_minus] = Face(cap_minus, [(e, 1) for e in minus_ids], False)

    # beta edges are plain interior edges now; release and dissolve all
    for e in beta.segments:
        out.edges[e].kind = "seam"
        out.edges[e].curve = None
    pending = set(beta.segments) | set(copy_edges)
    while pending:
        progressed = False
        for e in sorted(pending):
            if e in out.edges and dissolve_edge(out, e):
                pending.discard(e)
                progressed = True
                break
            if e not in out.edges:
                pending.discard(e)
                progressed = True
                break
        if not progressed:
            raise RuntimeError(f"destabilization stuck on {sorted(pending)}")
    simplify(out)
    _prune_tags(out)
    recompute_suture_flags(out)
    return _check(out), forced


# ---------------------------------------------------------------------------
# bordered concatenation


def _prefix_diagram(d: Diagram, tag: str) -> Diagram:
    out = d.copy()
    pv = {v: f"{tag}{v}" for v in out.vertices}
    pe = {e: f"{tag}{e}" for e in out.edges}
    pf = {f: f"{tag}{f}" for f in out.faces}
    pc = {c: f"{tag}{c}" for c in list(out.alpha_curves) + list(out.beta_curves)}
    out.vertices = set(pv.values())
    out.edges = {
        pe[e]: Edge(pe[e], ed.kind, None if ed.curve is None else pc[ed.curve], pv[ed.frm], pv[ed.to])
        for e, ed in out.edges.items()
    }
    out.faces = {
        pf[f]: Face(pf[f], [(pe[e], s) for (e, s) in face.word], face.suture)
        for f, face in out.faces.items()
    }
    out.alpha_curves = {
        pc[c]: Curve(pc[c], cv.closed, [pe[e] for e in cv.segments])
        for c, cv in out.alpha_curves.items()
    }
    out.beta_curves = {
        pc[c]: Curve(pc[c], cv.closed, [pe[e] for e in cv.segments])
        for c, cv in out.beta_curves.items()
    }
    out.interfaces = [
        Interface(
            i.arc_diagram,
            [[pe[e] for e in iv] for iv in i.intervals],
            {a: pc[c] for a, c in i.arcs.items()},
        )
        for i in out.interfaces
    ]
    out.eh = [pv[v] for v in out.eh]
    out.marks = {k: pv[v] for k, v in out.marks.items()}
    return out


def _interface_arc_bijection(z1: ArcDiagram, z2: ArcDiagram) -> dict:
    """Arc-index map induced by identifying z2 with z1 reversed."""
    if z1.kind != z2.kind:
        raise ValueError("interfaces carry different curve families")
    if [len(iv) for iv in z1.intervals] != [len(iv) for iv in z2.intervals]:
        raise ValueError("interval shapes do not match")
    arc_map = {}
    for iv1, iv2 in zip(z1.intervals, z2.intervals):
        for r, p in enumerate(iv1):
            p2 = iv2[len(iv2) - 1 - r]
            a1, a2 = z1.matching[p], z2.matching[p2]
            if arc_map.setdefault(a1, a2) != a2:
                raise ValueError("matchings are incompatible")
    if len(set(arc_map.values())) != len(arc_map):
        raise ValueError("matchings are incompatible")
    return arc_map


def _reverse_edge(d: Diagram, eid: str) -> None:
    ed = d.edges[eid]
    ed.frm, ed.to = ed.to, ed.frm
    for f in d.faces.values():
        f.word = [(e, -s if e == eid else s) for (e, s) in f.word]


def concatenate_bordered_record(b1: Diagram, b2: Diagram, pair=(0, 0)):
    """Glue interface pair[0] of b1 to interface pair[1] of b2.

    The interval edges identify in reversed order and become seams, the
    marked points merge, and matched arcs fuse into closed curves.
    Returns the glued diagram and a record sufficient to split it again.
    """
    i1 = b1.interfaces[pair[0]]
    i2 = b2.interfaces[pair[1]]
    arc_map = _interface_arc_bijection(i1.arc_diagram, i2.arc_diagram)
    left = _prefix_diagram(b1, "L:")
    right = _prefix_diagram(b2, "R:")
    il = left.interfaces.pop(pair[0])
    ir = right.interfaces.pop(pair[1])

    record = {
        "pair": pair,
        "intervals": [],
        "fused": [],
        "interface_left": il,
        "interface_right": ir,
    }

    out = Diagram(
        left.vertices | right.vertices,
        {**left.edges, **right.edges},
        {**left.faces, **right.faces},
        {**left.alpha_curves, **right.alpha_curves},
        {**left.beta_curves, **right.beta_curves},
        left.interfaces + right.interfaces,
        left.eh + right.eh,
        dict(left.marks),
    )
    for k, v in right.marks.items():
        if k in out.marks:
            raise ValueError(f"mark {k} present on both sides")
        out.marks[k] = v

    def merge_vertex(keep, lose):
        if keep == lose:
            return
        for ed in out.edges.values():
            if ed.frm == lose:
                ed.frm = keep
            if ed.to == lose:
                ed.to = keep
        out.eh = [keep if v == lose else v for v in out.eh]
        out.marks = {k: (keep if v == lose else v) for k, v in out.marks.items()}
        out.vertices.discard(lose)

    for edges_l, edges_r in zip(il.intervals, ir.intervals):
        if len(edges_l) != len(edges_r):
            raise ValueError("interval subdivision mismatch")
        m = len(edges_l)
        # vertices along each side, tail to head
        vl = [out.edges[edges_l[0]].frm] + [out.edges[e].to for e in edges_l]
        vr = [out.edges[edges_r[0]].frm] + [out.edges[e].to for e in edges_r]
        merged = []
        for j, v in enumerate(vr):
            keep = vl[m - j]
            merged.append((keep, v))
            merge_vertex(keep, v)
        interval_rec = {"seams": [], "right_edges": [], "merged": merged}
        for idx, e in enumerate(edges_l):
            f = edges_r[m - 1 - idx]
            fr = out.edges.pop(f)
            for face in out.faces.values():
                face.word = [(e if ee == f else ee, -s if ee == f else s) for (ee, s) in face.word]
            out.edges[e].kind = "seam"
            interval_rec["seams"].append(e)
            interval_rec["right_edges"].append(f)
            del fr
        record["intervals"].append(interval_rec)

    for a1, c1 in sorted(il.arcs.items()):
        c2 = ir.arcs[arc_map[a1]]
        fam = il.arc_diagram.kind
        store = out.curves(fam)
        left_curve = store[c1]
        right_curve = store.pop(c2)
        e_end = out.edges[left_curve.segments[-1]].to
        r_start = out.edges[right_curve.segments[0]].frm
        r_end = out.edges[right_curve.segments[-1]].to
        if r_start == e_end:
            appended = list(right_curve.segments)
            reversed_flag = False
        elif r_end == e_end:
            appended = list(reversed(right_curve.segments))
            for e in appended:
                _reverse_edge(out, e)
            reversed_flag = True
        else:
            raise ValueError(f"arcs {c1} and {c2} do not meet")
        for e in appended:
            out.edges[e].curve = c1
        left_curve.segments = left_curve.segments + appended
        left_curve.closed = True
        record["fused"].append(
            (c1, c2, fam, len(left_curve.segments) - len(appended), reversed_flag)
        )
    recompute_suture_flags(out)
    return _check(out), record


def concatenate_bordered(b1: Diagram, b2: Diagram, pair=(0, 0)) -> Diagram:
    out, _record = concatenate_bordered_record(b1, b2, pair)
    return out


def split_bordered(d: Diagram, record):
    """Undo a recorded concatenation; returns the two bordered pieces."""
    work = d.copy()
    # restore fused curves
    for c1, c2, fam, n_left, reversed_flag in record["fused"]:
        store = work.curves(fam)
        c = store[c1]
        appended = c.segments[n_left:]
        c.segments = c.segments[:n_left]
        c.closed = False
        if reversed_flag:
            appended = list(reversed(appended))
            for e in appended:
                _reverse_edge(work, e)
        store[c2] = Curve(c2, False, appended)
        for e in appended:
            work.edges[e].curve = c2
    # restore interval edges and vertices
    for rec in record["intervals"]:
        m = len(rec["seams"])
        for idx in range(m):
            e = rec["seams"][idx]
            f = rec["right_edges"][idx]
            # R-side currently uses (e, -1); give it back its own edge
            for face in work.faces.values():
                if face.id.startswith("R:"):
                    face.word = [
                        (f, 1) if (ee == e and s < 0) else (ee, s) for (ee, s) in face.word
                    ]
            le = work.edges[e]
            le.kind = "boundary"
            work.edges[f] = Edge(f, "boundary", None, le.to, le.frm)
        for keep, lose in rec["merged"]:
            work.vertices.add(lose)
            for eid, ed in work.edges.items():
                r_side = eid.startswith("R:")
                if not r_side:
                    continue
                if ed.frm == keep:
                    ed.frm = lose
                if ed.to == keep:
                    ed.to = lose
    # fix endpoints of the restored boundary edges themselves
    for rec in record["intervals"]:
        m = len(rec["seams"])
        vl = {}
        for keep, lose in rec["merged"]:
            vl[keep] = lose
        for idx in range(m):
            f = rec["right_edges"][idx]
            ed = work.edges[f]
            ed.frm = vl.get(ed.frm, ed.frm)
            ed.to = vl.get(ed.to, ed.to)

    def take(prefix, other_interface):
        faces = {f: face for f, face in work.faces.items() if f.startswith(prefix)}
        edge_ids = {e for face in faces.values() for (e, _s) in face.word}
        edges = {e: work.edges[e] for e in edge_ids}
        vertices = set()
        for ed in edges.values():
            vertices.add(ed.frm)
            vertices.add(ed.to)
        curves = {}
        for fam in CURVE_KINDS:
            curves[fam] = {
                c: cv for c, cv in work.curves(fam).items() if set(cv.segments) <= edge_ids
            }
        interfaces = [
            itf
            for itf in work.interfaces
            if all(e in edge_ids for iv in itf.intervals for e in iv)
        ] + [other_interface]
        piece = Diagram(
            vertices,
            edges,
            faces,
            curves["alpha"],
            curves["beta"],
            interfaces,
            [v for v in work.eh if v in vertices],
            {k: v for k, v in work.marks.items() if v in vertices},
        )
        recompute_suture_flags(piece)
        return piece

    left = take("L:", record["interface_left"])
    right = take("R:", record["interface_right"])
    return _check(left), _check(right)


# ---------------------------------------------------------------------------
# builtin pieces and 2-handle preparation (blueprints live in pieces.py)


def builtin_piece(kind: str) -> Diagram:
    """A named building-block diagram; see pieces.catalog() for the list."""
    from . import pieces

    return pieces.build(kind)


def prepare_two_handle(d: Diagram, p, q, a_path, b_path):
    """Stage a 2-handle attachment for the bordered gluing pipeline."""
    from . import glue

    return glue.prepare_two_handle(d, p, q, a_path, b_path)
