"""Generators, nice-diagram differential, homology, Spin^c classes,
and admissibility for sutured diagrams.

The unit of every census here is the *region*: faces merged across seam
edges, walked with the seams cancelled.  On seamless diagrams regions
and faces coincide; after a bordered concatenation a single rectangle
may well consist of two faces joined along a scar, and it still counts.
"""

from dataclasses import dataclass, field
from typing import Optional

from .exactlin import (
    BinaryMatrix,
    IntegerMatrix,
    cokernel_residue,
    f2_rank_kernel,
    positive_kernel_witness,
)
from . import surface
from .surface import CURVE_KINDS, Diagram


# ---------------------------------------------------------------------------
# generators


def _crossing_curves(d: Diagram) -> dict:
    """crossing vertex -> {"alpha": curve id, "beta": curve id}."""
    out = {}
    for family in CURVE_KINDS:
        for c in d.curves(family).values():
            for e in c.segments:
                ed = d.edges[e]
                for v in (ed.frm, ed.to):
                    out.setdefault(v, {})[family] = c.id
    return {v: fams for v, fams in out.items() if len(fams) == 2}


def generators(d: Diagram) -> list:
    """All occupancy sets, canonically ordered.

    A generator uses each closed curve exactly once and each arc at most
    once.  Diagrams admitting no such matching yield an empty list.
    """
    crossings = _crossing_curves(d)
    order = sorted(crossings)
    closed = {
        c.id
        for family in CURVE_KINDS
        for c in d.curves(family).values()
        if c.closed
    }
    remaining = {}  # curve -> undecided crossings, for pruning
    for v in order:
        for cid in crossings[v].values():
            remaining[cid] = remaining.get(cid, 0) + 1

    found = []
    used = {cid: 0 for cid in remaining}

    def rec(i, chosen):
        if i == len(order):
            if all(used.get(cid, 0) == 1 for cid in closed):
                found.append(frozenset(chosen))
            return
        v = order[i]
        cids = list(crossings[v].values())
        for cid in cids:
            remaining[cid] -= 1
        if all(
            used[cid] + remaining[cid] >= 1 for cid in cids if cid in closed
        ):
            rec(i + 1, chosen)
        if all(used[cid] == 0 for cid in cids):
            for cid in cids:
                used[cid] += 1
            chosen.append(v)
            rec(i + 1, chosen)
            chosen.pop()
            for cid in cids:
                used[cid] -= 1
        for cid in cids:
            remaining[cid] += 1

    rec(0, [])
    return sorted(found, key=lambda x: tuple(sorted(x)))


# ---------------------------------------------------------------------------
# domain boundary walks and the shape census


def _classify_edge(d: Diagram, eid: str) -> str:
    kind = d.edges[eid].kind
    if kind in CURVE_KINDS:
        return kind
    return "bd"


def _boundary_cycles(d: Diagram, faces, inner) -> list:
    """Boundary cycles of a union of faces, as lists of (face, pos).

    ``inner`` names the edges glued inside the union; their occurrences
    cancel pairwise and the walk jumps across them.  Every remaining
    occurrence lies on exactly one cycle.
    """
    partner = {}
    occ_of = {}
    for f in faces:
        for i, (e, _s) in enumerate(d.faces[f].word):
            occ_of.setdefault(e, []).append((f, i))
    for e in inner:
        occs = occ_of.get(e, [])
        if len(occs) != 2:
            raise ValueError(f"inner edge {e} does not occur twice in the union")
        partner[occs[0]] = occs[1]
        partner[occs[1]] = occs[0]

    budget = sum(len(d.faces[f].word) for f in faces) + 1

    def advance(f, i):
        n = len(d.faces[f].word)
        j = (i + 1) % n
        steps = 0
        while d.faces[f].word[j][0] in inner:
            f, j = partner[(f, j)]
            n = len(d.faces[f].word)
            j = (j + 1) % n
            steps += 1
            if steps > budget:
                raise ValueError("domain boundary walk does not close up")
        return f, j

    todo = {
        (f, i)
        for f in faces
        for i, (e, _s) in enumerate(d.faces[f].word)
        if e not in inner
    }
    cycles = []
    while todo:
        start = min(todo)
        cyc = []
        cur = start
        while True:
            cyc.append(cur)
            todo.discard(cur)
            cur = advance(*cur)
            if cur == start:
                break
        cycles.append(cyc)
    return cycles


def _cycle_runs(d: Diagram, cycle) -> list:
    """Maximal runs of one edge class: list of (class, [(face, pos), ...])."""
    classes = [_classify_edge(d, d.faces[f].word[i][0]) for (f, i) in cycle]
    n = len(cycle)
    if len(set(classes)) == 1:
        return [(classes[0], list(cycle))]
    k = next(i for i in range(n) if classes[i - 1] != classes[i])
    cyc = cycle[k:] + cycle[:k]
    cls = classes[k:] + classes[:k]
    runs = []
    for c, occ in zip(cls, cyc):
        if runs and runs[-1][0] == c:
            runs[-1][1].append(occ)
        else:
            runs.append((c, [occ]))
    return runs


def _occ_edge(d, occ):
    f, i = occ
    return d.faces[f].word[i]


def _run_head(d, run):
    """Head vertex of a run traversed in boundary orientation."""
    e, s = _occ_edge(d, run[1][-1])
    return d.edges[e].end(s)


def _corner_points(d, runs):
    """x- and y-corners at junctions of consecutive curve runs.

    A corner is the head of the incoming run; it is an x-point when the
    incoming side is an alpha run and a y-point when it is a beta run.
    """
    xs, ys = set(), set()
    n = len(runs)
    for i in range(n):
        cls_in, _ = runs[i]
        cls_out, _ = runs[(i + 1) % n]
        if "bd" in (cls_in, cls_out):
            continue
        v = _run_head(d, runs[i])
        if cls_in == "alpha":
            xs.add(v)
        else:
            ys.add(v)
    return frozenset(xs), frozenset(ys)


def _interior_crossings(d, faces, cycles) -> frozenset:
    on_cycle = set()
    for cyc in cycles:
        for occ in cyc:
            e, _s = _occ_edge(d, occ)
            on_cycle.add(d.edges[e].frm)
            on_cycle.add(d.edges[e].to)
    face_set = set(faces)
    incident = {}
    for f, face in d.faces.items():
        for (e, _s) in face.word:
            ed = d.edges[e]
            incident.setdefault(ed.frm, set()).add(f)
            incident.setdefault(ed.to, set()).add(f)
    return frozenset(
        v
        for v in _crossing_curves(d)
        if v not in on_cycle and incident.get(v, set()) <= face_set
    )


@dataclass
class RegionShape:
    """One non-suture region with its classified boundary."""

    faces: tuple
    shape: str  # "bigon" | "rect" | "port" | "other"
    moves_from: frozenset = frozenset()  # x-corners
    moves_to: frozenset = frozenset()  # y-corners
    interior: frozenset = frozenset()  # crossings strictly inside
    runs: list = field(default_factory=list)
    chord: Optional[tuple] = None  # interface edges of the port side, in order


def region_census(d: Diagram) -> list:
    """Classify every non-suture region of the diagram."""
    out = []
    seams = {e for e, ed in d.edges.items() if ed.kind == "seam"}
    interface = d.interface_edge_ids()
    for group in surface.regions(d):
        if d.faces[group[0]].suture:
            continue
        inner = {
            e for f in group for (e, _s) in d.faces[f].word if e in seams
        }
        cycles = _boundary_cycles(d, group, inner)
        rec = RegionShape(tuple(group), "other")
        if len(cycles) == 1:
            runs = _cycle_runs(d, cycles[0])
            rec.runs = runs
            pattern = [c for c, _ in runs]
            rec.moves_from, rec.moves_to = _corner_points(d, runs)
            rec.interior = _interior_crossings(d, group, cycles)
            if sorted(pattern) == ["alpha", "beta"]:
                rec.shape = "bigon"
            elif len(runs) == 4 and pattern.count("bd") == 0:
                rec.shape = "rect"
            elif len(runs) == 4 and pattern.count("bd") == 1:
                bd_run = next(r for r in runs if r[0] == "bd")
                if all(
                    _occ_edge(d, occ)[0] in interface for occ in bd_run[1]
                ):
                    rec.shape = "port"
                    rec.chord = tuple(
                        _occ_edge(d, occ)[0] for occ in bd_run[1]
                    )
        out.append(rec)
    return out


def is_nice(d: Diagram):
    """(flag, offending face ids).

    Every non-suture region must be a bigon, a rectangle, or a
    quadrilateral with exactly one side on an interface.
    """
    offenders = []
    for rec in region_census(d):
        if rec.shape == "other":
            offenders.extend(rec.faces)
    return (not offenders, sorted(offenders))


# ---------------------------------------------------------------------------
# admissibility


def is_admissible(d: Diagram):
    """No nonzero nonnegative combination of non-suture faces may have
    constant multiplicity along every full curve; returns (flag, witness)
    where the witness maps faces to the coefficients of an offending
    domain, or None.
    """
    cols = sorted(f for f, face in d.faces.items() if not face.suture)
    if not cols:
        return True, None
    col_of = {f: j for j, f in enumerate(cols)}
    mult = {}  # edge -> {column: signed occurrence count}
    for f in cols:
        for (e, s) in d.faces[f].word:
            row = mult.setdefault(e, {})
            row[col_of[f]] = row.get(col_of[f], 0) + s
    rows = []
    for e, ed in sorted(d.edges.items()):
        if ed.kind not in CURVE_KINDS and e in mult:
            rows.append(dict(mult[e]))
    for family in CURVE_KINDS:
        for c in d.curves(family).values():
            segs = list(c.segments)
            pairs = list(zip(segs, segs[1:]))
            if c.closed and len(segs) > 1:
                pairs.append((segs[-1], segs[0]))
            for e1, e2 in pairs:
                row = {}
                for j, v in mult.get(e1, {}).items():
                    row[j] = row.get(j, 0) + v
                for j, v in mult.get(e2, {}).items():
                    row[j] = row.get(j, 0) - v
                rows.append(row)
    dense = [
        [row.get(j, 0) for j in range(len(cols))]
        for row in rows
        if any(row.values())
    ]
    if not dense:
        dense = [[0] * len(cols)]
    witness = positive_kernel_witness(IntegerMatrix.from_rows(dense))
    if witness is None:
        return True, None
    return False, {cols[j]: w for j, w in enumerate(witness) if w}


# ---------------------------------------------------------------------------
# Spin^c partition


def spinc_partition(d: Diagram) -> dict:
    """Generator -> class index.

    Two generators share a class exactly when the difference of their
    occupancy vectors, spread along the alpha family, is a boundary of
    non-suture regions; classes are numbered by first appearance in
    canonical generator order.
    """
    gens = generators(d)
    verts = sorted(
        {
            v
            for c in d.curves("alpha").values()
            for e in c.segments
            for v in (d.edges[e].frm, d.edges[e].to)
        }
    )
    if not verts:
        return {x: 0 for x in gens}
    vrow = {v: i for i, v in enumerate(verts)}
    alpha_edges = {e for c in d.curves("alpha").values() for e in c.segments}
    groups = [g for g in surface.regions(d) if not d.faces[g[0]].suture]
    dense = [[0] * len(groups) for _ in verts]
    for j, group in enumerate(groups):
        coeff = {}
        for f in group:
            for (e, s) in d.faces[f].word:
                if e in alpha_edges:
                    coeff[e] = coeff.get(e, 0) + s
        for e, c in coeff.items():
            ed = d.edges[e]
            dense[vrow[ed.to]][j] += c
            dense[vrow[ed.frm]][j] -= c
    key = cokernel_residue(IntegerMatrix.from_rows(dense))
    labels = {}
    classes = {}
    for x in gens:
        k = key([1 if v in x else 0 for v in verts])
        if k not in labels:
            labels[k] = len(labels)
        classes[x] = labels[k]
    return classes


# ---------------------------------------------------------------------------
# the chain complex


@dataclass
class ChainComplexF2:
    basis: list  # canonically ordered generators
    differential: BinaryMatrix  # entry (i, j): basis[i] appears in d(basis[j])
    spinc_class: dict  # generator -> class index

    def index(self, x) -> int:
        return self.basis.index(x)

    def boundary_of(self, x) -> frozenset:
        j = self.index(x)
        return frozenset(
            self.basis[r] for (r, c) in self.differential.entries if c == j
        )


def differential(d: Diagram) -> ChainComplexF2:
    """The mod-2 boundary map counting bigon and rectangle regions.

    Requires a nice, admissible diagram and rejects anything else.
    """
    nice, offenders = is_nice(d)
    if not nice:
        raise ValueError(f"diagram is not nice; offending faces: {offenders}")
    ok, witness = is_admissible(d)
    if not ok:
        raise ValueError(f"diagram is not admissible; witness domain: {witness}")
    basis = generators(d)
    idx = {x: i for i, x in enumerate(basis)}
    moves = [
        (rec.moves_from, rec.moves_to, rec.interior)
        for rec in region_census(d)
        if rec.shape in ("bigon", "rect")
    ]
    entries = set()
    for j, x in enumerate(basis):
        counts = {}
        for X, Y, interior in moves:
            if not (X <= x) or (Y & x) or (interior & x):
                continue
            y = frozenset((x - X) | Y)
            counts[y] = counts.get(y, 0) + 1
        for y, c in counts.items():
            if c % 2:
                entries.add((idx[y], j))
    diff = BinaryMatrix(len(basis), len(basis), frozenset(entries))
    return ChainComplexF2(basis, diff, spinc_partition(d))


@dataclass
class Homology:
    total: int
    by_class: dict  # class index -> rank
    representatives: list  # (class index, cycle as generator tuple), one per unit

    def rank(self) -> int:
        return self.total


def _insert_pivot(pivots: dict, vec: int) -> int:
    """Reduce vec against an echelon set keyed by leading bit; install
    the residue if nonzero.  Returns the residue."""
    while vec:
        lead = vec.bit_length() - 1
        if lead not in pivots:
            pivots[lead] = vec
            return vec
        vec ^= pivots[lead]
    return 0


def homology(d: Diagram) -> Homology:
    """Per-class mod-2 homology ranks with representative cycles."""
    cx = differential(d)
    n = len(cx.basis)
    colmask = [0] * n
    for (r, c) in cx.differential.entries:
        colmask[c] |= 1 << r
    by_class = {}
    reps = []
    for label in sorted(set(cx.spinc_class.values())):
        block = [j for j in range(n) if cx.spinc_class[cx.basis[j]] == label]
        pos = {j: t for t, j in enumerate(block)}
        bcols = []
        for j in block:
            mask = 0
            for r in range(n):
                if colmask[j] >> r & 1:
                    if r not in pos:
                        raise AssertionError(
                            "differential does not respect the class partition"
                        )
                    mask |= 1 << pos[r]
            bcols.append(mask)
        rows = [
            [bcols[s] >> t & 1 for s in range(len(block))]
            for t in range(len(block))
        ]
        _rank, kernel = f2_rank_kernel(BinaryMatrix.from_rows(rows))
        pivots = {}
        for vec in bcols:
            _insert_pivot(pivots, vec)
        rank_d = len(pivots)
        count = 0
        for kv in kernel:
            mask = 0
            for t, bit in enumerate(kv):
                if bit:
                    mask |= 1 << t
            if _insert_pivot(pivots, mask):
                count += 1
                cycle = tuple(
                    cx.basis[block[t]] for t, bit in enumerate(kv) if bit
                )
                reps.append((label, cycle))
        by_class[label] = count
        assert count == len(block) - 2 * rank_d
    return Homology(sum(by_class.values()), by_class, reps)


# ---------------------------------------------------------------------------
# interface actions


@dataclass(frozen=True)
class ActionRecord:
    """An embedded quadrilateral with one side a chord on an interface.

    The chord runs along ``interval`` of ``interface`` from marked point
    ``start`` to marked point ``end`` (0-indexed).  The quad moves the
    crossing ``x_pt`` to ``y_pt`` and traps ``interior`` inside.
    """

    interface: int
    interval: int
    start: int
    end: int
    x_pt: str
    y_pt: str
    faces: tuple
    interior: frozenset


def _try_quad(d, faces, bd, k, t, i, j):
    occ = {}
    for f in faces:
        for (e, _s) in d.faces[f].word:
            occ[e] = occ.get(e, 0) + 1
    inner = {e for e, n in occ.items() if n == 2}
    if inner & set(bd):
        return None
    cycles = _boundary_cycles(d, faces, inner)
    if len(cycles) != 1:
        return None
    runs = _cycle_runs(d, cycles[0])
    if len(runs) != 4:
        return None
    bd_runs = [r for r in runs if r[0] == "bd"]
    if len(bd_runs) != 1:
        return None
    run_edges = [_occ_edge(d, o)[0] for o in bd_runs[0][1]]
    if run_edges != bd:
        return None
    xs, ys = _corner_points(d, runs)
    if len(xs) != 1 or len(ys) != 1:
        return None
    return ActionRecord(
        interface=k,
        interval=t,
        start=i,
        end=j,
        x_pt=next(iter(xs)),
        y_pt=next(iter(ys)),
        faces=tuple(faces),
        interior=_interior_crossings(d, faces, cycles),
    )


def action_census(d: Diagram) -> list:
    """All embedded quadrilaterals carried by interface chords.

    A chord joins two marked points of one interval; the quad picks up
    any set of non-suture faces whose union is a disk meeting the
    interface in exactly that chord, with the rest of its boundary an
    alternating beta-alpha-beta (or alpha-beta-alpha) walk.
    """
    nonsuture = sorted(f for f, face in d.faces.items() if not face.suture)
    if d.interfaces and len(nonsuture) > 14:
        raise ValueError(
            f"refusing to enumerate 2^{len(nonsuture)} candidate domains; "
            "simplify the diagram first"
        )
    face_of_edge = {}
    for f, face in d.faces.items():
        for (e, _s) in face.word:
            face_of_edge.setdefault(e, []).append(f)
    out = []
    for k, iface in enumerate(d.interfaces):
        for t, interval in enumerate(iface.intervals):
            points = len(interval) - 1  # m+1 edges carry m marked points
            for i in range(points):
                for j in range(i + 1, points):
                    bd = [interval[p] for p in range(i + 1, j + 1)]
                    base = {f for e in bd for f in face_of_edge[e]}
                    if any(d.faces[f].suture for f in base):
                        continue
                    others = [f for f in nonsuture if f not in base]
                    for bits in range(1 << len(others)):
                        chosen = sorted(
                            base.union(
                                others[b]
                                for b in range(len(others))
                                if bits >> b & 1
                            )
                        )
                        rec = _try_quad(d, chosen, bd, k, t, i, j)
                        if rec is not None:
                            out.append(rec)
    return sorted(
        out,
        key=lambda r: (r.interface, r.interval, r.start, r.end, r.faces),
    )
