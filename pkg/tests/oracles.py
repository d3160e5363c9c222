"""Slow, independent re-derivations used to cross-check the library.

Everything here is written from the definitions with no shared code
paths: generators by filtering the full power set, the boundary map by
reading face words directly (only meaningful when no region spans a
seam), and F2 rank by list-of-sets elimination.
"""

from itertools import combinations

from sutured import surface


def crossing_vertices(d):
    """Vertices lying on curves of both families."""
    on = {"alpha": set(), "beta": set()}
    for family in ("alpha", "beta"):
        for c in d.curves(family).values():
            for e in c.segments:
                on[family].add(d.edges[e].frm)
                on[family].add(d.edges[e].to)
    return sorted(on["alpha"] & on["beta"])


def powerset_generators(d):
    """Filter every subset of crossings by the matching condition."""
    xs = crossing_vertices(d)
    if len(xs) > 16:
        raise ValueError("power set too large for the brute oracle")
    constraints = []
    for family in ("alpha", "beta"):
        for c in d.curves(family).values():
            verts = set()
            for e in c.segments:
                verts.add(d.edges[e].frm)
                verts.add(d.edges[e].to)
            constraints.append((c.closed, verts))
    out = []
    for r in range(len(xs) + 1):
        for combo in combinations(xs, r):
            s = set(combo)
            if all(
                (len(s & verts) == 1 if closed else len(s & verts) <= 1)
                for closed, verts in constraints
            ):
                out.append(frozenset(s))
    return sorted(out, key=lambda x: tuple(sorted(x)))


def _family_of(d, eid):
    k = d.edges[eid].kind
    return k if k in ("alpha", "beta") else None


def seamless_face_moves(d):
    """(x-corners, y-corners, interior) read straight off face words.

    Precondition: no non-suture region spans a seam, so each non-suture
    face word is its own boundary cycle.
    """
    for group in surface.regions(d):
        if d.faces[group[0]].suture:
            continue
        if len(group) > 1 or any(
            d.edges[e].kind == "seam" for (e, _s) in d.faces[group[0]].word
        ):
            raise ValueError("a region spans a seam; face reading is invalid")
    crossings = set(crossing_vertices(d))
    moves = []
    for f, face in d.faces.items():
        if face.suture:
            continue
        fams = [_family_of(d, e) for (e, _s) in face.word]
        if None in fams:
            continue  # face touches an interface; never a bigon or rectangle
        n = len(face.word)
        switches = [i for i in range(n) if fams[i - 1] != fams[i]]
        if len(switches) not in (2, 4):
            continue
        xs, ys = set(), set()
        for i in switches:
            e_prev, s_prev = face.word[i - 1]
            v = d.edges[e_prev].end(s_prev)
            if fams[i - 1] == "alpha":
                xs.add(v)
            else:
                ys.add(v)
        boundary_verts = set()
        for (e, _s) in face.word:
            boundary_verts.add(d.edges[e].frm)
            boundary_verts.add(d.edges[e].to)
        inside = set()
        for v in crossings - boundary_verts:
            touching = {
                g
                for g, gf in d.faces.items()
                for (e, _s) in gf.word
                if v in (d.edges[e].frm, d.edges[e].to)
            }
            if touching == {f}:
                inside.add(v)
        moves.append((frozenset(xs), frozenset(ys), frozenset(inside)))
    return moves


def naive_differential(d):
    """Generator -> set of boundary generators, mod 2, by face reading."""
    gens = powerset_generators(d)
    moves = seamless_face_moves(d)
    out = {}
    for x in gens:
        hits = {}
        for xs, ys, inside in moves:
            if xs <= x and not (ys & x) and not (inside & x):
                y = frozenset((x - xs) | ys)
                hits[y] = hits.get(y, 0) + 1
        out[x] = {y for y, c in hits.items() if c % 2}
    return out


def constant_multiplicity_violation(d, witness):
    """Check a claimed inadmissibility witness from the definitions.

    Returns None when the witness is a nonzero nonnegative combination
    of non-suture faces whose edge multiplicities vanish on every
    boundary and seam edge and stay constant along every curve;
    otherwise a string naming the first failure.
    """
    if not witness:
        return "witness is empty"
    for f, c in witness.items():
        if d.faces[f].suture:
            return f"face {f} carries the suture"
        if c <= 0:
            return f"coefficient of {f} is not positive"
    mult = {}
    for f, c in witness.items():
        for (e, s) in d.faces[f].word:
            mult[e] = mult.get(e, 0) + c * s
    for e, ed in d.edges.items():
        if ed.kind not in ("alpha", "beta") and mult.get(e, 0) != 0:
            return f"edge {e} has net multiplicity {mult[e]}"
    for family in ("alpha", "beta"):
        for c in d.curves(family).values():
            values = {mult.get(e, 0) for e in c.segments}
            if len(values) > 1:
                return f"curve {c.id} multiplicity varies: {sorted(values)}"
    return None


def naive_f2_rank(rows):
    """Rank over F2 of rows given as iterables of column labels."""
    basis = []
    for row in rows:
        cur = set(row)
        for b in basis:
            if max(b) in cur:
                cur ^= b
        if cur:
            basis.append(cur)
            basis.sort(key=max, reverse=True)
    return len(basis)
