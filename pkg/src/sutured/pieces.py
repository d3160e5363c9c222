"""Built-in diagrams: small fixtures and the bordered gluing blocks.

Every builder returns a fresh mutable diagram.  `build` looks a piece up
by name (case-insensitive, with a few aliases) and `catalog` lists what
is available.
"""

from .surface import (
    ArcDiagram,
    Curve,
    Diagram,
    Edge,
    Face,
    Interface,
    concatenate_bordered,
)


def disk() -> Diagram:
    """A disk whose whole boundary is one suture circle."""
    return Diagram(
        {"w0"},
        {"s0": Edge("s0", "boundary", None, "w0", "w0")},
        {"S": Face("S", [("s0", 1)], True)},
        {},
        {},
        [],
    )


def stab() -> Diagram:
    """The disk after one stabilization: a single alpha/beta crossing `c`.

    The crossing is tagged as the contact generator.
    """
    edges = {
        "a1": Edge("a1", "alpha", "A0", "c", "m"),
        "a2": Edge("a2", "alpha", "A0", "m", "c"),
        "b": Edge("b", "beta", "B0", "c", "c"),
        "s": Edge("s", "seam", None, "m", "w"),
        "bd": Edge("bd", "boundary", None, "w", "w"),
    }
    word = [
        ("a1", 1), ("s", 1), ("bd", 1), ("s", -1),
        ("a2", 1), ("b", 1), ("a2", -1), ("a1", -1), ("b", -1),
    ]
    return Diagram(
        {"c", "m", "w"},
        edges,
        {"F": Face("F", word, True)},
        {"A0": Curve("A0", True, ["a1", "a2"])},
        {"B0": Curve("B0", True, ["b"])},
        [],
        eh=["c"],
    )


def bigonpair() -> Diagram:
    """An annulus with one alpha and one beta circle crossing twice.

    The two crossings x, y are joined by two bigons, so the differential
    cancels over F2 and the homology has rank 2.
    """
    edges = {
        "aS": Edge("aS", "alpha", "A0", "x", "y"),
        "aL": Edge("aL", "alpha", "A0", "y", "x"),
        "bS1": Edge("bS1", "beta", "B0", "x", "n"),
        "bS2": Edge("bS2", "beta", "B0", "n", "y"),
        "bL1": Edge("bL1", "beta", "B0", "y", "k"),
        "bL2": Edge("bL2", "beta", "B0", "k", "x"),
        "sI": Edge("sI", "seam", None, "n", "v_in"),
        "sO": Edge("sO", "seam", None, "k", "v_out"),
        "ci": Edge("ci", "boundary", None, "v_in", "v_in"),
        "co": Edge("co", "boundary", None, "v_out", "v_out"),
    }
    faces = {
        "EYE": Face("EYE", [("aS", -1), ("bS1", 1), ("bS2", 1)], False),
        "LONG": Face("LONG", [("aL", 1), ("bL2", -1), ("bL1", -1)], False),
        "INNER": Face(
            "INNER",
            [("aL", -1), ("bS2", -1), ("sI", 1), ("ci", 1), ("sI", -1), ("bS1", -1)],
            True,
        ),
        "OUTER": Face(
            "OUTER",
            [("aS", 1), ("bL1", 1), ("sO", 1), ("co", 1), ("sO", -1), ("bL2", 1)],
            True,
        ),
    }
    return Diagram(
        {"x", "y", "n", "k", "v_in", "v_out"},
        edges,
        faces,
        {"A0": Curve("A0", True, ["aS", "aL"])},
        {"B0": Curve("B0", True, ["bS1", "bS2", "bL1", "bL2"])},
        [],
    )


def az1() -> Diagram:
    """Identity block for the point-free interface: two parallel strips.

    Each strip is a suture square with the left side on a beta-type
    interface and the right side on an alpha-type one.
    """
    vertices = set()
    edges, faces = {}, {}
    for k in ("1", "2"):
        vs = [f"c{k}{i}" for i in "abcd"]
        vertices |= set(vs)
        edges[f"L{k}"] = Edge(f"L{k}", "boundary", None, vs[0], vs[1])
        edges[f"T{k}"] = Edge(f"T{k}", "boundary", None, vs[1], vs[2])
        edges[f"R{k}"] = Edge(f"R{k}", "boundary", None, vs[2], vs[3])
        edges[f"B{k}"] = Edge(f"B{k}", "boundary", None, vs[3], vs[0])
        faces[f"SQ{k}"] = Face(
            f"SQ{k}",
            [(f"L{k}", 1), (f"T{k}", 1), (f"R{k}", 1), (f"B{k}", 1)],
            True,
        )
    left = Interface(ArcDiagram([[], []], {}, "beta"), [["L1"], ["L2"]], {})
    right = Interface(ArcDiagram([[], []], {}, "alpha"), [["R1"], ["R2"]], {})
    return Diagram(vertices, edges, faces, {}, {}, [left, right])


def az2() -> Diagram:
    """The twice-marked block for the one-handle interface shape (3+1).

    A planar piece with two beta arcs entering from the left interface and
    two alpha arcs from the right one, crossing in the five points
    z1..z5.  Carries left and right interfaces of the same shape: one
    interval with three marked points and one with a single point.
    """
    vertices = {
        "z1", "z2", "z3", "z4", "z5",
        "l1", "l2", "l3", "l4", "r1", "r2", "r3", "r4",
        "LT", "LB", "RB", "RT", "L2a", "L2b", "R2a", "R2b",
    }
    edges = {
        # beta arc B2: l1 - z1 - z2 - z3 - l3
        "b2a": Edge("b2a", "beta", "B2", "l1", "z1"),
        "b2b": Edge("b2b", "beta", "B2", "z1", "z2"),
        "b2c": Edge("b2c", "beta", "B2", "z2", "z3"),
        "b2d": Edge("b2d", "beta", "B2", "z3", "l3"),
        # beta arc B1: l2 - z4 - z5 - l4
        "b1a": Edge("b1a", "beta", "B1", "l2", "z4"),
        "b1b": Edge("b1b", "beta", "B1", "z4", "z5"),
        "b1c": Edge("b1c", "beta", "B1", "z5", "l4"),
        # alpha arc A2: r1 - z3 - z4 - z1 - r3
        "a2a": Edge("a2a", "alpha", "A2", "r1", "z3"),
        "a2b": Edge("a2b", "alpha", "A2", "z3", "z4"),
        "a2c": Edge("a2c", "alpha", "A2", "z4", "z1"),
        "a2d": Edge("a2d", "alpha", "A2", "z1", "r3"),
        # alpha arc A1: r2 - z2 - z5 - r4
        "a1a": Edge("a1a", "alpha", "A1", "r2", "z2"),
        "a1b": Edge("a1b", "alpha", "A1", "z2", "z5"),
        "a1c": Edge("a1c", "alpha", "A1", "z5", "r4"),
        # outer boundary circle
        "t1": Edge("t1", "boundary", None, "LT", "l1"),
        "t2": Edge("t2", "boundary", None, "l1", "l2"),
        "t3": Edge("t3", "boundary", None, "l2", "l3"),
        "t4": Edge("t4", "boundary", None, "l3", "LB"),
        "sb": Edge("sb", "boundary", None, "LB", "RB"),
        "t5": Edge("t5", "boundary", None, "RB", "r1"),
        "t6": Edge("t6", "boundary", None, "r1", "r2"),
        "t7": Edge("t7", "boundary", None, "r2", "r3"),
        "t8": Edge("t8", "boundary", None, "r3", "RT"),
        "st": Edge("st", "boundary", None, "RT", "LT"),
        # inner boundary circle (around the hole)
        "h1": Edge("h1", "boundary", None, "L2a", "l4"),
        "h2": Edge("h2", "boundary", None, "l4", "L2b"),
        "sh1": Edge("sh1", "boundary", None, "L2b", "R2a"),
        "h3": Edge("h3", "boundary", None, "R2a", "r4"),
        "h4": Edge("h4", "boundary", None, "r4", "R2b"),
        "sh2": Edge("sh2", "boundary", None, "R2b", "L2a"),
    }
    faces = {
        "D1": Face("D1", [("t2", 1), ("b1a", 1), ("a2c", 1), ("b2a", -1)], False),
        "D2": Face("D2", [("t3", 1), ("b2d", -1), ("a2b", 1), ("b1a", -1)], False),
        "D5": Face("D5", [("t6", 1), ("a1a", 1), ("b2c", 1), ("a2a", -1)], False),
        "D4": Face("D4", [("t7", 1), ("a2d", -1), ("b2b", 1), ("a1a", -1)], False),
        "D3": Face("D3", [("b1b", 1), ("a1b", -1), ("b2b", -1), ("a2c", -1)], False),
        "W": Face("W", [("a1c", 1), ("h4", 1), ("sh2", 1), ("h1", 1), ("b1c", -1)], True),
        "Sout": Face("Sout", [("t1", 1), ("b2a", 1), ("a2d", 1), ("t8", 1), ("st", 1)], True),
        "Sbig": Face(
            "Sbig",
            [
                ("b1b", -1), ("a2b", -1), ("b2c", -1), ("a1b", 1), ("b1c", 1),
                ("h2", 1), ("sh1", 1), ("h3", 1), ("a1c", -1),
            ],
            True,
        ),
        "Sbot": Face("Sbot", [("t4", 1), ("sb", 1), ("t5", 1), ("a2a", 1), ("b2d", 1)], True),
    }
    left = Interface(
        ArcDiagram(
            [["xL1", "xL2", "xL3"], ["yL1"]],
            {"xL1": 2, "xL2": 1, "xL3": 2, "yL1": 1},
            "beta",
        ),
        [["t1", "t2", "t3", "t4"], ["h1", "h2"]],
        {2: "B2", 1: "B1"},
    )
    right = Interface(
        ArcDiagram(
            [["xR1", "xR2", "xR3"], ["yR1"]],
            {"xR1": 2, "xR2": 1, "xR3": 2, "yR1": 1},
            "alpha",
        ),
        [["t5", "t6", "t7", "t8"], ["h3", "h4"]],
        {2: "A2", 1: "A1"},
    )
    marks = {z: z for z in ("z1", "z2", "z3", "z4", "z5")}
    return Diagram(
        vertices,
        edges,
        faces,
        {"A2": Curve("A2", False, ["a2a", "a2b", "a2c", "a2d"]),
         "A1": Curve("A1", False, ["a1a", "a1b", "a1c"])},
        {"B2": Curve("B2", False, ["b2a", "b2b", "b2c", "b2d"]),
         "B1": Curve("B1", False, ["b1a", "b1b", "b1c"])},
        [left, right],
        marks=marks,
    )


def cap1() -> Diagram:
    """Cap for the point-free interface: two curve-free bigons."""
    vertices = set()
    edges, faces = {}, {}
    for k in ("1", "2"):
        v1, v2 = f"v{k}a", f"v{k}b"
        vertices |= {v1, v2}
        edges[f"I{k}"] = Edge(f"I{k}", "boundary", None, v1, v2)
        edges[f"S{k}"] = Edge(f"S{k}", "boundary", None, v2, v1)
        faces[f"C{k}"] = Face(f"C{k}", [(f"I{k}", 1), (f"S{k}", 1)], True)
    itf = Interface(ArcDiagram([[], []], {}, "alpha"), [["I1"], ["I2"]], {})
    return Diagram(vertices, edges, faces, {}, {}, [itf])


def cap2() -> Diagram:
    """Cap for the (3+1)-interface: genus one, a single crossing `w`.

    Two alpha arcs leave the interface; the one through `w` meets the
    closed beta curve exactly once, so {w} is the only generator and it
    occupies the two-point arc.
    """
    vertices = {"P0", "m1", "m2", "m3", "P4", "Q0", "m4", "Q2", "w"}
    edges = {
        "i1a": Edge("i1a", "boundary", None, "P0", "m1"),
        "i1b": Edge("i1b", "boundary", None, "m1", "m2"),
        "i1c": Edge("i1c", "boundary", None, "m2", "m3"),
        "i1d": Edge("i1d", "boundary", None, "m3", "P4"),
        "su1": Edge("su1", "boundary", None, "P4", "Q0"),
        "i2a": Edge("i2a", "boundary", None, "Q0", "m4"),
        "i2b": Edge("i2b", "boundary", None, "m4", "Q2"),
        "su2": Edge("su2", "boundary", None, "Q2", "P0"),
        "g1": Edge("g1", "alpha", "A2W", "m1", "w"),
        "g2": Edge("g2", "alpha", "A2W", "w", "m3"),
        "c1": Edge("c1", "alpha", "A1W", "m2", "m4"),
        "b1": Edge("b1", "beta", "B_w", "w", "w"),
    }
    faces = {
        "FA": Face(
            "FA",
            [("i1c", 1), ("g2", -1), ("b1", 1), ("g2", 1),
             ("i1d", 1), ("su1", 1), ("i2a", 1), ("c1", -1)],
            True,
        ),
        "FB": Face(
            "FB",
            [("i2b", 1), ("su2", 1), ("i1a", 1), ("g1", 1),
             ("b1", -1), ("g1", -1), ("i1b", 1), ("c1", 1)],
            True,
        ),
    }
    itf = Interface(
        ArcDiagram(
            [["q1", "q2", "q3"], ["q4"]],
            {"q1": 2, "q2": 1, "q3": 2, "q4": 1},
            "alpha",
        ),
        [["i1a", "i1b", "i1c", "i1d"], ["i2a", "i2b"]],
        {2: "A2W", 1: "A1W"},
    )
    return Diagram(
        vertices,
        edges,
        faces,
        {"A2W": Curve("A2W", False, ["g1", "g2"]),
         "A1W": Curve("A1W", False, ["c1"])},
        {"B_w": Curve("B_w", True, ["b1"])},
        [itf],
        marks={"w": "w"},
    )


def u1() -> Diagram:
    """The stabilized disk with its handle strip cut open.

    Same crossing pattern as `stab`, but the strip boundary is exposed as
    a point-free beta-type interface of two intervals.
    """
    edges = {
        "a1": Edge("a1", "alpha", "Ae", "e", "m"),
        "a2": Edge("a2", "alpha", "Ae", "m", "e"),
        "be": Edge("be", "beta", "Be", "e", "e"),
        "s": Edge("s", "seam", None, "m", "w1"),
        "j1": Edge("j1", "boundary", None, "w1", "w2"),
        "su1": Edge("su1", "boundary", None, "w2", "w3"),
        "j2": Edge("j2", "boundary", None, "w3", "w4"),
        "su2": Edge("su2", "boundary", None, "w4", "w1"),
    }
    word = [
        ("a1", 1), ("s", 1), ("j1", 1), ("su1", 1), ("j2", 1), ("su2", 1),
        ("s", -1), ("a2", 1), ("be", 1), ("a2", -1), ("a1", -1), ("be", -1),
    ]
    itf = Interface(ArcDiagram([[], []], {}, "beta"), [["j1"], ["j2"]], {})
    return Diagram(
        {"e", "m", "w1", "w2", "w3", "w4"},
        edges,
        {"F": Face("F", word, True)},
        {"Ae": Curve("Ae", True, ["a1", "a2"])},
        {"Be": Curve("Be", True, ["be"])},
        [itf],
        marks={"e": "e"},
    )


def u2() -> Diagram:
    """Bypass block: one closed alpha curve crossed once, interface (3+1).

    The crossing `c` is the unique generator; both faces are suture
    regions, so the block is elementary.
    """
    vertices = {"T0", "u1", "u2", "u3", "T4", "V0", "u4", "V2", "c", "hv"}
    edges = {
        "t1u": Edge("t1u", "boundary", None, "T0", "u1"),
        "t2u": Edge("t2u", "boundary", None, "u1", "u2"),
        "t3u": Edge("t3u", "boundary", None, "u2", "u3"),
        "t4u": Edge("t4u", "boundary", None, "u3", "T4"),
        "s1u": Edge("s1u", "boundary", None, "T4", "V0"),
        "i2au": Edge("i2au", "boundary", None, "V0", "u4"),
        "i2bu": Edge("i2bu", "boundary", None, "u4", "V2"),
        "s2u": Edge("s2u", "boundary", None, "V2", "T0"),
        "holeP": Edge("holeP", "boundary", None, "hv", "hv"),
        "slitP": Edge("slitP", "seam", None, "u1", "hv"),
        "gam": Edge("gam", "alpha", "GamU", "c", "c"),
        "b1p1": Edge("b1p1", "beta", "B1U", "u2", "c"),
        "b1p2": Edge("b1p2", "beta", "B1U", "c", "u4"),
        "b2": Edge("b2", "beta", "B2U", "u1", "u3"),
    }
    faces = {
        "F1": Face(
            "F1",
            [("t2u", 1), ("b1p1", 1), ("gam", 1), ("b1p1", -1),
             ("t3u", 1), ("b2", -1), ("slitP", 1), ("holeP", 1), ("slitP", -1)],
            True,
        ),
        "F2": Face(
            "F2",
            [("b2", 1), ("t4u", 1), ("s1u", 1), ("i2au", 1), ("b1p2", -1),
             ("gam", -1), ("b1p2", 1), ("i2bu", 1), ("s2u", 1), ("t1u", 1)],
            True,
        ),
    }
    itf = Interface(
        ArcDiagram(
            [["p1", "p2", "p3"], ["p4"]],
            {"p1": 2, "p2": 1, "p3": 2, "p4": 1},
            "beta",
        ),
        [["t1u", "t2u", "t3u", "t4u"], ["i2au", "i2bu"]],
        {2: "B2U", 1: "B1U"},
    )
    return Diagram(
        vertices,
        edges,
        faces,
        {"GamU": Curve("GamU", True, ["gam"])},
        {"B1U": Curve("B1U", False, ["b1p1", "b1p2"]),
         "B2U": Curve("B2U", False, ["b2"])},
        [itf],
        marks={"c": "c"},
    )


def rt2() -> Diagram:
    """Rotated cap for the (3+1)-interface carrying the points z1, z2, z3.

    Two alpha arcs meet a closed beta triangle; a small bigon cancels z1
    against z3, leaving homology of rank one.
    """
    vertices = {
        "R0", "m1r", "m2r", "m3r", "R4", "H0", "m4r", "H2", "z1", "z2", "z3",
    }
    edges = {
        "o1": Edge("o1", "boundary", None, "R0", "m1r"),
        "o2": Edge("o2", "boundary", None, "m1r", "m2r"),
        "o3": Edge("o3", "boundary", None, "m2r", "m3r"),
        "o4": Edge("o4", "boundary", None, "m3r", "R4"),
        "os": Edge("os", "boundary", None, "R4", "R0"),
        "h1e": Edge("h1e", "boundary", None, "H0", "m4r"),
        "h2e": Edge("h2e", "boundary", None, "m4r", "H2"),
        "hs": Edge("hs", "boundary", None, "H2", "H0"),
        "a2r1": Edge("a2r1", "alpha", "A2R", "m1r", "z3"),
        "a2r2": Edge("a2r2", "alpha", "A2R", "z3", "z1"),
        "a2r3": Edge("a2r3", "alpha", "A2R", "z1", "m3r"),
        "a1r1": Edge("a1r1", "alpha", "A1R", "m2r", "z2"),
        "a1r2": Edge("a1r2", "alpha", "A1R", "z2", "m4r"),
        "br1": Edge("br1", "beta", "BR", "z1", "z3"),
        "br2": Edge("br2", "beta", "BR", "z3", "z2"),
        "br3": Edge("br3", "beta", "BR", "z2", "z1"),
    }
    faces = {
        "CAP": Face("CAP", [("a2r2", 1), ("br1", 1)], False),
        "QA": Face("QA", [("o3", 1), ("a2r3", -1), ("br3", -1), ("a1r1", -1)], False),
        "QB": Face("QB", [("o2", 1), ("a1r1", 1), ("br2", -1), ("a2r1", -1)], False),
        "QD": Face(
            "QD",
            [("o4", 1), ("os", 1), ("o1", 1), ("a2r1", 1), ("br1", -1), ("a2r3", 1)],
            True,
        ),
        "F3": Face(
            "F3",
            [("a2r2", -1), ("br2", 1), ("a1r2", 1), ("h2e", 1),
             ("hs", 1), ("h1e", 1), ("a1r2", -1), ("br3", 1)],
            True,
        ),
    }
    itf = Interface(
        ArcDiagram(
            [["r1", "r2", "r3"], ["r4"]],
            {"r1": 2, "r2": 1, "r3": 2, "r4": 1},
            "alpha",
        ),
        [["o1", "o2", "o3", "o4"], ["h1e", "h2e"]],
        {2: "A2R", 1: "A1R"},
    )
    return Diagram(
        vertices,
        edges,
        faces,
        {"A2R": Curve("A2R", False, ["a2r1", "a2r2", "a2r3"]),
         "A1R": Curve("A1R", False, ["a1r1", "a1r2"])},
        {"BR": Curve("BR", True, ["br1", "br2", "br3"])},
        [itf],
        marks={z: z for z in ("z1", "z2", "z3")},
    )


def mirror(d: Diagram) -> Diagram:
    """Swap the two curve families everywhere (edges, curves, interfaces)."""
    out = d.copy()
    for ed in out.edges.values():
        if ed.kind == "alpha":
            ed.kind = "beta"
        elif ed.kind == "beta":
            ed.kind = "alpha"
    out.alpha_curves, out.beta_curves = out.beta_curves, out.alpha_curves
    out.interfaces = [
        Interface(i.arc_diagram.mirrored(), [list(iv) for iv in i.intervals], dict(i.arcs))
        for i in out.interfaces
    ]
    return out


def handle1() -> Diagram:
    """Closed result of capping the cut-open stabilized disk."""
    return concatenate_bordered(u1(), mirror(cap1()))


def handle2() -> Diagram:
    """Closed result of capping the bypass block."""
    return concatenate_bordered(u2(), mirror(cap2()))


_BUILDERS = {
    "disk": disk,
    "stab": stab,
    "bigonpair": bigonpair,
    "az1": az1,
    "az2": az2,
    "cap1": cap1,
    "cap2": cap2,
    "u1": u1,
    "u2": u2,
    "rt2": rt2,
    "handle1": handle1,
    "handle2": handle2,
}

_ALIASES = {
    "handle1_uw": "handle1",
    "handle2_uw": "handle2",
    "fix-disk": "disk",
    "fix-stab": "stab",
    "fix-bigonpair": "bigonpair",
}


def catalog() -> list:
    """Names of the built-in pieces, sorted."""
    return sorted(_BUILDERS)


def build(kind: str) -> Diagram:
    """Construct a built-in piece by name."""
    key = kind.lower().replace(" ", "")
    key = _ALIASES.get(key, key)
    if key not in _BUILDERS:
        raise KeyError(f"unknown piece {kind!r}; choose from {', '.join(catalog())}")
    return _BUILDERS[key]()
