"""Hand-built adversarial diagrams shared across test modules.

These are the counterexamples: diagrams that are valid as polygonal
complexes but fail niceness or admissibility in a controlled way, plus
a disjoint-union helper for product-structure checks.
"""

from sutured import surface
from sutured.surface import Curve, Diagram, Edge, Face


def annular_trap() -> Diagram:
    """An annulus trapping parallel alpha and beta circles that never meet.

    Three concentric bands: suture F1 (outer boundary to the alpha
    circle), F2 between the two circles, suture F3 down to the other
    boundary.  F2 is a closed annular region with no crossings, so the
    diagram has no generators, fails the niceness census at F2, and F2
    alone is a positive domain with constant curve multiplicity.
    """
    edges = {
        "st": Edge("st", "boundary", None, "wt", "wt"),
        "sb": Edge("sb", "boundary", None, "wb", "wb"),
        "al": Edge("al", "alpha", "A", "va", "va"),
        "bl": Edge("bl", "beta", "B", "vb", "vb"),
        "c1": Edge("c1", "seam", None, "wt", "va"),
        "c2": Edge("c2", "seam", None, "va", "vb"),
        "c3": Edge("c3", "seam", None, "vb", "wb"),
    }
    faces = {
        "F1": Face("F1", [("c1", 1), ("al", 1), ("c1", -1), ("st", 1)], True),
        "F2": Face("F2", [("c2", 1), ("bl", 1), ("c2", -1), ("al", -1)], False),
        "F3": Face("F3", [("c3", 1), ("sb", 1), ("c3", -1), ("bl", -1)], True),
    }
    return Diagram(
        {"va", "vb", "wt", "wb"},
        edges,
        faces,
        {"A": Curve("A", True, ["al"])},
        {"B": Curve("B", True, ["bl"])},
        [],
    )


def hexagram() -> Diagram:
    """A disk with two triangles (one per family) crossing in six points.

    The central hexagon HEX alternates six alpha/beta sides and is the
    lone census offender; the six petals are honest bigons; the outer
    face carries the suture.  Inadmissible: doubling HEX and adding all
    petals gives a positive domain with constant curve multiplicity.
    """
    # alpha triangle cA1 -> cA2 -> cA3, beta triangle cB1 -> cB2 -> cB3,
    # crossing at h1..h6 in outline order cA1 h1 cB1 h2 cA2 h3 cB2 ...
    edges = {
        "a1s1": Edge("a1s1", "alpha", "A", "cA1", "h1"),
        "a1m": Edge("a1m", "alpha", "A", "h1", "h2"),
        "a1s2": Edge("a1s2", "alpha", "A", "h2", "cA2"),
        "a2s1": Edge("a2s1", "alpha", "A", "cA2", "h3"),
        "a2m": Edge("a2m", "alpha", "A", "h3", "h4"),
        "a2s2": Edge("a2s2", "alpha", "A", "h4", "cA3"),
        "a3s1": Edge("a3s1", "alpha", "A", "cA3", "h5"),
        "a3m": Edge("a3m", "alpha", "A", "h5", "h6"),
        "a3s2": Edge("a3s2", "alpha", "A", "h6", "cA1"),
        "b1s1": Edge("b1s1", "beta", "B", "cB1", "h2"),
        "b1m": Edge("b1m", "beta", "B", "h2", "h3"),
        "b1s2": Edge("b1s2", "beta", "B", "h3", "cB2"),
        "b2s1": Edge("b2s1", "beta", "B", "cB2", "h4"),
        "b2m": Edge("b2m", "beta", "B", "h4", "h5"),
        "b2s2": Edge("b2s2", "beta", "B", "h5", "cB3"),
        "b3s1": Edge("b3s1", "beta", "B", "cB3", "h6"),
        "b3m": Edge("b3m", "beta", "B", "h6", "h1"),
        "b3s2": Edge("b3s2", "beta", "B", "h1", "cB1"),
        "sm": Edge("sm", "seam", None, "cA2", "vh"),
        "hl": Edge("hl", "boundary", None, "vh", "vh"),
    }
    faces = {
        "HEX": Face(
            "HEX",
            [("a1m", 1), ("b1m", 1), ("a2m", 1),
             ("b2m", 1), ("a3m", 1), ("b3m", 1)],
            False,
        ),
        "PA1": Face("PA1", [("a3s2", 1), ("a1s1", 1), ("b3m", -1)], False),
        "PA2": Face("PA2", [("a1s2", 1), ("a2s1", 1), ("b1m", -1)], False),
        "PA3": Face("PA3", [("a2s2", 1), ("a3s1", 1), ("b2m", -1)], False),
        "PB1": Face("PB1", [("b3s2", 1), ("b1s1", 1), ("a1m", -1)], False),
        "PB2": Face("PB2", [("b1s2", 1), ("b2s1", 1), ("a2m", -1)], False),
        "PB3": Face("PB3", [("b2s2", 1), ("b3s1", 1), ("a3m", -1)], False),
        "OUTER": Face(
            "OUTER",
            [("sm", 1), ("hl", 1), ("sm", -1),
             ("a1s2", -1), ("b1s1", -1), ("b3s2", -1), ("a1s1", -1),
             ("a3s2", -1), ("b3s1", -1), ("b2s2", -1), ("a3s1", -1),
             ("a2s2", -1), ("b2s1", -1), ("b1s2", -1), ("a2s1", -1)],
            True,
        ),
    }
    alpha = Curve(
        "A", True,
        ["a1s1", "a1m", "a1s2", "a2s1", "a2m", "a2s2", "a3s1", "a3m", "a3s2"],
    )
    beta = Curve(
        "B", True,
        ["b1s1", "b1m", "b1s2", "b2s1", "b2m", "b2s2", "b3s1", "b3m", "b3s2"],
    )
    return Diagram(
        {"cA1", "cA2", "cA3", "cB1", "cB2", "cB3",
         "h1", "h2", "h3", "h4", "h5", "h6", "vh"},
        edges,
        faces,
        {"A": alpha},
        {"B": beta},
        [],
    )


def grid_torus() -> Diagram:
    """A once-punctured torus with two parallel circles per family.

    The four crossings cut the torus into four squares; the puncture
    sits in Q4.  Every non-suture region is a rectangle, so the diagram
    is nice, yet the column of squares missing the puncture is a
    positive domain with constant curve multiplicity: the canonical
    nice-but-inadmissible example.
    """
    edges = {
        "a1A": Edge("a1A", "alpha", "A1", "g11", "g12"),
        "a1B": Edge("a1B", "alpha", "A1", "g12", "g11"),
        "a2A": Edge("a2A", "alpha", "A2", "g21", "g22"),
        "a2B": Edge("a2B", "alpha", "A2", "g22", "g21"),
        "b1A": Edge("b1A", "beta", "B1", "g11", "g21"),
        "b1B": Edge("b1B", "beta", "B1", "g21", "g11"),
        "b2A": Edge("b2A", "beta", "B2", "g12", "g22"),
        "b2B": Edge("b2B", "beta", "B2", "g22", "g12"),
        "sp": Edge("sp", "seam", None, "g22", "vp"),
        "hp": Edge("hp", "boundary", None, "vp", "vp"),
    }
    faces = {
        "Q1": Face("Q1", [("b1A", 1), ("a2A", 1), ("b2A", -1), ("a1A", -1)], False),
        "Q2": Face("Q2", [("b1B", 1), ("a1A", 1), ("b2B", -1), ("a2A", -1)], False),
        "Q3": Face("Q3", [("b2A", 1), ("a2B", 1), ("b1A", -1), ("a1B", -1)], False),
        "Q4": Face(
            "Q4",
            [("sp", 1), ("hp", 1), ("sp", -1),
             ("b2B", 1), ("a1B", 1), ("b1B", -1), ("a2B", -1)],
            True,
        ),
    }
    return Diagram(
        {"g11", "g12", "g21", "g22", "vp"},
        edges,
        faces,
        {"A1": Curve("A1", True, ["a1A", "a1B"]),
         "A2": Curve("A2", True, ["a2A", "a2B"])},
        {"B1": Curve("B1", True, ["b1A", "b1B"]),
         "B2": Curve("B2", True, ["b2A", "b2B"])},
        [],
    )


def disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    """Both diagrams side by side, ids prefixed to stay distinct."""
    left = surface._prefix_diagram(d1, "L:")
    right = surface._prefix_diagram(d2, "R:")
    out = left.copy()
    out.vertices |= right.vertices
    out.edges.update(right.edges)
    out.faces.update(right.faces)
    out.alpha_curves.update(right.alpha_curves)
    out.beta_curves.update(right.beta_curves)
    out.interfaces = left.interfaces + right.interfaces
    out.eh = left.eh + right.eh
    out.marks = {**left.marks, **right.marks}
    return out
