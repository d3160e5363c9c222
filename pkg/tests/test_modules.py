"""Bordered structures of the catalog pieces: frozen action tables,
duality against the strands algebra, structure relations, dualization,
and the box tensor product against actual gluings."""

import copy

import pytest

from sutured import modules, pieces, sfc, strands
from sutured.surface import concatenate_bordered_record


def az2_sector():
    return modules.bordered_invariant(pieces.az2(), "AA", sector=(1, 1))


def name(x):
    return modules.format_generator(x)


# generator tag -> the algebra basis element it is dual to
DUAL_TAGS = {
    "∅": "ι∅",
    "{z1}": "ρ12",
    "{z2}": "ρ1",
    "{z3}": "ι2",
    "{z4}": "ρ2",
    "{z5}": "ι1",
    "{z1,z5}": "ρ12|ι1",
    "{z2,z4}": "ρ1|ρ2",
    "{z3,z5}": "ι12",
}


# ---------------------------------------------------------------------------
# the AZ bimodule


def test_az2_sector_has_five_generators():
    bs = az2_sector()
    assert bs.generator_names() == ["{z1}", "{z2}", "{z3}", "{z4}", "{z5}"]
    assert bs.kind == "AA"
    assert [s.family for s in bs.sides] == ["beta", "alpha"]


def test_az2_sector_idempotents():
    bs = az2_sector()
    left = {name(x): strands.label(modules.idempotent_of(bs, x, 0)) for x in bs.generators}
    right = {name(x): strands.label(modules.idempotent_of(bs, x, 1)) for x in bs.generators}
    assert left == {"{z1}": "ι2", "{z2}": "ι2", "{z3}": "ι2", "{z4}": "ι1", "{z5}": "ι1"}
    assert right == {"{z1}": "ι2", "{z2}": "ι1", "{z3}": "ι2", "{z4}": "ι2", "{z5}": "ι1"}


def test_az2_sector_action_table_golden():
    assert modules.dump(az2_sector()) == "\n".join(
        [
            "m[1|1|0](ι1, {z4}) = {z4}",
            "m[1|1|0](ι1, {z5}) = {z5}",
            "m[1|1|0](ι2, {z1}) = {z1}",
            "m[1|1|0](ι2, {z2}) = {z2}",
            "m[1|1|0](ι2, {z3}) = {z3}",
            "m[1|1|0](ρ1, {z1}) = {z4}",
            "m[1|1|0](ρ1, {z2}) = {z5}",
            "m[1|1|0](ρ12, {z1}) = {z3}",
            "m[1|1|0](ρ2, {z4}) = {z3}",
            "m[0|1|1]({z2}, ι1) = {z2}",
            "m[0|1|1]({z5}, ι1) = {z5}",
            "m[0|1|1]({z1}, ι2) = {z1}",
            "m[0|1|1]({z3}, ι2) = {z3}",
            "m[0|1|1]({z4}, ι2) = {z4}",
            "m[0|1|1]({z2}, ρ1) = {z3}",
            "m[0|1|1]({z1}, ρ12) = {z3}",
            "m[0|1|1]({z1}, ρ2) = {z2}",
            "m[0|1|1]({z4}, ρ2) = {z5}",
        ]
    )


def test_az2_sector_has_no_differential():
    assert az2_sector().differential == {}


def test_az2_three_face_strip_carries_no_action():
    # D1 ∪ D3 ∪ D4 looks like a chord domain but is not embedded as one
    bs = az2_sector()
    records = sfc.action_census(pieces.az2())
    assert not any(set(r.faces) == {"D1", "D3", "D4"} for r in records)
    rho12 = modules.algebra_basis(bs, 0)["ρ12"]
    z2 = next(x for x in bs.generators if name(x) == "{z2}")
    assert modules.act(bs, 0, rho12, z2) == frozenset()


def test_az2_full_module_generators_and_differential():
    bs = modules.bordered_invariant(pieces.az2(), "AA")
    assert bs.generator_names() == [
        "∅", "{z1}", "{z1,z5}", "{z2}", "{z2,z4}",
        "{z3}", "{z3,z5}", "{z4}", "{z5}",
    ]
    diff = {
        name(x): {name(y) for y in ys} for x, ys in bs.differential.items()
    }
    assert diff == {"{z2,z4}": {"{z1,z5}"}}
    assert modules.dump(bs).splitlines()[0] == "m[0|1|0]({z2,z4}) = {z1,z5}"


def _duality_check(bs, tags):
    """The actions agree with right/left multiplication on dual labels:
    a·b∨ = Σ_c [b ∈ a·c] c∨  and  b∨·a = Σ_c [b ∈ c·a] c∨."""
    basis_l = modules.algebra_basis(bs, 0)
    basis_r = modules.algebra_basis(bs, 1)
    for x in bs.generators:
        b_left = next(iter(basis_l[tags[name(x)]].terms))
        b_right = next(iter(basis_r[tags[name(x)]].terms))
        for a in basis_l.values():
            got = {name(y) for y in modules.act(bs, 0, a, x)}
            want = {
                nm
                for nm, t in tags.items()
                if b_left in strands.multiply(a, basis_l[t]).terms
            }
            assert got == want
        for a in basis_r.values():
            got = {name(y) for y in modules.act(bs, 1, a, x)}
            want = {
                nm
                for nm, t in tags.items()
                if b_right in strands.multiply(basis_r[t], a).terms
            }
            assert got == want


def test_az2_sector_is_dual_to_the_one_strand_summand():
    tags = {k: v for k, v in DUAL_TAGS.items() if k in
            {"{z1}", "{z2}", "{z3}", "{z4}", "{z5}"}}
    _duality_check(az2_sector(), tags)


def test_az2_full_module_is_dual_to_the_whole_algebra():
    _duality_check(modules.bordered_invariant(pieces.az2(), "AA"), DUAL_TAGS)


# ---------------------------------------------------------------------------
# the small pieces


def test_unknot_and_cap_pieces_are_elementary():
    for build, kind, gens in [
        (pieces.u1, "A", ["{e}"]),
        (pieces.u2, "A", ["{c}"]),
        (pieces.cap1, "A", ["∅"]),
        (pieces.cap2, "D", ["{w}"]),
    ]:
        bs = modules.bordered_invariant(build(), kind)
        assert bs.generator_names() == gens
        assert modules.is_elementary(bs)
        assert modules.check_relations(bs)["ok"]
    assert modules.bordered_invariant(pieces.cap2(), "D").delta == {}


def test_twist_piece_is_not_elementary():
    assert not modules.is_elementary(modules.bordered_invariant(pieces.rt2(), "A"))
    assert not modules.is_elementary(modules.bordered_invariant(pieces.rt2(), "D"))


def test_twist_piece_type_d_golden():
    bs = modules.bordered_invariant(pieces.rt2(), "D")
    assert modules.dump(bs) == (
        "δ¹({z1}) = ι1 ⊗ {z3} + ρ2 ⊗ {z2}\n"
        "δ¹({z2}) = ρ1 ⊗ {z3}"
    )
    z3 = next(x for x in bs.generators if name(x) == "{z3}")
    assert modules.delta1(bs, z3) == frozenset()
    # the ι1 term is the piece's interior differential z1 -> z3
    diff = {name(x): {name(y) for y in ys} for x, ys in bs.differential.items()}
    assert diff == {"{z1}": {"{z3}"}}


def test_twist_piece_idempotents():
    # the type-D side indexes generators by the complementary arcs
    bd = modules.bordered_invariant(pieces.rt2(), "D")
    ba = modules.bordered_invariant(pieces.rt2(), "A")
    d_labels = {name(x): strands.label(modules.idempotent_of(bd, x, 0)) for x in bd.generators}
    a_labels = {name(x): strands.label(modules.idempotent_of(ba, x, 0)) for x in ba.generators}
    assert d_labels == {"{z1}": "ι1", "{z2}": "ι2", "{z3}": "ι1"}
    assert a_labels == {"{z1}": "ι2", "{z2}": "ι1", "{z3}": "ι2"}


# ---------------------------------------------------------------------------
# structure relations


def corpus():
    return [
        az2_sector(),
        modules.bordered_invariant(pieces.az2(), "AA"),
        modules.bordered_invariant(pieces.u1(), "A"),
        modules.bordered_invariant(pieces.u2(), "A"),
        modules.bordered_invariant(pieces.cap1(), "A"),
        modules.bordered_invariant(pieces.rt2(), "A"),
        modules.bordered_invariant(pieces.mirror(pieces.cap1()), "D"),
        modules.bordered_invariant(pieces.cap2(), "D"),
        modules.bordered_invariant(pieces.rt2(), "D"),
    ]


def test_relations_hold_on_the_catalog():
    for bs in corpus():
        report = modules.check_relations(bs)
        assert report == {"ok": True, "violations": []}


def test_relations_detect_a_tampered_action():
    bs = copy.deepcopy(az2_sector())
    z1 = next(x for x in bs.generators if name(x) == "{z1}")
    z5 = next(x for x in bs.generators if name(x) == "{z5}")
    bs.tables[0]["ρ1"][z1] = frozenset({z5})  # should be {z4}
    report = modules.check_relations(bs)
    assert not report["ok"]
    assert any("composition fails" in v for v in report["violations"])


def test_relations_detect_a_tampered_differential():
    bs = copy.deepcopy(modules.bordered_invariant(pieces.az2(), "AA"))
    pair = next(x for x in bs.generators if name(x) == "{z1,z5}")
    empty = next(x for x in bs.generators if name(x) == "∅")
    bs.differential[pair] = frozenset({empty})
    report = modules.check_relations(bs)
    assert any(v == "∂² ≠ 0 at {z2,z4}" for v in report["violations"])


def test_relations_detect_a_tampered_delta():
    bs = copy.deepcopy(modules.bordered_invariant(pieces.rt2(), "D"))
    z1 = next(x for x in bs.generators if name(x) == "{z1}")
    z2 = next(x for x in bs.generators if name(x) == "{z2}")
    bs.delta[z1] = frozenset({("ρ1", z2)})  # wrong chord for the idempotents
    report = modules.check_relations(bs)
    assert not report["ok"]
    assert any("idempotent mismatch" in v for v in report["violations"])


# ---------------------------------------------------------------------------
# dualization


def test_dualize_is_an_involution():
    for bs in [modules.bordered_invariant(pieces.az2(), "AA"),
               modules.bordered_invariant(pieces.rt2(), "D"),
               modules.bordered_invariant(pieces.rt2(), "A")]:
        assert modules.dualize(modules.dualize(bs)) == bs
        assert modules.dualize(bs).dual


def test_dualize_transposes_every_table():
    bs = modules.bordered_invariant(pieces.rt2(), "D")
    dual = modules.dualize(bs)
    diff = {name(x): {name(y) for y in ys} for x, ys in dual.differential.items()}
    assert diff == {"{z3}": {"{z1}"}}
    delta = {
        name(x): {(lab, name(y)) for lab, y in es} for x, es in dual.delta.items()
    }
    assert delta == {
        "{z2}": {("ρ2", "{z1}")},
        "{z3}": {("ι1", "{z1}"), ("ρ1", "{z2}")},
    }
    swapped = modules.dualize(modules.bordered_invariant(pieces.az2(), "AA"))
    assert [s.family for s in swapped.sides] == ["alpha", "beta"]


# ---------------------------------------------------------------------------
# box tensor product


def test_box_tensor_matches_the_one_handle_gluing():
    box = modules.box_tensor(
        modules.bordered_invariant(pieces.u1(), "A"),
        modules.bordered_invariant(pieces.mirror(pieces.cap1()), "D"),
    )
    cx = sfc.differential(pieces.handle1())
    assert box.basis == cx.basis
    assert box.differential.entries == cx.differential.entries
    assert modules.chain_homology_rank(box) == 1


def test_box_tensor_matches_the_two_handle_gluing():
    box = modules.box_tensor(
        modules.bordered_invariant(pieces.u2(), "A"),
        modules.bordered_invariant(pieces.mirror(pieces.cap2()), "D"),
    )
    cx = sfc.differential(pieces.handle2())
    assert box.basis == cx.basis
    assert [sorted(b) for b in box.basis] == [["L:c", "R:w"]]
    assert box.differential.entries == cx.differential.entries
    assert modules.chain_homology_rank(box) == 1


def test_box_tensor_matches_a_gluing_with_a_differential():
    """Capping the unknot piece with the twist piece pairs a delta chord
    against a boundary rectangle; the result must agree with the glued
    diagram map for map, not just in rank."""
    box = modules.box_tensor(
        modules.bordered_invariant(pieces.u2(), "A"),
        modules.bordered_invariant(pieces.mirror(pieces.rt2()), "D"),
    )
    glued, _record = concatenate_bordered_record(
        pieces.u2(), pieces.mirror(pieces.rt2())
    )
    cx = sfc.differential(glued)
    assert [sorted(b) for b in box.basis] == [
        ["L:c", "R:z1"], ["L:c", "R:z3"],
    ]
    assert box.basis == cx.basis
    assert box.differential.entries == cx.differential.entries == frozenset({(0, 1)})
    assert modules.chain_homology_rank(box) == 0
    assert sfc.homology(glued).total == 0
    # ∂² = 0 directly on the box complex
    paths = {
        (r1, c2)
        for (r1, c1) in box.differential.entries
        for (r2, c2) in box.differential.entries
        if c1 == r2
    }
    assert not paths


def test_box_tensor_rejects_bad_inputs():
    a = modules.bordered_invariant(pieces.u2(), "A")
    d = modules.bordered_invariant(pieces.mirror(pieces.cap2()), "D")
    with pytest.raises(ValueError, match="type-A with a type-D"):
        modules.box_tensor(a, a)
    with pytest.raises(ValueError, match="type-A with a type-D"):
        modules.box_tensor(d, d)
    with pytest.raises(ValueError, match="interval shapes"):
        modules.box_tensor(a, modules.bordered_invariant(pieces.mirror(pieces.cap1()), "D"))


# ---------------------------------------------------------------------------
# guards


def test_bordered_invariant_rejects_non_nice_diagrams():
    d = pieces.az2()
    d.faces["Sbig"].suture = False  # a 9-sided region enters the census
    with pytest.raises(ValueError, match="not nice"):
        modules.bordered_invariant(d, "AA")


def test_bordered_invariant_interface_count_guards():
    with pytest.raises(ValueError, match="needs 1 interface"):
        modules.bordered_invariant(pieces.az2(), "D")
    with pytest.raises(ValueError, match="needs 2 interface"):
        modules.bordered_invariant(pieces.u1(), "AA")
    with pytest.raises(ValueError, match="unknown structure kind"):
        modules.bordered_invariant(pieces.u1(), "DD")
    with pytest.raises(ValueError, match="sector length"):
        modules.bordered_invariant(pieces.u1(), "A", sector=(1, 1))


def test_evaluation_guards():
    bd = modules.bordered_invariant(pieces.rt2(), "D")
    ba = modules.bordered_invariant(pieces.rt2(), "A")
    basis = modules.algebra_basis(ba, 0)
    x = ba.generators[0]
    with pytest.raises(ValueError, match="delta1"):
        modules.act(bd, 0, basis["ι1"], x)
    with pytest.raises(ValueError, match="type-D"):
        modules.delta1(ba, x)
    with pytest.raises(ValueError, match="single generators"):
        modules.act(ba, 0, strands.add(basis["ρ1"], basis["ρ2"]), x)
