import random

from hypothesis import given, settings
from hypothesis import strategies as st

from knotparity.diagrams import parse_free_code
from knotparity.gf2 import rank as gf2_rank
from knotparity.parity import AbelianGroup, ParityAssignment, gaussian_parity
from knotparity.snf import abelian_quotient, smith_normal_form
from knotparity.universal import (
    collect_relations,
    explore,
    factor_check,
    local_universal_group,
    region_assignments,
)


# -- smith normal form -------------------------------------------------------------


def test_snf_frozen_cases():
    assert abelian_quotient([], 3).free_rank == 3
    q = abelian_quotient([[1, 1]], 2)
    assert q.torsion == () and q.free_rank == 1
    # g0 = -g1 in the quotient
    assert q.generator_images[0] == tuple(-x for x in q.generator_images[1])
    assert abelian_quotient([[2, 0], [0, 3]], 2).torsion == (6,)
    assert abelian_quotient([[2, 0], [0, 2]], 2).torsion == (2, 2)


def test_snf_divisibility_chain():
    d, _ = smith_normal_form([[4, 6], [6, 4]])
    for a, b in zip(d, d[1:]):
        assert b % a == 0


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=0, max_size=4
    )
)
def test_snf_mod2_rank_oracle(rows):
    # naive mod-2 rank computation cross-checks the smith form: the Z2
    # dimension of the quotient equals generators minus mod-2 rank
    q = abelian_quotient(rows, 3)
    masks = []
    for r in rows:
        masks.append(sum((v % 2) << i for i, v in enumerate(r)))
    dim_z2 = 3 - gf2_rank(masks)
    snf_dim = q.free_rank + sum(1 for t in q.torsion if t % 2 == 0)
    assert snf_dim == dim_z2


def test_relations_map_to_zero_in_presentation():
    rows = [[1, 1, 0], [0, 1, 1]]
    q = abelian_quotient(rows, 3)
    for row in rows:
        total = None
        for j, coeff in enumerate(row):
            img = q.generator_images[j]
            scaled = tuple(coeff * x for x in img)
            total = scaled if total is None else tuple(a + b for a, b in zip(total, scaled))
        k = len(q.torsion)
        assert all(total[i] % q.torsion[i] == 0 for i in range(k))
        assert all(v == 0 for v in total[k:])


# -- regions -----------------------------------------------------------------------


def test_explore_trivial_region():
    region = explore(parse_free_code(""), 0, 4)
    assert len(region.nodes) == 1
    rs = collect_relations(region)
    assert rs.generator_count == 0 and rs.rows == []


def test_explore_contains_unknot():
    region = explore(parse_free_code("1 1"), 1, 3)
    keys = {node.diagram.word for node in region.nodes}
    assert () in keys
    region = explore(parse_free_code("1 2 1 2"), 1, 4)
    keys = {node.diagram.word for node in region.nodes}
    assert () in keys


def test_pair_relation_collected():
    region = explore(parse_free_code("1 2 1 2"), 1, 4)
    rs = collect_relations(region)
    # the cancelling pair's relation, with classes counted by multiplicity
    want = {}
    for v in (0, 1):
        cls = rs.class_of[(0, v)]
        want[cls] = want.get(cls, 0) + 1
    assert any(row == want for row in rs.rows)


def test_triple_relation_collected():
    region = explore(parse_free_code("1 2 2 3 3 1"), 1, 6)
    rs = collect_relations(region)
    seed_classes = {rs.class_of[(0, v)] for v in (0, 1, 2)}
    assert any(set(row) == seed_classes for row in rs.rows)


def test_factor_check_gaussian_passes():
    for code in ("1 1", "1 2 1 2", "1 2 2 3 3 1"):
        region = explore(parse_free_code(code), 2, 5)
        rs = collect_relations(region)
        fc = factor_check(rs, region_assignments(region, gaussian_parity))
        assert fc.ok


def test_factor_check_flags_fake_parity():
    region = explore(parse_free_code("1 2 2 3 3 1"), 1, 6)
    rs = collect_relations(region)
    fake = region_assignments(
        region,
        lambda d: ParityAssignment(
            AbelianGroup.z2(), {v: 1 for v in d.vertex_ids}, d
        ),
    )
    fc = factor_check(rs, fake)
    assert not fc.ok
    assert any(v.rule == "relation_R3" for v in fc.violations)


def test_presentation_mod2_crosscheck():
    region = explore(parse_free_code("1 2 1 2"), 2, 4)
    rs = collect_relations(region)
    pres = local_universal_group(rs, region)
    masks = []
    for row in rs.rows:
        masks.append(sum((c % 2) << cls for cls, c in row.items()))
    dim_z2 = rs.generator_count - gf2_rank(masks)
    snf_dim = pres.free_rank + sum(1 for t in pres.invariant_factors if t % 2 == 0)
    assert snf_dim == dim_z2


def test_presentation_reports_provenance():
    region = explore(parse_free_code("1 1"), 1, 3)
    rs = collect_relations(region)
    pres = local_universal_group(rs, region)
    data = pres.to_json()
    assert data["radius"] == 1 and data["cap"] == 3
    assert "truncated" in data


def test_region_dedup_soundness():
    region = explore(parse_free_code("1 2 1 2"), 2, 5)
    seen = {}
    for node in region.nodes:
        key = node.diagram.canonical_key()
        assert key not in seen
        seen[key] = node
        assert node.diagram.word == node.diagram.base.canonical_form().word
