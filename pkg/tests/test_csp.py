import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cda_mask, kb_path, roa_mask

from ccoa.algebra import UNIVERSAL
from ccoa.csp import (
    assert_cda,
    assert_roa,
    csp_from_components,
    initial_ternary,
    new_csp,
    project_cda,
    project_roa,
    tensor_index,
)
from ccoa.geometry import roa_of
from ccoa.kb import build_csp, parse_kb


def test_single_variable_initialization():
    csp = new_csp(["a"])
    assert csp.b.get(0, 0) == cda_mask("Eq")
    assert csp.t.get(0, 0, 0) == roa_mask("de")


def test_two_variable_initialization():
    csp = new_csp(["a", "b"])
    assert csp.b.get(0, 1) == UNIVERSAL
    assert csp.t.get(0, 0, 1) == roa_mask("de", "dd")
    assert csp.t.get(0, 1, 0) == roa_mask("de", "cp")
    assert csp.t.get(0, 1, 1) == roa_mask("de", "cr")
    assert csp.closure_violations() == []


def test_degenerate_initialization_matches_geometry():
    # Enumerate the atoms each repeated-index pattern can realize.
    span = range(-2, 3)
    pts = [(x, y) for x in span for y in span]
    seen = {"iij": 0, "iji": 0, "ijj": 0, "iii": 0}
    for p in pts:
        seen["iii"] |= 1 << roa_of(p, p, p)
        for q in pts:
            seen["iij"] |= 1 << roa_of(p, p, q)
            seen["iji"] |= 1 << roa_of(p, q, p)
            seen["ijj"] |= 1 << roa_of(p, q, q)
    assert seen["iii"] == initial_ternary(0, 0, 0)
    assert seen["iij"] == initial_ternary(0, 0, 1)
    assert seen["iji"] == initial_ternary(0, 1, 0)
    assert seen["ijj"] == initial_ternary(0, 1, 1)


def test_new_csp_rejects_bad_names():
    with pytest.raises(ValueError, match="duplicate"):
        new_csp(["a", "a"])
    with pytest.raises(ValueError):
        new_csp([])


def test_assert_cda_maintains_converse():
    csp = new_csp(["h", "p"])
    assert assert_cda(csp, 0, 1, cda_mask("No"))
    assert csp.b.get(1, 0) == cda_mask("So")


def test_assert_roa_maintains_all_permutations():
    csp = new_csp(["h", "p", "b"])
    assert assert_roa(csp, 0, 1, 2, roa_mask("lr"))
    assert csp.t.get(0, 1, 2) == roa_mask("lr")
    assert csp.t.get(0, 2, 1) == roa_mask("rr")  # converse
    assert csp.t.get(1, 2, 0) == roa_mask("lr")  # rotation
    assert csp.t.get(1, 0, 2) == roa_mask("rr")
    assert csp.t.get(2, 0, 1) == roa_mask("lr")
    assert csp.t.get(2, 1, 0) == roa_mask("rr")
    assert csp.closure_violations() == []


def test_disjoint_asserts_flag_empty_cells():
    csp = new_csp(["a", "b"])
    assert assert_cda(csp, 0, 1, cda_mask("No"))
    assert not assert_cda(csp, 0, 1, cda_mask("So"))
    assert csp.b.get(0, 1) == 0


def test_assert_index_errors():
    csp = new_csp(["a", "b"])
    with pytest.raises(IndexError):
        assert_cda(csp, 0, 2, UNIVERSAL)
    with pytest.raises(IndexError):
        assert_roa(csp, 0, 1, 5, UNIVERSAL)


def test_assert_roa_with_repeated_indices():
    csp = new_csp(["a", "b"])
    assert assert_roa(csp, 0, 0, 1, roa_mask("dd"))
    assert csp.t.get(0, 0, 1) == roa_mask("dd")
    assert csp.t.get(0, 1, 0) == roa_mask("cp")
    assert csp.t.get(1, 0, 0) == roa_mask("cr")
    assert csp.closure_violations() == []
    assert not assert_roa(csp, 0, 0, 1, roa_mask("de"))


def test_projections_are_deep_copies():
    csp, _ = build_csp(parse_kb(open(kb_path("example1.kb")).read()))
    b = project_cda(csp)
    t = project_roa(csp)
    n = csp.n
    non_universal = sum(
        1 for i in range(n) for j in range(i + 1, n) if b.cells[i * n + j] != UNIVERSAL
    )
    assert non_universal == 3
    b.cells[1] = 0
    t.cells[0] = 0
    assert csp.b.cells[1] != 0 and csp.t.cells[0] != 0


def test_projection_roundtrip_through_components():
    csp, _ = build_csp(parse_kb(open(kb_path("example1.kb")).read()))
    rebuilt = csp_from_components(csp.variables, b=project_cda(csp), t=project_roa(csp))
    assert rebuilt == csp
    cda_only = csp_from_components(csp.variables, b=project_cda(csp))
    assert cda_only.t == new_csp(csp.variables).t


def test_assert_roa_leaves_cda_component_alone():
    csp = new_csp(["a", "b", "c"])
    assert_roa(csp, 0, 1, 2, roa_mask("lr"))
    assert csp.b == new_csp(["a", "b", "c"]).b


_actions = st.lists(
    st.one_of(
        st.tuples(
            st.just("cda"),
            st.integers(0, 3),
            st.integers(0, 3),
            st.integers(1, 511),
        ),
        st.tuples(
            st.just("roa"),
            st.integers(0, 3),
            st.integers(0, 3),
            st.integers(0, 3),
            st.integers(1, 511),
        ),
    ),
    max_size=12,
)


def _apply(csp, action):
    if action[0] == "cda":
        assert_cda(csp, action[1], action[2], action[3])
    else:
        assert_roa(csp, action[1], action[2], action[3], action[4])


@given(_actions)
@settings(max_examples=60, deadline=None)
def test_assert_sequences_keep_closure_and_shrink(actions):
    csp = new_csp(["a", "b", "c", "d"])
    previous = csp.copy()
    for action in actions:
        _apply(csp, action)
        assert csp.refines(previous)
        previous = csp.copy()
    assert csp.closure_violations() == []


@given(_actions, st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_assert_order_does_not_matter(actions, rng):
    left = new_csp(["a", "b", "c", "d"])
    for action in actions:
        _apply(left, action)
    right = new_csp(["a", "b", "c", "d"])
    shuffled = list(actions)
    rng.shuffle(shuffled)
    for action in shuffled:
        _apply(right, action)
    assert left == right


def test_tensor_index_layout():
    assert tensor_index(3, 0, 0, 0) == 0
    assert tensor_index(3, 1, 2, 0) == 15
    assert tensor_index(3, 2, 2, 2) == 26
