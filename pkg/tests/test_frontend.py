import pytest

from zkmc.benchmarks import exb, handshake_symbolic, handshake_symbolic_text, never_wait_forever, scaled_handshake_text
from zkmc.lang import ParseError, parse, parse_explicit, print_explicit, print_unit
from zkmc.model import (INF, ExplicitRanking, ExplicitSystem, Letter, check_ranking_explicit, check_wellformedness,
                        letter_at, sigma_to_polyhedron, v_le, v_lt)
from zkmc.obligations import count, count_uniform, generate
from zkmc.oracle import canonical_ranking, fair_cycle_exists, fair_lasso_bounded, ground, point_of


def test_inf_order():
    assert v_lt(3, INF) and not v_lt(INF, INF) and not v_lt(INF, 3)
    assert v_le(INF, INF) and v_le(3, 3) and not v_le(INF, 3)


def test_handshake_parses_and_counts():
    sys_, spec, rk = handshake_symbolic()
    assert [v.name for v in sys_.vars] == ["loc", "done", "delay"]
    assert len(sys_.commands) == 6
    assert check_wellformedness(rk, spec).ok
    total, kinds = count(spec, rk, sys_)
    assert (total, kinds) == (193, {"init": 1, "finiteness": 54, "rank": 138})
    assert len(generate(sys_, spec, rk)) == total


def test_closed_form_uniform():
    # with per-state m and l equal, the per-state sum is the closed form
    spec = never_wait_forever()
    assert count_uniform(1, 1, 6, 3, len(spec.expanded())) == 1 + 6 * 3 * 1 * 4 + 6 * 9 * 4


def test_print_parse_roundtrip():
    u = parse(handshake_symbolic_text())
    again = parse(print_unit(u))
    assert again.triple() == u.triple()


def test_scaled_text_changes_only_range():
    u6, u10 = parse(scaled_handshake_text(6)), parse(scaled_handshake_text(10))
    assert u6.system.vars[2].hi == 64 and u10.system.vars[2].hi == 1024
    assert u6.system.commands == u10.system.commands


@pytest.mark.parametrize("text,needle", [
    ("system { var x : 0..3 var y : 0..1; }", "expected ';'"),
    ("system { var x : 3..0; }", "empty range"),
    ("system { var x : 0..3; var x : 0..1; }", "duplicate variable"),
    ("system { var x : 0..3; init: z = 1; }", "unknown variable"),
])
def test_diagnostics_have_positions(text, needle):
    with pytest.raises(ParseError) as ei:
        parse(text)
    d = ei.value.diagnostics[0]
    assert d.line == 1 and d.col > 0
    assert needle in str(d)


def test_bundled_small_model_matches_generator():
    from zkmc.benchmarks import handshake_small
    assert handshake_small() == exb(1, 2)


def test_explicit_json_roundtrip_and_public_only():
    sys_, spec, V = exb(1, 2)
    text = print_explicit(sys_, spec, V)
    u = parse_explicit(text)
    assert u.triple() == (sys_, spec, V)
    pub = parse_explicit(print_explicit(sys_, spec, V, public_only=True), public_only=True)
    assert pub.system.init == frozenset() and pub.system.transitions == frozenset()
    assert pub.system.labels == sys_.labels


def test_letter_polyhedron_agree():
    sys_, spec, _ = handshake_symbolic()
    for loc in range(4):
        x = (loc, 0, 5)
        s = letter_at(spec, x)
        assert sigma_to_polyhedron(spec, s, 3).holds(x)
        other = Letter() if s else Letter({"wait"})
        assert not sigma_to_polyhedron(spec, other, 3).holds(x)


def test_exb_certificates_hold_and_oracle_agrees():
    for d, a in [(1, 2), (1, 3)]:
        sys_, spec, V = exb(d, a)
        assert check_ranking_explicit(sys_, spec, V).ok
        assert not fair_cycle_exists(sys_, spec)


def test_broken_ranking_reports_each_condition():
    sys_, spec, V = exb(1, 2)
    rows = [list(r) for r in V.values]
    init = next(iter(sys_.init))
    rows[init][0] = INF
    rep = check_ranking_explicit(sys_, spec, ExplicitRanking(V.qnames, tuple(map(tuple, rows))))
    assert not rep.ok and {c for c, _ in rep.violations} >= {"init"}
    flat = ExplicitRanking.constant(sys_.size, spec.states, 0)
    rep = check_ranking_explicit(sys_, spec, flat)
    assert "fair" in {c for c, _ in rep.violations}


def test_oracle_on_tiny_systems():
    spec = never_wait_forever()
    W, N = Letter({"wait"}), Letter()
    loop = ExplicitSystem(("a",), frozenset({0}), frozenset({(0, 0)}), (W,))
    assert fair_cycle_exists(loop, spec) and fair_lasso_bounded(loop, spec, 4)
    assert canonical_ranking(loop, spec) is None
    escape = ExplicitSystem(("a", "b"), frozenset({0}), frozenset({(0, 1), (1, 1)}), (W, N))
    assert not fair_cycle_exists(escape, spec) and not fair_lasso_bounded(escape, spec, 4)
    V = canonical_ranking(escape, spec)
    assert check_ranking_explicit(escape, spec, V).ok


def test_grounding_small_symbolic():
    text = """system {
  var x : 0..3;
  init: x = 3;
  command dec: guard x >= 1 update x' = x - 1;
  command stay: guard x <= 0 update x' = x;
}
automaton {
  states: q0, q1;
  initial: q0;
  aps:
    p := x >= 1;
  trans:
    q0 -- true --> q0;
    q0 -- {p} --> q1;
    q1 -- {p} --> q1 fair;
}
ranking {
  at q0:
    case x >= 0 -> 4;
    case x <= -1 -> 4;
  at q1:
    case x >= 1 -> x;
    case x <= 0 -> 0;
}
"""
    u = parse(text)
    g = ground(u.system, u.spec)
    assert g.size == 4
    assert point_of(u.system, g.states[0]) is not None
    assert not fair_cycle_exists(g, u.spec)
    assert check_wellformedness(u.ranking, u.spec).ok
