from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nullcone.exactgeom import dot, hull_certificate, scale
from nullcone.rootsystem import root_datum
from nullcone.strata import (
    BudgetExceeded,
    Candidate,
    EnumOptions,
    TrivialModule,
    analyze,
    enumerate_candidates,
    levi_semistable,
    optimality_filter,
    stratum_of,
)
from nullcone.weightsys import WeightSystem, weyl_dim

from conftest import ws_of


def w1(series="A", rank=1):
    return root_datum(series, rank).fundamental_weights[0]


def cand(ws, lam):
    n2 = dot(lam, lam)
    return Candidate(lam, n2, frozenset(mu for mu in ws.entries if dot(mu, lam) >= n2))


def test_enumerate_a1_w1():
    ws = ws_of("A", 1, (1,))
    assert [c.lam for c in enumerate_candidates(ws)] == [w1()]


def test_enumerate_binary_quartics():
    ws = ws_of("A", 1, (4,))
    got = {c.lam for c in enumerate_candidates(ws)}
    assert got == {scale(4, w1()), scale(2, w1())}
    exhaustive = {c.lam for c in enumerate_candidates(ws, EnumOptions(method="exhaustive"))}
    assert exhaustive == got


def test_zero_weight_never_a_candidate():
    ws = ws_of("A", 2, (1, 1))
    assert all(c.norm2 > 0 for c in enumerate_candidates(ws))


def test_candidates_well_formed():
    ws = ws_of("C", 3, (0, 1, 0))
    d = ws.datum
    for c in enumerate_candidates(ws):
        assert d.is_dominant(c.lam) and c.norm2 > 0 and c.support
        assert c.support == frozenset(mu for mu in ws.entries if dot(mu, c.lam) >= c.norm2)


def test_optimality_filter_examples():
    ws = ws_of("A", 1, (4,))
    assert optimality_filter(ws, cand(ws, scale(2, w1())))
    assert optimality_filter(ws, cand(ws, scale(4, w1())))
    quad = ws_of("A", 1, (2,))
    # {2, 0, -2}: only 2w1 certifies its own support
    assert optimality_filter(quad, cand(quad, scale(2, w1())))
    assert not optimality_filter(quad, cand(quad, w1()))
    assert not optimality_filter(quad, cand(quad, scale(Fraction(1, 2), w1())))


def test_stratum_examples():
    ws = ws_of("A", 1, (4,))
    s = stratum_of(ws, cand(ws, scale(2, w1())))
    assert (s.dim_L, s.dim_flag, s.dim_total) == (2, 1, 3)
    s = stratum_of(ws, cand(ws, scale(4, w1())))
    assert (s.dim_L, s.dim_flag, s.dim_total) == (1, 1, 2)
    lin = ws_of("A", 1, (1,))
    s = stratum_of(lin, cand(lin, w1()))
    assert (s.dim_L, s.dim_flag, s.dim_total) == (1, 1, 2)


@pytest.mark.parametrize("series,rank,coeffs,dim_n,comps", [
    ("A", 1, (4,), 3, 1),
    ("A", 1, (1,), 2, 1),
    ("A", 3, (0, 2, 0), 15, 2),
    ("D", 4, (2, 0, 0, 0), 28, 2),
    ("G", 2, (1, 0), 6, 1),
    ("A", 2, (1, 1), 6, 1),
    ("B", 3, (0, 0, 1), 7, 1),
    ("A", 4, (0, 1, 0, 0), 10, 1),
])
def test_analyze_examples(series, rank, coeffs, dim_n, comps):
    rep = analyze(ws_of(series, rank, coeffs))
    assert (rep.dim_nullcone, rep.num_components) == (dim_n, comps)
    assert rep.dim_nullcone <= rep.dim_module
    assert len(rep.components) == comps


def test_report_invariants():
    ws = ws_of("B", 3, (2, 0, 0))
    rep = analyze(ws)
    d = ws.datum
    keys = [(-s.dim_total, d.fw_coords(s.candidate.lam)) for s in rep.strata]
    assert keys == sorted(keys)
    for s in rep.strata:
        c = s.candidate
        assert d.is_dominant(c.lam) and c.norm2 > 0
        assert hull_certificate(c.lam, list(c.support))
        assert optimality_filter(ws, c)
        assert 0 < s.dim_L <= ws.dim and 0 <= s.dim_flag <= len(d.positive_roots)


def test_torus_certificate_alone_overcounts():
    # (F4, w4): some torus-certified directions have empty strata; counting
    # them would push the nullcone past the module dimension
    ws = ws_of("F", 4, (0, 0, 0, 1))
    certified = [c for c in enumerate_candidates(ws) if optimality_filter(ws, c)]
    dims = {c.lam: stratum_of(ws, c).dim_total for c in certified}
    assert max(dims.values()) > ws.dim
    kept = [c for c in certified if levi_semistable(ws, c)]
    assert max(stratum_of(ws, c).dim_total for c in kept) == 24
    assert all(dims[c.lam] <= ws.dim for c in kept)


def test_torus_routes_agree():
    # the internal hyperplane test and the Wolfe certificate decide alike
    from nullcone.strata import _Lattice, _simple_of

    for args in [("A", 3, (0, 2, 0)), ("C", 3, (0, 0, 1)), ("G", 2, (0, 1)),
                 ("E", 6, (1, 0, 0, 0, 0, 0))]:
        ws = ws_of(*args)
        lat = _Lattice(dict(ws.entries), _simple_of(ws.datum), ws.datum.positive_roots)
        for c in enumerate_candidates(ws):
            v, h = lat.from_lam(c.lam)
            assert lat.lam(v, h) == c.lam
            assert lat.torus_certified(v, h) == optimality_filter(ws, c)
        # the barycentric short cut never accepts what the LP rejects
        from nullcone.strata import Counters, _candidates

        for v, h, inside in _candidates(lat, EnumOptions(), Counters()):
            # every candidate comes from weights lying on its own hyperplane
            assert lat.level_mask(v, h).any()
            if inside:
                assert lat.torus_certified(v, h)


@pytest.mark.parametrize("t", [Fraction(1, 2), Fraction(2), Fraction(3)])
def test_scaling_invariance(t):
    ws = ws_of("A", 3, (0, 2, 0))
    base = analyze(ws)
    rep = analyze(ws.scaled(t))
    assert (rep.dim_nullcone, rep.num_components) == (base.dim_nullcone, base.num_components)
    assert len(rep.strata) == len(base.strata)
    for a, b in zip(base.strata, rep.strata):
        assert b.candidate.lam == scale(t, a.candidate.lam)
        assert b.candidate.norm2 == t * t * a.candidate.norm2
        assert (a.dim_L, a.dim_flag, a.dim_total) == (b.dim_L, b.dim_flag, b.dim_total)


def test_weyl_covariance():
    ws = ws_of("C", 3, (0, 0, 1))
    d = ws.datum
    for i in range(d.rank):
        moved = WeightSystem(d, ws.highest, {d.reflect(i, mu): m for mu, m in ws.entries.items()})
        assert analyze(moved) == analyze(ws)


def test_methods_agree():
    ws = ws_of("A", 3, (0, 1, 0))
    base = analyze(ws)
    for method in ("subsets", "exhaustive"):
        assert analyze(ws, EnumOptions(method=method)) == base


def test_threads_agree():
    ws = ws_of("D", 4, (2, 0, 0, 0))
    base = analyze(ws)
    rep = analyze(ws, EnumOptions(threads=4))
    assert rep == base and rep.counters == base.counters


def test_budget():
    with pytest.raises(BudgetExceeded) as err:
        analyze(ws_of("C", 4, (0, 0, 0, 1)), EnumOptions(max_subsets=50))
    assert err.value.budget == 50 and err.value.visited == 51
    assert "max_subsets=50" in str(err.value)


def test_trivial_module_rejected():
    with pytest.raises(TrivialModule):
        analyze(ws_of("A", 2, (0, 0)))


def test_options_validation():
    with pytest.raises(ValueError):
        EnumOptions(method="magic")
    with pytest.raises(ValueError):
        EnumOptions(threads=0)
    with pytest.raises(ValueError):
        EnumOptions(max_subsets=0)


def test_subset_size_override():
    ws = ws_of("A", 2, (2, 0))
    small = enumerate_candidates(ws, EnumOptions(max_subset_size=1))
    assert {c.lam for c in small} == {dominant for dominant in {c.lam for c in small}}
    assert len(small) < len(enumerate_candidates(ws))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([("A", 1), ("A", 2), ("C", 2), ("G", 2)]), st.data())
def test_random_small_modules(t, data):
    d = root_datum(*t)
    coeffs = tuple(data.draw(st.lists(st.integers(0, 2), min_size=d.rank, max_size=d.rank)))
    assume(any(coeffs) and weyl_dim(d, coeffs) <= 40)
    ws = ws_of(*t, coeffs)
    rep = analyze(ws)
    assert 1 <= rep.num_components and rep.dim_nullcone <= rep.dim_module
    assert analyze(ws, EnumOptions(method="subsets")) == rep
