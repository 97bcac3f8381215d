import json

import pytest

from klstab import stab
from klstab.errors import RankExceeded, RouteDisagreement
from klstab.kl import KLContext, V_PLUS_V_INV
from klstab.laurent import LaurentPoly, ONE
from klstab.stab import (
    DualExpansion, act, check_cell_constraint, check_mu_support_lemma, stability_scan,
    stabilized_theta, support_bound, theta_form, theta_on_simple, theta_recursive,
)
from klstab.symgroup import (
    IDENTITY, enumerate_sn, longest_element, parse_permutation, s,
)

from oracles import dual_product_brute_force

P = parse_permutation
S3 = list(enumerate_sn(3))
S4 = list(enumerate_sn(4))
X = P("s1*s2*s3*s1*s2*s1")
TWO_TERMS = {P("s2*s1*s3*s2*s1"): ONE, X: V_PLUS_V_INV}
THREE_TERMS = {**TWO_TERMS, P("s1*s2*s3*s1*s2*s1*s4"): ONE}


def test_identity_kills_everything(ctx):
    for k in (2, 3, 4):
        assert theta_on_simple(ctx, IDENTITY, s(1), k).coeffs == {}
    assert stabilized_theta(ctx, IDENTITY, s(2)).coeffs == {}


def test_section_example(ctx):
    assert theta_on_simple(ctx, X, s(3), 4).coeffs == TWO_TERMS
    for k in (5, 6):
        assert theta_on_simple(ctx, X, s(3), k).coeffs == THREE_TERMS
    assert str(theta_on_simple(ctx, X, s(3), 4)) == \
        "^H_{s2*s3*s1*s2*s1} + (v^-1 + v) ^H_{s1*s2*s3*s1*s2*s1}"


def test_section_example_stabilized(ctx):
    e = stabilized_theta(ctx, X, s(3))
    assert e.coeffs == THREE_TERMS
    assert e.stabilized and e.rank == 0
    assert e.certified_rank == 2 * 4 + 1


def test_routes_agree_s3(ctx):
    for k in (4, 5):
        for x in S3:
            for y in S3:
                a = theta_recursive(ctx, x, y, k)
                assert a == theta_form(ctx, x, y, k), (x, y, k)


def test_routes_agree_s4_simple(ctx):
    for x in S4:
        for i in (1, 2, 3):
            assert theta_recursive(ctx, x, s(i), 5) == theta_form(ctx, x, s(i), 5), (x, i)


def test_recursion_against_brute_force(ctx):
    for k in (3, 4):
        for x in enumerate_sn(k):
            for y in S3:
                assert theta_recursive(ctx, x, y, k) == dual_product_brute_force(ctx, x, y, k)


def test_pruning_is_complete(ctx):
    for x in S3:
        for y in S3:
            assert theta_form(ctx, x, y, 4) == theta_form(ctx, x, y, 4, prune=False)
    for x in (X, P("s2*s1"), P("s1*s3*s2")):
        for i in (1, 3, 4):
            assert theta_form(ctx, x, s(i), 5) == theta_form(ctx, x, s(i), 5, prune=False)


def test_generator_degree_shape(ctx):
    for x in S4:
        for i in (1, 2, 3):
            e = theta_on_simple(ctx, x, s(i), 4)
            if x.has_right_descent(i):
                assert e.coeff(x) == V_PLUS_V_INV
                for w, c in e.coeffs.items():
                    if w != x:
                        assert c.is_constant() and c.coeff(0) > 0
            else:
                assert not e.coeffs


def test_rank_stability_s3(ctx):
    for x in S3:
        for y in S3:
            e4, e5 = theta_on_simple(ctx, x, y, 4), theta_on_simple(ctx, x, y, 5)
            for w in S3:
                assert e4.coeff(w) == e5.coeff(w)


def test_stabilized_matches_rank6():
    c = KLContext(6)
    for x in S3:
        for y in S3:
            assert stabilized_theta(c, x, y, ceiling=12).coeffs == \
                theta_on_simple(c, x, y, 6).coeffs, (x, y)


def test_stabilized_module_axioms(ctx):
    for x in S3:
        for i in (1, 2):
            once = act(ctx, {x: ONE}, s(i))
            twice = act(ctx, once, s(i))
            assert twice == {w: V_PLUS_V_INV * c for w, c in once.items()}


def test_stabilized_respects_structure_constants(ctx):
    # (h _H_y) _H_z = sum_c gamma_{y,z}^c h _H_c
    words = [w for w in S3 if w != IDENTITY]
    for x in S3:
        for y in words:
            for z in words:
                if (y * z).length() != y.length() + z.length():
                    continue
                lhs = act(ctx, act(ctx, {x: ONE}, y), z)
                rhs = {}
                for c, g in ctx.gamma(y, z).items():
                    for w, d in act(ctx, {x: ONE}, c).items():
                        rhs[w] = rhs.get(w, LaurentPoly()) + g * d
                assert lhs == {w: c for w, c in rhs.items() if c}


def test_stabilized_ceiling():
    c = KLContext(8)
    with pytest.raises(RankExceeded, match="ceiling"):
        stabilized_theta(c, longest_element(5), s(1), ceiling=8)


def test_theta_rank_checks(ctx):
    with pytest.raises(RankExceeded):
        theta_on_simple(ctx, X, s(3), 3)
    with pytest.raises(RankExceeded):
        theta_on_simple(ctx, X, s(3), 9, ceiling=8)


def test_route_disagreement_is_fatal(monkeypatch):
    c = KLContext(4)
    monkeypatch.setattr(stab, "theta_form", lambda *a, **k: {IDENTITY: ONE})
    with pytest.raises(RouteDisagreement):
        theta_on_simple(c, s(1), s(1), 3)


def test_mu_support_lemma(ctx):
    assert check_mu_support_lemma(ctx, 3) == []
    assert check_mu_support_lemma(ctx, 5) == []


def test_cell_constraint_examples(ctx):
    assert check_cell_constraint(theta_on_simple(ctx, X, s(3), 4)) == []
    w0 = longest_element(3)
    for i in (1, 2):
        e = theta_on_simple(ctx, w0, s(i), 3)
        assert e.coeffs and check_cell_constraint(e) == []
    assert check_cell_constraint(DualExpansion(IDENTITY, s(1), 3, {})) == []


def test_cell_constraint_reports_violations():
    fake = DualExpansion(IDENTITY, s(1), 3, {longest_element(3): ONE})
    (v,) = check_cell_constraint(fake)
    assert v["shape_w"] == [1, 1, 1] and v["shape_x"] == [3]


def test_dual_expansion_json(ctx):
    e = theta_on_simple(ctx, X, s(3), 5)
    d = json.loads(json.dumps(e.to_json()))
    assert DualExpansion.from_json(d).coeffs == e.coeffs
    st = stabilized_theta(ctx, X, s(3)).to_json()
    assert st["rank"] == 0 and st["stabilized"] is True
    with pytest.raises(RankExceeded):
        DualExpansion(X, s(3), 4, {P("s4"): ONE})


def test_scan_section_example(ctx):
    rep = stability_scan(ctx, X, s(3), [4, 5, 6])
    assert rep.stabilized_from == 5
    assert rep.support_bound == 8 == support_bound(X, s(3))
    assert rep.max_support_seen == 5
    assert rep.support_bound_ok and rep.rank_stable_ok and rep.violations == []
    json.dumps(rep.to_json())


def test_scan_identity_and_s1(ctx):
    rep = stability_scan(ctx, IDENTITY, s(1), [4, 5])
    assert all(not e.coeffs for e in rep.expansions.values())
    assert rep.stabilized_from == 4
    for x in S3:
        assert stability_scan(ctx, x, s(1), [4, 5, 6]).support_bound_ok


def test_scan_arguments(ctx):
    with pytest.raises(ValueError):
        stability_scan(ctx, X, s(3), [5, 4])
    with pytest.raises(RankExceeded):
        stability_scan(ctx, X, s(3), [3, 4])


def test_scan_flags_injected_instability(ctx, monkeypatch):
    real = stab.theta_on_simple

    def shaky(c, x, y, k, ceiling=8):
        e = real(c, x, y, k, ceiling)
        if k == 6:
            e.coeffs[IDENTITY] = ONE
        return e
    monkeypatch.setattr(stab, "theta_on_simple", shaky)
    rep = stability_scan(ctx, X, s(3), [4, 5, 6])
    assert not rep.rank_stable_ok
    assert rep.first_discrepancy["w"] == []
