from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldquiver.adhm import (
    AdhmDatum,
    act,
    in_lambda,
    is_stable,
    moment_residual,
    random_group_element,
    sample_point,
)
from foldquiver.exactmath import ONE, Matrix, make_rng, random_matrix
from foldquiver.foldfix import (
    Decomposition,
    NotFixed,
    build_context,
    classify_fixed,
    component_permutation,
    decomposition_violations,
    enumerate_decompositions,
    g_decomposition,
    is_theta_similitude,
    psi_embed,
    random_similitude,
    rho_decomposition,
    rho_w,
    theta,
    theta_group,
    type_a_context,
)
from foldquiver.quiver import folding_fixtures

seeds = st.integers(0, 2**31)

CASES = {
    "A5-involution": ({1: 1, 2: 1, 3: 2, 4: 1, 5: 1}, {1: 0, 2: 0, 3: 2, 4: 0, 5: 0}),
    "D4-triality": ({0: 2, 1: 1, 2: 1, 3: 1}, {0: 1, 1: 0, 2: 0, 3: 0}),
    "affine-A3-rotation": ({0: 1, 1: 1, 2: 1, 3: 1}, {0: 1, 1: 0, 2: 1, 3: 0}),
}


def context(name):
    q, a = folding_fixtures()[name]
    v, w = CASES[name]
    return build_context(q, a, v, w)


def random_datum(ctx, seed):
    rng = make_rng(seed)
    q, v, w = ctx.quiver, ctx.v, ctx.w
    return AdhmDatum(q, v, w,
                     {h.id: random_matrix(rng, v[h.tgt], v[h.src]) for h in q.arrows},
                     {i: random_matrix(rng, v[i], w[i]) for i in q.vertices},
                     {i: random_matrix(rng, w[i], v[i]) for i in q.vertices},
                     ctx.field_order)


def stable_split_point(ctx, dec, seed):
    return sample_point(ctx.split.split, dec.as_dict(), ctx.w_split, seed,
                        require_stable=True, max_retries=8, field_order=ctx.field_order)


@pytest.mark.parametrize("name", sorted(CASES))
@given(seed=seeds)
def test_theta_has_the_period_of_the_automorphism(name, seed):
    ctx = context(name)
    x = random_datum(ctx, seed)
    y = x
    for _ in range(ctx.period):
        y = theta(ctx, y)
    assert y == x


@pytest.mark.parametrize("name", sorted(CASES))
@given(seed=seeds)
def test_theta_intertwines_the_group_action_and_the_relation(name, seed):
    ctx = context(name)
    x = random_datum(ctx, seed)
    rng = make_rng(seed, 1)
    g = random_group_element(rng, "V", ctx.v)
    h = random_group_element(rng, "V", ctx.v)
    assert theta(ctx, act(g, x)) == act(theta_group(ctx, g), theta(ctx, x))
    assert theta_group(ctx, g @ h) == theta_group(ctx, g) @ theta_group(ctx, h)
    residual, moved = moment_residual(x), moment_residual(theta(ctx, x))
    for i in ctx.quiver.vertices:
        i0 = ctx.aut.vertex(i, -1)
        assert moved[i] == ctx.phi[i0] @ residual[i0] @ ctx.phi[i0].inverse()


@pytest.mark.parametrize("name", sorted(CASES))
def test_decomposition_count_is_a_product_of_compositions(name):
    ctx = context(name)
    expected = 1
    for i in ctx.split.representatives:
        slots = len(ctx.exponents(i))
        expected *= comb(ctx.v[i] + slots - 1, slots - 1)
    decs = enumerate_decompositions(ctx)
    assert len(decs) == expected == len(set(decs))
    assert all(decomposition_violations(ctx, d) == [] for d in decs)


@pytest.mark.parametrize("name", sorted(CASES))
def test_psi_round_trip_through_classification(name):
    ctx = context(name)
    decs = enumerate_decompositions(ctx)
    hits = 0
    for seed in range(24):
        dec = decs[seed % len(decs)]
        y = stable_split_point(ctx, dec, seed)
        if not y:
            continue
        x = psi_embed(ctx, dec, y)
        assert in_lambda(x) and is_stable(x)
        assert act(g_decomposition(ctx, dec), theta(ctx, x)) == x
        g = random_group_element(make_rng(seed), "V", ctx.v)
        found = classify_fixed(ctx, act(g, x))
        assert found and found.decomposition == dec
        assert act(found.normalizer, act(g, x)) == psi_embed(ctx, dec, found.preimage)
        hits += 1
    assert hits >= 4


@pytest.mark.parametrize("name", sorted(CASES))
@given(seed=seeds)
def test_psi_is_equivariant(name, seed):
    ctx = context(name)
    decs = enumerate_decompositions(ctx)
    dec = decs[seed % len(decs)]
    y = sample_point(ctx.split.split, dec.as_dict(), ctx.w_split, seed,
                     field_order=ctx.field_order)
    assert y
    rng = make_rng(seed, 2)
    h = random_group_element(rng, "V", dec.as_dict())
    alpha = random_group_element(rng, "W", ctx.w_split)
    x = psi_embed(ctx, dec, y)
    assert psi_embed(ctx, dec, act(h, y)) == act(rho_decomposition(ctx, dec, h), x)
    assert psi_embed(ctx, dec, act(alpha, y)) == act(rho_w(ctx, alpha), x)


def test_generic_stable_points_are_not_fixed():
    ctx = type_a_context(2, {1: 1, 2: 1, 3: 1}, {1: 1, 2: 0, 3: 1})
    verdicts = []
    for seed in range(10):
        x = sample_point(ctx.quiver, ctx.v, ctx.w, seed, require_stable=True)
        assert x
        verdicts.append(classify_fixed(ctx, x))
    missed = [v for v in verdicts if isinstance(v, NotFixed)]
    assert missed and all(not v and v.reason for v in missed)


def test_psi_rejects_mismatched_input():
    ctx = context("A5-involution")
    dec = enumerate_decompositions(ctx)[0]
    y = sample_point(ctx.split.split, dec.as_dict(), ctx.w_split, 0)
    other = Decomposition.from_dict({key: value + 1 for key, value in dec.as_dict().items()})
    with pytest.raises(ValueError):
        psi_embed(ctx, other, y)


def test_context_validation():
    q, a = folding_fixtures()["A3-involution"]
    v, w = {1: 1, 2: 1, 3: 1}, {1: 1, 2: 0, 3: 1}
    with pytest.raises(ValueError, match="identity"):
        build_context(q, a, v, w, phi={1: Matrix.from_rows([[2]])})
    with pytest.raises(ValueError, match="differ"):
        build_context(q, a, {1: 1, 2: 1, 3: 2}, w)
    with pytest.raises(ValueError):
        type_a_context(2, v, {1: 0, 2: 2, 3: 0}, (1, 0))


@pytest.mark.parametrize("lam", [ONE, -ONE])
@given(seed=seeds)
def test_random_similitudes_have_the_requested_scalar(lam, seed):
    ctx = type_a_context(2, {1: 1, 2: 2, 3: 1}, {1: 0, 2: 2, 3: 0}, (1, 1))
    alpha = random_similitude(ctx, make_rng(seed), lam)
    if alpha is None:
        return
    assert is_theta_similitude(ctx, alpha) == lam
    assert is_theta_similitude(ctx, random_group_element(make_rng(seed), "W", ctx.w)) in (
        None, ONE, -ONE)


@pytest.mark.parametrize("name", ["A5-involution", "D4-triality"])
def test_component_permutation_is_a_bijection(name):
    ctx = context(name)
    for m in range(ctx.period):
        perm = component_permutation(ctx, ctx.root(m))
        assert sorted(perm.values(), key=str) == sorted(perm, key=str)
        if m == 0:
            assert all(k == v for k, v in perm.items())
    with pytest.raises(ValueError):
        component_permutation(ctx, 5 * ONE)
