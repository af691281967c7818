"""Randomised verification suites.

Every trial is driven by one integer sub-seed, so a failing trial can be
replayed on its own.  A trial passes, fails with a list of messages, or is
skipped when the sampler could not produce a usable point.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .adhm import (
    GroupElement,
    act,
    in_lagrangian,
    in_lambda,
    is_stable,
    random_group_element,
    sample_point,
)
from .exactmath import (
    ONE,
    Matrix,
    Partition,
    commutator,
    dominance_leq,
    is_nilpotent,
    jordan_type_nilpotent,
    make_rng,
)
from .foldfix import (
    Decomposition,
    classify_fixed,
    component_permutation,
    enumerate_decompositions,
    g_decomposition,
    psi_embed,
    random_similitude,
    rho_decomposition,
    rho_w,
    theta,
    type_a_context,
)
from .maffei import (
    check_involution_correspondence,
    check_param_symmetries,
    check_series_inverse,
    extract_params,
    phi1,
    theta_params,
)
from .quiver import cartan, folding_fixtures, split_cartan_matches_transpose, split_quotient
from .slodowy import (
    SKEW,
    SliceSpec,
    build_form,
    build_triple,
    in_slice,
    nonempty_dims,
    nonempty_typeA,
    symmetric_dims,
)

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class TrialResult:
    seed: int
    status: str
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)


@dataclass
class SuiteOptions:
    n: int | None = None
    k: int | None = None
    signature: tuple | None = None
    max_dim: int = 3
    bound: int = 3


def sub_seeds(seed: int, suite: str, trials: int) -> list[int]:
    """Independent per-trial seeds derived from one master seed."""
    tag = [ord(c) for c in suite]
    children = np.random.SeedSequence([seed, *tag]).spawn(trials)
    return [int(child.generate_state(1)[0]) for child in children]


def _result(seed: int, failures: list, **info) -> TrialResult:
    return TrialResult(seed, FAIL if failures else PASS, failures, info)


def _skip(seed: int, reason: str, **info) -> TrialResult:
    return TrialResult(seed, SKIP, [], {"reason": reason, **info})


# ------------------------------------------------------------------ cartan


def trial_cartan(seed: int, opts: SuiteOptions, index: int = 0) -> TrialResult:
    fixtures = sorted(folding_fixtures().items())
    name, (q, a) = fixtures[index % len(fixtures)]
    sq = split_quotient(q, a)
    failures = [] if split_cartan_matches_transpose(sq) else [f"{name}: C(split) != C(fold)^T"]
    cartan(q, a)
    return _result(seed, failures, fixture=name)


# --------------------------------------------------------------------- psi


def _random_type_a_context(rng, n: int, max_dim: int):
    half_v = [int(rng.integers(0, max_dim + 1)) for _ in range(n)]
    half_w = [int(rng.integers(0, 4)) for _ in range(n)]
    if sum(half_w) == 0:
        half_w[int(rng.integers(0, n))] = 1
    w_n = half_w[-1]
    plus = int(rng.integers(0, w_n + 1))
    return type_a_context(n, symmetric_dims(n, half_v), symmetric_dims(n, half_w),
                          (plus, w_n - plus))


def trial_psi(seed: int, opts: SuiteOptions) -> TrialResult:
    """Embedding, stability, fixedness, equivariance and classification round trip."""
    rng = make_rng(seed)
    n = opts.n if opts.n is not None else int(rng.choice([2, 3, 4]))
    ctx = _random_type_a_context(rng, n, min(opts.max_dim, 4))
    decs = enumerate_decompositions(ctx)
    dec = decs[int(rng.integers(0, len(decs)))]
    y = sample_point(ctx.split.split, dec.as_dict(), ctx.w_split, int(rng.integers(2**31)),
                     require_stable=True, max_retries=10, field_order=ctx.field_order,
                     bound=opts.bound)
    if not y:
        # the stable locus may be empty for these dimensions
        y = sample_point(ctx.split.split, dec.as_dict(), ctx.w_split, int(rng.integers(2**31)),
                         max_retries=10, field_order=ctx.field_order, bound=opts.bound)
    if not y:
        return _skip(seed, y.reason)
    failures = []
    x = psi_embed(ctx, dec, y)
    if not in_lambda(x):
        failures.append("psi(y) violates the moment relation")
    stable = is_stable(y)
    if stable != is_stable(x):
        failures.append("stability of y and psi(y) differ")
    if act(g_decomposition(ctx, dec), theta(ctx, x)) != x:
        failures.append("g^v~ theta(psi(y)) != psi(y)")
    h = random_group_element(rng, "V", dec.as_dict())
    if psi_embed(ctx, dec, act(h, y)) != act(rho_decomposition(ctx, dec, h), x):
        failures.append("psi is not G_V~ equivariant")
    alpha = random_group_element(rng, "W", ctx.w_split)
    if psi_embed(ctx, dec, act(alpha, y)) != act(rho_w(ctx, alpha), x):
        failures.append("psi is not G_W~ equivariant")
    if stable:
        g = random_group_element(rng, "V", ctx.v)
        found = classify_fixed(ctx, act(g, x))
        if not found:
            failures.append(f"classification failed: {found.reason}")
        elif found.decomposition != dec:
            failures.append("classification returned another component")
        elif found.preimage.v != dec.as_dict() or not is_stable(found.preimage):
            failures.append("classification preimage has the wrong shape or is unstable")
        elif act(found.normalizer, act(g, x)) != psi_embed(ctx, dec, found.preimage):
            failures.append("normalised point differs from psi(preimage)")
    return _result(seed, failures, n=n, v=ctx.v, decomposition=dec.as_dict(), stable=stable)


def trial_lagrangian(seed: int, opts: SuiteOptions) -> TrialResult:
    rng = make_rng(seed)
    n = opts.n if opts.n is not None else int(rng.choice([2, 3]))
    ctx = _random_type_a_context(rng, n, min(opts.max_dim, 3))
    decs = enumerate_decompositions(ctx)
    dec = decs[int(rng.integers(0, len(decs)))]
    y = sample_point(ctx.split.split, dec.as_dict(), ctx.w_split, int(rng.integers(2**31)),
                     delta_zero=True, max_retries=10, field_order=ctx.field_order,
                     bound=opts.bound)
    if not y:
        return _skip(seed, y.reason)
    failures = []
    if not in_lagrangian(y, True):
        failures.append("split datum with Delta = 0 is not in the Lagrangian")
    if not in_lagrangian(psi_embed(ctx, dec, y), True):
        failures.append("psi of a Lagrangian point left the Lagrangian")
    return _result(seed, failures, n=n)


# ------------------------------------------------------ census (D-fold)


def census_cases() -> list[tuple]:
    """(n, k, signature) for n = 2, 3 covering both form types."""
    cases = []
    for n in (2, 3):
        for k in range(1, n):
            cases.append((n, k, None))
        for signature in ((1, 1), (0, 2), (2, 0)):
            cases.append((n, n, signature))
    return cases


def census_context(n: int, k: int, signature):
    spec = SliceSpec(n, k, signature)
    v = symmetric_dims(n, [min(i, k) for i in range(1, n + 1)])
    return spec, type_a_context(n, v, spec.w(), signature)


def predicted_components(spec: SliceSpec) -> set:
    """(v_plus, v_minus) at the fork for the nonempty fixed-point components."""
    n, k = spec.n, spec.k
    skew = build_form(spec).kind == SKEW
    top = k
    if skew:
        if k < n or tuple(spec.signature) == (1, 1):
            return {(top // 2, top // 2)}
        return _orient(spec, {((n - 1) // 2, (n + 1) // 2)})
    if k < n or tuple(spec.signature) == (1, 1):
        return {((top - 1) // 2, (top + 1) // 2), ((top + 1) // 2, (top - 1) // 2)}
    return _orient(spec, {(n // 2, n // 2), ((n - 2) // 2, (n + 2) // 2)})


def _orient(spec: SliceSpec, components: set) -> set:
    # listed for w_+ = 0; swap the fork when sigma_n = +id
    if tuple(spec.signature) == (2, 0):
        return {(minus, plus) for plus, minus in components}
    return components


def fork_dims(dec: Decomposition, n: int) -> tuple:
    dims = dec.as_dict()
    return dims[(n, 0)], dims[(n, 1)]


def trial_census(seed: int, opts: SuiteOptions) -> TrialResult:
    """Sample a split datum in a random component of D(v); stable points must
    only occur in predicted components, classify back to their component, and
    move under similitudes as the component permutation says."""
    rng = make_rng(seed)
    if opts.n is not None and opts.k is not None:
        case = (opts.n, opts.k, opts.signature)
    else:
        cases = census_cases()
        case = cases[int(rng.integers(0, len(cases)))]
    spec, ctx = census_context(*case)
    n = spec.n
    predicted = predicted_components(spec)
    decs = enumerate_decompositions(ctx)
    inside = [d for d in decs if fork_dims(d, n) in predicted]
    outside = [d for d in decs if fork_dims(d, n) not in predicted]
    pool = inside if not outside or rng.integers(0, 4) else outside
    dec = pool[int(rng.integers(0, len(pool)))]
    expected = fork_dims(dec, n) in predicted
    y = sample_point(ctx.split.split, dec.as_dict(), ctx.w_split, int(rng.integers(2**31)),
                     require_stable=True, max_retries=12 if expected else 6,
                     field_order=ctx.field_order, bound=opts.bound)
    info = {"case": list(case), "component": list(fork_dims(dec, n)), "predicted": expected}
    if not y:
        if expected:
            return _skip(seed, "no stable sample in a predicted component", **info)
        return _result(seed, [], **info)
    if not expected:
        return _result(seed, ["stable point in a component outside the prediction"], **info)
    failures = []
    x = act(random_group_element(rng, "V", ctx.v), psi_embed(ctx, dec, y))
    found = classify_fixed(ctx, x)
    if not found or found.decomposition != dec:
        failures.append("classification missed the component")
    lam = ONE if rng.integers(0, 2) else -ONE
    alpha = random_similitude(ctx, rng, lam)
    if alpha is not None:
        moved = classify_fixed(ctx, act(alpha, x))
        target = component_permutation(ctx, lam)[dec]
        if not moved or moved.decomposition != target:
            failures.append(f"similitude with lambda={lam} moved the point to the wrong component")
        elif fork_dims(target, n) not in predicted:
            failures.append("similitude left the predicted components")
        info["lambda"] = int(lam)
    return _result(seed, failures, **info)


# ------------------------------------------------------------ slice suites


def random_spec(rng, opts: SuiteOptions) -> SliceSpec:
    if opts.n is not None and opts.k is not None:
        return SliceSpec(opts.n, opts.k, opts.signature)
    n = int(rng.choice([2, 3]))
    k = int(rng.integers(1, n + 1))
    if k < n:
        return SliceSpec(n, k)
    signature = [(2, 0), (1, 1), (0, 2)][int(rng.integers(0, 3))]
    return SliceSpec(n, k, signature)


def _slice_point(rng, spec: SliceSpec, max_dim: int, stable: bool, bound: int = 3):
    choices = nonempty_dims(spec, max_dim)
    half = choices[int(rng.integers(0, len(choices)))]
    ctx = type_a_context(spec.n, symmetric_dims(spec.n, list(half)), spec.w(), spec.signature)
    x = sample_point(ctx.quiver, ctx.v, ctx.w, int(rng.integers(2**31)),
                     require_stable=stable, max_retries=12, bound=bound)
    return ctx, half, x


def framing_perturbation(spec: SliceSpec, x):
    """x with Delta_k replaced by Delta_k + c Gamma_k^T, or None if Gamma_k = 0.

    The z^4 coefficient of X(z) Y(z) becomes -(Delta_k Gamma_k + c G) c G with
    G = Gamma_k^T Gamma_k, which is nonzero for c = 1 or 2 once G != 0;
    the same shift breaks the j = 1 parameter identity.
    """
    k = spec.k
    gamma = x.Gamma[k]
    if gamma.is_zero():
        return None
    gram = gamma.T @ gamma
    for c in (1, 2):
        if not ((x.Delta[k] @ gamma + gram.scale(c)) @ gram).is_zero():
            return x.replace(Delta={**x.Delta, k: x.Delta[k] + gamma.T.scale(c)})
    raise AssertionError("a nonzero Gram matrix has a nonzero square")


def trial_series(seed: int, opts: SuiteOptions) -> TrialResult:
    rng = make_rng(seed)
    spec = random_spec(rng, opts)
    ctx, half, x = _slice_point(rng, spec, opts.max_dim, stable=False, bound=opts.bound)
    if not x:
        return _skip(seed, x.reason)
    failures = [] if check_series_inverse(x) else ["X(z) Y(z) != id"]
    bad = framing_perturbation(spec, x)
    negative = None if bad is None else check_series_inverse(bad)
    if negative:
        failures.append("perturbed datum passed the series check")
    return _result(seed, failures, spec=[spec.n, spec.k, spec.signature], v=list(half),
                   control_detected=None if negative is None else not negative)


def trial_params(seed: int, opts: SuiteOptions) -> TrialResult:
    rng = make_rng(seed)
    spec = random_spec(rng, opts)
    ctx, half, x = _slice_point(rng, spec, opts.max_dim, stable=False, bound=opts.bound)
    if not x:
        return _skip(seed, x.reason)
    sigma_n = ctx.sigma.get(spec.n)
    failures = [] if check_param_symmetries(spec, sigma_n, x) else ["parameter identities fail"]
    bad = framing_perturbation(spec, x)
    negative = None if bad is None else check_param_symmetries(spec, sigma_n, bad)
    if negative:
        failures.append("perturbed datum passed the parameter identities")
    return _result(seed, failures, spec=[spec.n, spec.k, spec.signature], v=list(half),
                   control_detected=None if negative is None else not negative)


def trial_involutions(seed: int, opts: SuiteOptions) -> TrialResult:
    rng = make_rng(seed)
    spec = random_spec(rng, opts)
    ctx, half, x = _slice_point(rng, spec, opts.max_dim, stable=True, bound=opts.bound)
    if not x:
        return _skip(seed, x.reason)
    failures = []
    if not check_involution_correspondence(spec, ctx, x):
        failures.append("Theta(phi1(x)) != phi1(theta(x))")
    if extract_params(spec, theta(ctx, x)) != theta_params(spec, extract_params(spec, x)):
        failures.append("parameters of theta(x) differ from the transformed parameters")
    return _result(seed, failures, spec=[spec.n, spec.k, spec.signature], v=list(half))


def trial_slice(seed: int, opts: SuiteOptions, orbit_samples: int = 10) -> TrialResult:
    rng = make_rng(seed)
    spec = random_spec(rng, opts)
    ctx, half, x = _slice_point(rng, spec, opts.max_dim, stable=True, bound=opts.bound)
    if not x:
        return _skip(seed, x.reason)
    failures = []
    X = phi1(spec, x)
    triple = build_triple(spec)
    if not commutator(X - triple.E, triple.F).is_zero():
        failures.append("[X - E0, F0] != 0")
    if not in_slice(spec, X):
        failures.append("phi1(x) is not in the slice")
    if not is_nilpotent(X):
        failures.append("phi1(x) is not nilpotent")
    ell = nonempty_typeA(spec, half).ell
    bound = (2 * spec.n - ell, ell) if ell else (2 * spec.n,)
    if not dominance_leq(jordan_type_nilpotent(X), Partition(bound)):
        failures.append(f"Jordan type exceeds {bound}")
    for _ in range(orbit_samples):
        g = random_group_element(rng, "V", ctx.v)
        if phi1(spec, act(g, x)) != X:
            failures.append("phi1 is not constant on a G_V orbit")
            break
    return _result(seed, failures, spec=[spec.n, spec.k, spec.signature], v=list(half),
                   jordan_type=list(jordan_type_nilpotent(X).parts))


def w_action_lift(spec: SliceSpec, alpha: GroupElement) -> Matrix:
    """The copy of alpha acting on V~_0 (diagonal copies of each W block)."""
    n, k = spec.n, spec.k
    if spec.square:
        return Matrix.block_diagonal([alpha.blocks[n]] * n)
    return Matrix.block_diagonal([alpha.blocks[k]] * k + [alpha.blocks[2 * n - k]] * (2 * n - k))


SUITES = {
    "cartan": trial_cartan,
    "psi": trial_psi,
    "classify": trial_census,
    "lagrangian": trial_lagrangian,
    "series": trial_series,
    "params": trial_params,
    "involutions": trial_involutions,
    "slice": trial_slice,
}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    requested: int
    results: list
    wall_time: float

    @property
    def completed(self) -> int:
        return sum(1 for r in self.results if r.status != SKIP)

    @property
    def skipped(self) -> int:
        return self.requested - self.completed

    @property
    def failures(self) -> list[TrialResult]:
        return [r for r in self.results if r.status == FAIL]

    def quota_met(self, quota: float) -> bool:
        return self.completed >= quota * self.requested


def run_suite(suite: str, trials: int, seed: int, opts: SuiteOptions | None = None) -> SuiteReport:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}")
    opts = opts or SuiteOptions()
    fn = SUITES[suite]
    start = time.perf_counter()
    results = []
    for index, sub in enumerate(sub_seeds(seed, suite, trials)):
        if suite == "cartan":
            results.append(fn(sub, opts, index))
        else:
            results.append(fn(sub, opts))
    return SuiteReport(suite, seed, trials, results, time.perf_counter() - start)
