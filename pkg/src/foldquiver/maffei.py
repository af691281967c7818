"""The (M_j, N_j) recursion, the map Phi_1 from type-A data to a two-row
Slodowy slice, and checks of its compatibility with the involutions.

Entries of M_j, N_j live in R, which is End(W_n) (2x2 matrices) when k = n
and the base field when k < n.  Everything is stored at scalar level: an
R-matrix with p x q entries is a (p r) x (q r) Matrix, r the size of R.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .adhm import AdhmDatum, in_lambda, is_stable, path_product
from .exactmath import (
    ZERO,
    Matrix,
    commutator,
    kron,
    power,
    solve_sparse,
)
from .quiver import type_a
from .slodowy import (
    SliceSpec,
    build_form,
    e_matrix,
    f_matrix,
    inner_form,
    theta_big,
)


@dataclass(frozen=True)
class MaffeiParams:
    """Parameter families r^{e,f}_j, each an r x r Matrix.

    m is None for the single-family recursion (k = n); otherwise m = 2n - 2k
    and the families (0,0), (0,1), (1,0) have length k while (1,1) has
    length m + k.
    """

    ring_size: int
    m: int | None
    families: dict = field(default_factory=dict)

    def __post_init__(self):
        if (1, 1) not in self.families:
            raise ValueError("the (1,1) family is always required")
        if self.m is None:
            if set(self.families) != {(1, 1)}:
                raise ValueError("the single-family recursion takes only r^{1,1}")
        else:
            if self.m <= 0 or self.m % 2:
                raise ValueError("m must be an even positive integer")
            short = {len(self.families.get(key, ())) for key in ((0, 0), (0, 1), (1, 0))}
            if len(short) != 1 or len(self.families[(1, 1)]) != self.m + short.pop():
                raise ValueError("family lengths do not match m")
        for values in self.families.values():
            for r in values:
                if r.shape != (self.ring_size, self.ring_size):
                    raise ValueError("parameter has the wrong size")

    @classmethod
    def single(cls, values, ring_size: int = 1) -> "MaffeiParams":
        return cls(ring_size, None, {(1, 1): tuple(_as_ring(v, ring_size) for v in values)})

    @classmethod
    def blocked(cls, m: int, r00, r01, r10, r11) -> "MaffeiParams":
        fam = {(0, 0): r00, (0, 1): r01, (1, 0): r10, (1, 1): r11}
        return cls(1, m, {key: tuple(_as_ring(v, 1) for v in vals) for key, vals in fam.items()})

    @property
    def final_step(self) -> int:
        return len(self.families[(1, 1)])

    def r(self, e: int, f: int, j: int) -> Matrix:
        return self.families[(e, f)][j - 1]

    def __eq__(self, other):
        if not isinstance(other, MaffeiParams):
            return NotImplemented
        return (self.ring_size, self.m) == (other.ring_size, other.m) and \
            self.families.keys() == other.families.keys() and all(
                len(self.families[key]) == len(other.families[key])
                and all(a == b for a, b in zip(self.families[key], other.families[key]))
                for key in self.families)

    __hash__ = None


def _as_ring(value, ring_size: int) -> Matrix:
    if isinstance(value, Matrix):
        return value
    return Matrix.identity(ring_size).scale(value)


# --------------------------------------------------------------- recursion


def _row_blocks(j: int, m: int | None) -> list[tuple[int, int]]:
    if m is None or j < m:
        return [(1, j)]
    return [(0, j - m), (1, j)]


def _labels(j: int, m: int | None):
    """Row labels of M_j (= columns of N_j) and of N_j (= columns of M_j)."""
    blocks = _row_blocks(j, m)
    short = [(e, a) for e, size in blocks for a in range(1, size + 1)]
    long = [(e, c) for e, size in blocks for c in range(1, size + 2)]
    return short, long


def _shift(e: int, f: int, m: int | None) -> int:
    return (f - e) * (m or 0) // 2


def _m_slot(row, col, m):
    """'one', a variable key, or None (fixed zero) for the entry of M_j."""
    (e, a), (f, b) = row, col
    if e == f:
        if b == a + 1:
            return "one"
        return ("alpha", e, f, a, b) if b <= a else None
    if e == 0:
        return ("alpha", 0, 1, a, b) if b <= a else None
    return ("alpha", 1, 0, a, b) if a >= m + 1 and b <= a - m else None


def _n_slot(row, col, m):
    (e, c), (f, b) = row, col
    a = c - 1
    if e == f:
        if c == b:
            return "one"
        return ("beta", e, f, a, b) if 1 <= b <= a else None
    if e == 0:
        return ("beta", 0, 1, a, b) if a >= 1 and b <= a else None
    return ("beta", 1, 0, a, b) if a >= m + 1 and b <= a - m else None


def _degree(key, m) -> int:
    _, e, f, a, b = key
    return a - b + _shift(e, f, m) + 1


@dataclass
class RecursionState:
    j: int
    ring_size: int
    m: int | None
    M: Matrix
    N: Matrix
    alpha: dict
    beta: dict

    def entry(self, which: str, e: int, f: int, a: int, b: int) -> Matrix:
        table = self.alpha if which == "alpha" else self.beta
        return table[(e, f, a, b)]

    @property
    def product(self) -> Matrix:
        return self.M @ self.N


def _ring_block(big: Matrix, p: int, q: int, r: int) -> Matrix:
    return big.submatrix(range(p * r, p * r + r), range(q * r, q * r + r))


def _put(data: list, p: int, q: int, block: Matrix, r: int):
    for s in range(r):
        for t in range(r):
            data[p * r + s][q * r + t] = block[s, t]


def _assemble(rows, cols, slot, values: dict, r: int) -> Matrix:
    data = [[ZERO] * (len(cols) * r) for _ in range(len(rows) * r)]
    one = Matrix.identity(r)
    for p, row in enumerate(rows):
        for q, col in enumerate(cols):
            kind = slot(row, col)
            if kind == "one":
                _put(data, p, q, one, r)
            elif kind is not None and kind in values:
                _put(data, p, q, values[kind], r)
    return Matrix(len(rows) * r, len(cols) * r, data)


def _sparse_rows(x: Matrix) -> list[list[tuple[int, object]]]:
    return [[(c, x[i, c]) for c in range(x.cols) if x[i, c]] for i in range(x.rows)]


def _sparse_cols(x: Matrix) -> list[list[tuple[int, object]]]:
    return [[(i, x[i, c]) for i in range(x.rows) if x[i, c]] for c in range(x.cols)]


def _block_triple(blocks, r: int):
    e = Matrix.block_diagonal([e_matrix(size + 1) for _, size in blocks])
    f = Matrix.block_diagonal([f_matrix(size + 1) for _, size in blocks])
    return kron(e, Matrix.identity(r)), kron(f, Matrix.identity(r))


def _step(params: MaffeiParams, j: int, prev_nm: Matrix, rng=None) -> RecursionState:
    m, r = params.m, params.ring_size
    short, long = _labels(j, m)
    blocks = _row_blocks(j, m)
    m_slot = lambda row, col: _m_slot(row, col, m)  # noqa: E731
    n_slot = lambda row, col: _n_slot(row, col, m)  # noqa: E731

    # unknown scalars: (key, s, t) with its matrix and scalar position
    unknowns = []
    for p, row in enumerate(short):
        for q, col in enumerate(long):
            key = m_slot(row, col)
            if key not in (None, "one"):
                unknowns.extend((key, s, t, "M", p * r + s, q * r + t)
                                for s in range(r) for t in range(r))
    for p, row in enumerate(long):
        for q, col in enumerate(short):
            key = n_slot(row, col)
            if key not in (None, "one"):
                unknowns.extend((key, s, t, "N", p * r + s, q * r + t)
                                for s in range(r) for t in range(r))

    # right-hand side of (B)
    target = prev_nm.copy_data()
    for e, size in blocks:
        if size == 0:
            continue
        row = short.index((e, size))
        for f, fsize in blocks:
            if fsize == 0:
                continue
            col = short.index((f, 1))
            index = j if (e, f) == (1, 1) else j - m
            value = params.r(e, f, index)
            for s in range(r):
                for t in range(r):
                    target[row * r + s][col * r + t] += value[s, t]
    target = Matrix(len(short) * r, len(short) * r, target)
    e_big, f_big = _block_triple(blocks, r)

    def b_degree(x, y):
        (e, a), (f, b) = short[x // r], short[y // r]
        return a - b + _shift(e, f, m) + 1

    def c_degree(x, y):
        (e, c), (f, b) = long[x // r], long[y // r]
        return c - b + _shift(e, f, m)

    # Jacobian of (B) and (C) in the unknowns; only the fixed 1_R entries of
    # M_j, N_j contribute, so it is constant.
    m0 = _assemble(short, long, m_slot, {}, r)
    n0 = _assemble(long, short, n_slot, {}, r)
    n0_rows, n0_cols = _sparse_rows(n0), _sparse_cols(n0)
    m0_rows, m0_cols = _sparse_rows(m0), _sparse_cols(m0)
    f_rows, f_cols = _sparse_rows(f_big), _sparse_cols(f_big)
    jac: list[dict] = []
    for index, (_, _, _, where, x, y) in enumerate(unknowns):
        entries: dict = {}
        d_nm = []
        if where == "M":
            for c, coef in n0_rows[y]:
                entries[("B", x, c)] = entries.get(("B", x, c), ZERO) + coef
            d_nm = [(c, y, coef) for c, coef in n0_cols[x]]
        else:
            for c, coef in m0_cols[x]:
                entries[("B", c, y)] = entries.get(("B", c, y), ZERO) + coef
            d_nm = [(x, c, coef) for c, coef in m0_rows[y]]
        for u, v, coef in d_nm:
            for c, fc in f_rows[v]:
                entries[("C", u, c)] = entries.get(("C", u, c), ZERO) + coef * fc
            for c, fc in f_cols[u]:
                entries[("C", c, v)] = entries.get(("C", c, v), ZERO) - fc * coef
        jac.append(entries)

    by_degree: dict = {}
    for index, u in enumerate(unknowns):
        by_degree.setdefault(_degree(u[0], m), []).append(index)

    values: dict = {}
    solved = [ZERO] * len(unknowns)

    def current():
        ring_values = {}
        for index, (key, s, t, _, _, _) in enumerate(unknowns):
            if key in values:
                continue
            ring_values.setdefault(key, [[ZERO] * r for _ in range(r)])
        for index, (key, s, t, _, _, _) in enumerate(unknowns):
            ring_values[key][s][t] = solved[index]
        mats = {key: Matrix(r, r, rows) for key, rows in ring_values.items()}
        return (_assemble(short, long, m_slot, mats, r), _assemble(long, short, n_slot, mats, r))

    for degree in sorted(by_degree):
        members = by_degree[degree]
        mj, nj = current()
        resid_b = mj @ nj - target
        resid_c = commutator(nj @ mj - e_big, f_big)
        equations: dict = {}
        for local, index in enumerate(members):
            for eq, coef in jac[index].items():
                if coef:
                    equations.setdefault(eq, {})[local] = coef
        system = []
        for eq, row in equations.items():
            kind, x, y = eq
            if kind == "B" and b_degree(x, y) != degree:
                continue
            if kind == "C" and c_degree(x, y) != degree:
                continue
            rhs = -(resid_b[x, y] if kind == "B" else resid_c[x, y])
            system.append((row, rhs))
        if rng is not None:
            rng.shuffle(system)
        solution = solve_sparse(system, len(members))
        if solution is None:
            raise ArithmeticError(f"recursion step {j}: inconsistent equations in degree {degree}")
        particular, kernel = solution
        if kernel:
            raise ArithmeticError(f"recursion step {j}: underdetermined in degree {degree}")
        for local, index in enumerate(members):
            solved[index] = particular[local]

    mj, nj = current()
    if not (mj @ nj - target).is_zero():
        raise ArithmeticError(f"recursion step {j}: condition (B) fails")
    if not commutator(nj @ mj - e_big, f_big).is_zero():
        raise ArithmeticError(f"recursion step {j}: condition (C) fails")
    alpha, beta = {}, {}
    for p, row in enumerate(short):
        for q, col in enumerate(long):
            key = m_slot(row, col)
            if key not in (None, "one"):
                alpha[key[1:]] = _ring_block(mj, p, q, r)
    for p, row in enumerate(long):
        for q, col in enumerate(short):
            key = n_slot(row, col)
            if key not in (None, "one"):
                beta[key[1:]] = _ring_block(nj, p, q, r)
    return RecursionState(j, r, m, mj, nj, alpha, beta)


def recursion_states(params: MaffeiParams, rng=None) -> list[RecursionState]:
    """States for j = 1 .. final step (M_0, N_0 are empty).

    rng, if given, shuffles the equations of every linear solve; the result
    must not depend on it.
    """
    r = params.ring_size
    prev_nm = Matrix.zeros(r, r)  # N_0 M_0 is the 1x1 zero matrix over R
    states = []
    for j in range(1, params.final_step + 1):
        state = _step(params, j, prev_nm, rng)
        states.append(state)
        prev_nm = state.N @ state.M
    return states


def run_recursion(params: MaffeiParams, rng=None) -> RecursionState:
    return recursion_states(params, rng)[-1]


# -------------------------------------------------------------- parameters


def _check_dims(spec: SliceSpec, x: AdhmDatum):
    n = spec.n
    if sorted(x.quiver.vertices) != list(range(1, 2 * n)):
        raise ValueError(f"expected a datum on A_{2 * n - 1}")
    if x.w != spec.w():
        raise ValueError("framing does not match the slice")


def extract_params(spec: SliceSpec, x: AdhmDatum) -> MaffeiParams:
    _check_dims(spec, x)
    n, k = spec.n, spec.k
    G, D = x.Gamma, x.Delta
    if spec.square:
        values = [D[n] @ path_product(x, [n, n - j + 1, n]) @ G[n] for j in range(1, n + 1)]
        return MaffeiParams(2, None, {(1, 1): tuple(values)})
    big = 2 * n - k
    r00 = [D[k] @ path_product(x, [k, k - j + 1, k]) @ G[k] for j in range(1, k + 1)]
    r01 = [(D[k] @ path_product(x, [k, k - j + 1, big]) @ G[big]).scale((-1) ** (n - k))
           for j in range(1, k + 1)]
    r10 = [D[big] @ path_product(x, [big, k - j + 1, k]) @ G[k] for j in range(1, k + 1)]
    r11 = [(D[big] @ path_product(x, [big, big - j + 1, big]) @ G[big])
           .scale((-1) ** min(j - 1, n - k)) for j in range(1, big + 1)]
    return MaffeiParams(1, 2 * n - 2 * k, {(0, 0): tuple(r00), (0, 1): tuple(r01),
                                           (1, 0): tuple(r10), (1, 1): tuple(r11)})


def slice_point(params: MaffeiParams) -> Matrix:
    state = run_recursion(params)
    return state.M @ state.N


def phi1(spec: SliceSpec, x: AdhmDatum, *, check: bool = True) -> Matrix:
    """The slice element M N attached to the orbit of the stable point x."""
    if check and not (in_lambda(x) and is_stable(x)):
        raise ValueError("phi1 needs a stable point of Lambda")
    return slice_point(extract_params(spec, x))


def zero_params(spec: SliceSpec) -> MaffeiParams:
    n, k = spec.n, spec.k
    if spec.square:
        return MaffeiParams(2, None, {(1, 1): tuple(Matrix.zeros(2, 2) for _ in range(n))})
    zero = Matrix.zeros(1, 1)
    return MaffeiParams(1, 2 * n - 2 * k, {(0, 0): (zero,) * k, (0, 1): (zero,) * k,
                                           (1, 0): (zero,) * k, (1, 1): (zero,) * (2 * n - k)})


# ---------------------------------------------------- parameter symmetries


def form_transpose(signature: tuple, r: Matrix) -> Matrix:
    """Adjoint of r with respect to (w, y)_n."""
    j = inner_form(signature)
    return j.inverse() @ r.T @ j


def transform_params(params: MaffeiParams, lam, eps=1, star=None) -> MaffeiParams:
    """r'^{e,f}_j = c^{e,f}_j * (r^{f,e}_j)^star, or c^{e,f}_j r^{e,f}_j when star is None,
    with c = lam^j on the diagonal families and eps lam^(j + m/2) off it."""
    half = (params.m or 0) // 2
    fams = {}
    for (e, f), values in params.families.items():
        source = params.families[(f, e)] if star is not None else values
        out = []
        for j, value in enumerate(source, start=1):
            coef = power(lam, j) if e == f else eps * power(lam, j + half)
            out.append((star(value) if star is not None else value).scale(coef))
        fams[(e, f)] = tuple(out)
    return MaffeiParams(params.ring_size, params.m, fams)


def predicted_entries(state: RecursionState, lam, eps=1, star=None) -> tuple[dict, dict]:
    """alpha', beta' predicted by the covariance rules from an untransformed state."""
    j, m = state.j, state.m or 0
    alpha, beta = {}, {}
    for which, table, mirror in (("alpha", alpha, state.beta), ("beta", beta, state.alpha)):
        source = state.alpha if which == "alpha" else state.beta
        for (e, f, a, b) in source:
            degree = a - b + (f - e) * m // 2 + 1
            coef = power(lam, degree) * (eps if e != f else 1)
            if star is None:
                value = source[(e, f, a, b)]
            else:
                # Labels (e, f) only switch once the two-block stage is reached.
                mirrored = (f, e, j + (f - 1) * m - b + 1, j + (e - 1) * m - a + 1)
                value = star(mirror[mirrored])
            table[(e, f, a, b)] = value.scale(coef)
    return alpha, beta


def check_covariance(params: MaffeiParams, lam, eps=1, star=None) -> bool:
    """Run the recursion on params and on their transform; compare entrywise."""
    base = recursion_states(params)
    moved = recursion_states(transform_params(params, lam, eps, star))
    for old, new in zip(base, moved):
        alpha, beta = predicted_entries(old, lam, eps, star)
        if alpha.keys() != new.alpha.keys() or beta.keys() != new.beta.keys():
            return False
        if any(alpha[key] != new.alpha[key] for key in alpha):
            return False
        if any(beta[key] != new.beta[key] for key in beta):
            return False
    return True


def theta_params(spec: SliceSpec, params: MaffeiParams) -> MaffeiParams:
    """The parameters of theta(x) predicted from those of x."""
    if spec.square:
        return transform_params(params, -1, 1, lambda r: form_transpose(spec.signature, r))
    return transform_params(params, -1, -1, lambda r: r)


def param_symmetry_failures(spec: SliceSpec, sigma_n: Matrix | None, x: AdhmDatum) -> list[str]:
    _check_dims(spec, x)
    n, k = spec.n, spec.k
    G, D = x.Gamma, x.Delta
    failures = []

    def loop(a, turn, b):
        return D[a] @ path_product(x, [a, turn, b]) @ G[b]

    if spec.square:
        for j in range(1, n + 1):
            left = form_transpose(spec.signature, loop(n, n - j + 1, n))
            right = (sigma_n @ loop(n, n + j - 1, n) @ sigma_n).scale((-1) ** j)
            if left != right:
                failures.append(f"transpose identity at j={j}")
        return failures
    big = 2 * n - k
    for j in range(1, k + 1):
        if loop(k, k - j + 1, k) != loop(big, big + j - 1, big).scale((-1) ** j):
            failures.append(f"first identity at j={j}")
        if loop(k, k - j + 1, big) != loop(k, big + j - 1, big).scale((-1) ** (j - 1)):
            failures.append(f"second identity at j={j}")
        if loop(big, k - j + 1, k) != loop(big, big + j - 1, k).scale((-1) ** (j - 1)):
            failures.append(f"third identity at j={j}")
    for j in range(1, big + 1):
        if loop(big, big - j + 1, big) != loop(k, k + j - 1, k).scale((-1) ** j):
            failures.append(f"fourth identity at j={j}")
    return failures


def check_param_symmetries(spec: SliceSpec, sigma_n: Matrix | None, x: AdhmDatum) -> bool:
    return not param_symmetry_failures(spec, sigma_n, x)


def check_involution_correspondence(spec: SliceSpec, ctx, x: AdhmDatum) -> bool:
    """Theta(Phi_1(x)) = Phi_1(theta(x))."""
    from .foldfix import theta

    form = build_form(spec)
    return theta_big(form, phi1(spec, x)) == phi1(spec, theta(ctx, x))


# ----------------------------------------------------------- series inverse


def _series_blocks(x: AdhmDatum):
    vertices = sorted(x.quiver.vertices)
    size = len(vertices)
    if vertices != list(range(1, size + 1)) or size % 2 == 0:
        raise ValueError("series identity is stated for A_{2n-1} on 1..2n-1")
    n = (size + 1) // 2
    v, w = x.v, x.w
    offsets, total = {}, 0
    for i in vertices:
        offsets[i] = total
        total += v[i]
    w_offsets, w_total = {}, 0
    for i in vertices:
        w_offsets[i] = w_total
        w_total += w[i]
    A = [[ZERO] * total for _ in range(total)]
    B = [[ZERO] * total for _ in range(total)]
    gamma = [[ZERO] * w_total for _ in range(total)]
    delta = [[ZERO] * total for _ in range(w_total)]

    def place(target, r0, c0, block, sign=1):
        for r in range(block.rows):
            for c in range(block.cols):
                target[r0 + r][c0 + c] = block[r, c] * sign

    for i in range(1, size):
        up = x.quiver.arrows_between(i, i + 1)[0]
        down = x.quiver.arrows_between(i + 1, i)[0]
        place(A, offsets[i + 1], offsets[i], x.B[up])
        place(B, offsets[i], offsets[i + 1], x.B[down], 1 if i < n else -1)
    for i in vertices:
        place(gamma, offsets[i], w_offsets[i], x.Gamma[i])
        place(delta, w_offsets[i], offsets[i], x.Delta[i])
    return (Matrix(total, total, A), Matrix(total, total, B),
            Matrix(total, w_total, gamma), Matrix(w_total, total, delta))


def series_pair(x: AdhmDatum) -> tuple[list, list]:
    """Coefficient lists of X(z) and Y(z)."""
    A, B, gamma, delta = _series_blocks(x)
    size = A.rows
    w_total = gamma.cols
    a_pows = [Matrix.identity(size)]
    while not a_pows[-1].is_zero():
        a_pows.append(a_pows[-1] @ A)
    b_pows = [Matrix.identity(size)]
    while not b_pows[-1].is_zero():
        b_pows.append(b_pows[-1] @ B)
    top = len(a_pows) + len(b_pows) + 2
    X = [Matrix.zeros(w_total, w_total) for _ in range(top)]
    Y = [Matrix.zeros(w_total, w_total) for _ in range(top)]
    X[0] = Y[0] = Matrix.identity(w_total)
    for j, ap in enumerate(a_pows):
        for kk, bp in enumerate(b_pows):
            X[j + kk + 2] = X[j + kk + 2] - delta @ ap @ bp @ gamma
            Y[j + kk + 2] = Y[j + kk + 2] + delta @ bp @ ap @ gamma
    return X, Y


def check_series_inverse(x: AdhmDatum) -> bool:
    X, Y = series_pair(x)
    size = X[0].rows
    for degree in range(len(X) + len(Y) - 1):
        total = Matrix.zeros(size, size)
        for i in range(max(0, degree - len(Y) + 1), min(degree, len(X) - 1) + 1):
            total = total + X[i] @ Y[degree - i]
        expected = Matrix.identity(size) if degree == 0 else Matrix.zeros(size, size)
        if total != expected:
            return False
    return True


# ---------------------------------------------------------------- padding


def pad_datum(x: AdhmDatum) -> AdhmDatum:
    """A_{2n-1} datum -> A_{2n+1} datum with zero spaces at both ends."""
    size = len(x.quiver.vertices)
    n = (size + 1) // 2
    q = type_a(n + 1)
    v = {i + 1: x.v[i] for i in range(1, size + 1)}
    w = {i + 1: x.w[i] for i in range(1, size + 1)}
    v[1] = v[size + 2] = 0
    w[1] = w[size + 2] = 0
    B = {}
    for h in q.arrows:
        s, t = h.src, h.tgt
        if 1 in (s, t) or size + 2 in (s, t):
            B[h.id] = Matrix.zeros(v[t], v[s])
        else:
            B[h.id] = x.B[x.quiver.arrows_between(s - 1, t - 1)[0]]
    Gamma = {i: Matrix.zeros(v[i], w[i]) for i in (1, size + 2)}
    Delta = {i: Matrix.zeros(w[i], v[i]) for i in (1, size + 2)}
    for i in range(1, size + 1):
        Gamma[i + 1] = x.Gamma[i]
        Delta[i + 1] = x.Delta[i]
    return AdhmDatum(q, v, w, B, Gamma, Delta, x.field_order)


def padded_spec(spec: SliceSpec) -> SliceSpec:
    return SliceSpec(spec.n + 1, spec.k + 1, spec.signature)


def params_agree_after_padding(small: MaffeiParams, padded: MaffeiParams) -> bool:
    """Padded families extend the originals by zeros, with the same m."""
    if (small.m, small.ring_size) != (padded.m, padded.ring_size):
        return False
    for key, values in small.families.items():
        longer = padded.families[key]
        if len(longer) != len(values) + 1:
            return False
        if any(a != b for a, b in zip(values, longer)) or not longer[-1].is_zero():
            return False
    return True


def base_point_check(spec: SliceSpec) -> bool:
    """Phi_1 of the zero parameters is E_0."""
    from .slodowy import build_triple

    return slice_point(zero_params(spec)) == build_triple(spec).E


__all__ = [
    "MaffeiParams", "RecursionState", "recursion_states", "run_recursion", "extract_params",
    "phi1", "slice_point", "zero_params", "transform_params", "predicted_entries",
    "check_covariance", "theta_params", "param_symmetry_failures", "check_param_symmetries",
    "check_involution_correspondence", "series_pair", "check_series_inverse", "pad_datum",
    "padded_spec", "params_agree_after_padding", "base_point_check", "form_transpose",
]
