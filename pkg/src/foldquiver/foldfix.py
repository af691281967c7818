"""Diagram automorphisms of ADHM data and their fixed points.

A fold context carries an admissible automorphism a together with
isomorphisms phi_i: V_i -> V_a(i) and sigma_i: W_i -> W_a(i).  Data on the
split quotient embed into theta-fixed data on the original quiver, and
theta-fixed stable points are classified back.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .adhm import AdhmDatum, GroupElement, act, transporter
from .exactmath import ONE, Matrix, eigenspace, field_constant, power, root_of_unity
from .quiver import AdmAut, Quiver, SplitQuotient, edge_orbit_reps, id_key, split_quotient


def field_order_for(period: int) -> int:
    # Q(zeta_n) for n >= 3; the rationals already hold +-1.
    return period if period >= 3 else 2


@dataclass
class FoldContext:
    quiver: Quiver
    aut: AdmAut
    split: SplitQuotient
    v: dict
    w: dict
    phi: dict
    sigma: dict
    field_order: int
    w_basis: dict = field(default_factory=dict)
    w_split: dict = field(default_factory=dict)
    edge_reps: dict = field(default_factory=dict)

    @property
    def period(self) -> int:
        return self.aut.period

    def root(self, p: int):
        """eta^p with eta a primitive period-th root of unity."""
        n = self.period
        return root_of_unity(self.field_order, (p * self.field_order // n) % self.field_order)

    def exponents(self, i) -> tuple:
        return self.split.root_exponents[i]

    def is_rep(self, i) -> bool:
        return self.split.vertex_rep[i] == i

    def sigma_composite(self, i) -> Matrix:
        """sigma_{a^(d-1) i} ... sigma_i on W_i."""
        total = Matrix.identity(self.w[i])
        j = i
        for _ in range(self.aut.d_vertex(i)):
            total = self.sigma[j] @ total
            j = self.aut.vertex(j)
        return total

    def violations(self) -> list[str]:
        problems = []
        a = self.aut
        for i in self.quiver.vertices:
            j = a.vertex(i)
            if self.v[i] != self.v[j] or self.w[i] != self.w[j]:
                problems.append(f"dimensions differ along the orbit of {i!r}")
                continue
            if self.phi[i].shape != (self.v[j], self.v[i]) or not self.phi[i].is_invertible():
                problems.append(f"phi at {i!r} is not an isomorphism")
            if self.sigma[i].shape != (self.w[j], self.w[i]) or not self.sigma[i].is_invertible():
                problems.append(f"sigma at {i!r} is not an isomorphism")
        if problems:
            return problems
        for i in self.quiver.vertices:
            total = Matrix.identity(self.v[i])
            j = i
            for _ in range(a.d_vertex(i)):
                total = self.phi[j] @ total
                j = a.vertex(j)
            if total != Matrix.identity(self.v[i]):
                problems.append(f"phi does not compose to the identity around {i!r}")
            if self.sigma_composite(i).power(a.e_vertex(i)) != Matrix.identity(self.w[i]):
                problems.append(f"sigma composite at {i!r} has the wrong order")
        return problems


def build_context(q: Quiver, a: AdmAut, v: dict, w: dict, phi: dict | None = None,
                  sigma: dict | None = None) -> FoldContext:
    """Validate (phi, sigma) and split each W_i, i a representative, into eigenspaces."""
    phi = dict(phi or {})
    sigma = dict(sigma or {})
    for i in q.vertices:
        phi.setdefault(i, Matrix.identity(v[i]))
        sigma.setdefault(i, Matrix.identity(w[i]))
    sq = split_quotient(q, a)
    ctx = FoldContext(q, a, sq, dict(v), dict(w), phi, sigma, field_order_for(a.period))
    problems = ctx.violations()
    if problems:
        raise ValueError("; ".join(problems))
    for i in sq.representatives:
        composite = ctx.sigma_composite(i)
        columns = []
        for p in ctx.exponents(i):
            basis = eigenspace(composite, ctx.root(p))
            ctx.w_split[(i, p)] = len(basis)
            columns.extend(basis)
        if len(columns) != w[i]:
            raise ValueError(f"sigma composite at {i!r} is not diagonalizable over the roots")
        ctx.w_basis[i] = (Matrix.block([columns]) if columns else Matrix.zeros(0, 0))
    ctx.edge_reps = edge_orbit_reps(q, a)
    return ctx


def type_a_context(n: int, v: dict, w: dict, signature: tuple | None = None) -> FoldContext:
    """A_{2n-1} with i -> 2n-i, phi = id, sigma_i = id off the middle and
    sigma_n = diag(+1 repeated w+, -1 repeated w-)."""
    from .quiver import type_a_involution

    q, a = type_a_involution(n)
    w_n = w[n]
    plus, minus = signature if signature is not None else (w_n, 0)
    if plus + minus != w_n:
        raise ValueError("signature must add up to w_n")
    sigma = {n: Matrix.diagonal([1] * plus + [-1] * minus)}
    return build_context(q, a, v, w, sigma=sigma)


@dataclass(frozen=True)
class Decomposition:
    """A point of D(v): dims[(i, p)] for each split vertex, with V_{i,p}
    realised as consecutive coordinate blocks in increasing p."""

    dims: tuple

    @classmethod
    def from_dict(cls, dims: dict) -> "Decomposition":
        return cls(tuple(sorted(dims.items(), key=lambda kv: id_key(kv[0]))))

    def as_dict(self) -> dict:
        return dict(self.dims)

    def __getitem__(self, key) -> int:
        return self.as_dict()[key]


def decomposition_violations(ctx: FoldContext, dec: Decomposition) -> list[str]:
    dims = dec.as_dict()
    problems = []
    for i in ctx.split.representatives:
        parts = [dims.get((i, p), -1) for p in ctx.exponents(i)]
        if min(parts, default=0) < 0:
            problems.append(f"missing or negative entries at {i!r}")
        elif sum(parts) != ctx.v[i]:
            problems.append(f"entries at {i!r} do not add up to v = {ctx.v[i]}")
    return problems


def enumerate_decompositions(ctx: FoldContext) -> list[Decomposition]:
    per_vertex = []
    for i in ctx.split.representatives:
        slots = len(ctx.exponents(i))
        options = [c for c in itertools.product(range(ctx.v[i] + 1), repeat=slots)
                   if sum(c) == ctx.v[i]]
        per_vertex.append([{(i, p): c[k] for k, p in enumerate(ctx.exponents(i))}
                           for c in options])
    result = []
    for choice in itertools.product(*per_vertex):
        dims = {}
        for part in choice:
            dims.update(part)
        result.append(Decomposition.from_dict(dims))
    return result


def _offsets(ctx: FoldContext, dims: dict, i) -> dict:
    offsets, start = {}, 0
    for p in ctx.exponents(i):
        offsets[p] = (start, start + dims[(i, p)])
        start += dims[(i, p)]
    return offsets


# ------------------------------------------------------------------- theta


def theta(ctx: FoldContext, x: AdhmDatum) -> AdhmDatum:
    q, a = ctx.quiver, ctx.aut
    phi_inv = {i: m.inverse() for i, m in ctx.phi.items()}
    sigma_inv = {i: m.inverse() for i, m in ctx.sigma.items()}
    B = {}
    for h in q.arrows:
        h0 = a.arrow(h.id, -1)
        s0, t0 = q.src(h0), q.tgt(h0)
        B[h.id] = ctx.phi[t0] @ x.B[h0] @ phi_inv[s0]
    Gamma, Delta = {}, {}
    for i in q.vertices:
        i0 = a.vertex(i, -1)
        Gamma[i] = ctx.phi[i0] @ x.Gamma[i0] @ sigma_inv[i0]
        Delta[i] = ctx.sigma[i0] @ x.Delta[i0] @ phi_inv[i0]
    return x.replace(B=B, Gamma=Gamma, Delta=Delta)


def theta_group(ctx: FoldContext, g: GroupElement) -> GroupElement:
    maps = ctx.phi if g.kind == "V" else ctx.sigma
    blocks = {}
    for i in ctx.quiver.vertices:
        i0 = ctx.aut.vertex(i, -1)
        blocks[i] = maps[i0] @ g.blocks[i0] @ maps[i0].inverse()
    return GroupElement(g.kind, blocks)


# --------------------------------------------------------------------- psi


def g_decomposition(ctx: FoldContext, dec: Decomposition) -> GroupElement:
    """g^v~: eta^p on the block V_{i,p} for representatives, identity elsewhere."""
    dims = dec.as_dict()
    blocks = {}
    for i in ctx.quiver.vertices:
        if ctx.is_rep(i):
            entries = []
            for p in ctx.exponents(i):
                entries.extend([ctx.root(p)] * dims[(i, p)])
            blocks[i] = Matrix.diagonal(entries)
        else:
            blocks[i] = Matrix.identity(ctx.v[i])
    return GroupElement("V", blocks)


def _twists(ctx: FoldContext, g: GroupElement) -> dict:
    """c_j = g_{a(j)} phi_j : V_j -> V_{a(j)}."""
    return {j: g.blocks[ctx.aut.vertex(j)] @ ctx.phi[j] for j in ctx.quiver.vertices}


def _chain(ctx: FoldContext, c: dict, start, steps: int) -> Matrix:
    total = Matrix.identity(ctx.v[start])
    j = start
    for _ in range(steps):
        total = c[j] @ total
        j = ctx.aut.vertex(j)
    return total


def split_dims(ctx: FoldContext, dec: Decomposition) -> tuple[dict, dict]:
    return dec.as_dict(), dict(ctx.w_split)


def _hat_blocks(ctx: FoldContext, hat, dims: dict, blocks: dict, reverse: bool) -> Matrix:
    """Assemble V_s -> V_t (or V_t -> V_s when reverse) from split arrow blocks."""
    s, t = hat.src, hat.tgt
    src_off, tgt_off = _offsets(ctx, dims, s), _offsets(ctx, dims, t)
    if reverse:
        out = Matrix.zeros(ctx.v[s], ctx.v[t]).copy_data()
    else:
        out = Matrix.zeros(ctx.v[t], ctx.v[s]).copy_data()
    for p in ctx.exponents(s):
        for pp in ctx.exponents(t):
            key = (hat.id, p, pp) if not reverse else (hat.bar, pp, p)
            block = blocks.get(key)
            if block is None:
                continue
            rows = tgt_off[pp] if not reverse else src_off[p]
            cols = src_off[p] if not reverse else tgt_off[pp]
            for r in range(block.rows):
                for col in range(block.cols):
                    out[rows[0] + r][cols[0] + col] = block[r, col]
    shape = (ctx.v[s], ctx.v[t]) if reverse else (ctx.v[t], ctx.v[s])
    return Matrix(shape[0], shape[1], out)


def _read_hat_blocks(ctx: FoldContext, hat, dims: dict, m: Matrix, reverse: bool) -> dict:
    s, t = hat.src, hat.tgt
    src_off, tgt_off = _offsets(ctx, dims, s), _offsets(ctx, dims, t)
    out = {}
    split = ctx.split.split
    for p in ctx.exponents(s):
        for pp in ctx.exponents(t):
            key = (hat.id, p, pp) if not reverse else (hat.bar, pp, p)
            if not split.has_arrow(key):
                continue
            rows = tgt_off[pp] if not reverse else src_off[p]
            cols = src_off[p] if not reverse else tgt_off[pp]
            out[key] = m.submatrix(range(*rows), range(*cols))
    return out


def _off_block_zero(ctx: FoldContext, hat, dims: dict, m: Matrix, reverse: bool) -> bool:
    s, t = hat.src, hat.tgt
    src_off, tgt_off = _offsets(ctx, dims, s), _offsets(ctx, dims, t)
    split = ctx.split.split
    for p in ctx.exponents(s):
        for pp in ctx.exponents(t):
            key = (hat.id, p, pp) if not reverse else (hat.bar, pp, p)
            if split.has_arrow(key):
                continue
            rows = tgt_off[pp] if not reverse else src_off[p]
            cols = src_off[p] if not reverse else tgt_off[pp]
            if not m.submatrix(range(*rows), range(*cols)).is_zero():
                return False
    return True


def psi_embed(ctx: FoldContext, dec: Decomposition, y: AdhmDatum) -> AdhmDatum:
    """The theta-fixed datum on the original quiver built from y on the split quotient."""
    problems = decomposition_violations(ctx, dec)
    if problems:
        raise ValueError("; ".join(problems))
    dims = dec.as_dict()
    if y.v != dims or y.w != ctx.w_split:
        raise ValueError("split datum does not match the decomposition")
    q, a, sq = ctx.quiver, ctx.aut, ctx.split
    g = g_decomposition(ctx, dec)
    c = _twists(ctx, g)
    sigma_inv = {i: m.inverse() for i, m in ctx.sigma.items()}
    Gamma, Delta = {}, {}
    for i in sq.representatives:
        e = ctx.split.e(i)
        basis = ctx.w_basis[i]
        gamma = Matrix.block_diagonal([y.Gamma[(i, p)] for p in ctx.exponents(i)])
        delta = Matrix.block_diagonal([y.Delta[(i, p)] for p in ctx.exponents(i)])
        Gamma[i] = gamma.scale(e) @ basis.inverse()
        Delta[i] = basis @ delta
        j = i
        for _ in range(a.d_vertex(i) - 1):
            nxt = a.vertex(j)
            Gamma[nxt] = c[j] @ Gamma[j] @ sigma_inv[j]
            Delta[nxt] = ctx.sigma[j] @ Delta[j] @ c[j].inverse()
            j = nxt
    B = {}
    for h1, f in ctx.edge_reps.items():
        hat = sq.hat_arrows[sq.arrow_hat[h1]]
        chain = _chain(ctx, c, hat.tgt, f)
        forward = _hat_blocks(ctx, hat, dims, y.B, reverse=False)
        backward = _hat_blocks(ctx, hat, dims, y.B, reverse=True)
        B[h1] = chain.scale(hat.e) @ forward
        B[q.bar(h1)] = backward @ chain.inverse()
        for start in (h1, q.bar(h1)):
            h = start
            for _ in range(a.d_arrow(start) - 1):
                nxt = a.arrow(h)
                B[nxt] = c[q.tgt(h)] @ B[h] @ c[q.src(h)].inverse()
                h = nxt
    return AdhmDatum(q, dict(ctx.v), dict(ctx.w), B, Gamma, Delta, ctx.field_order)


def rho_decomposition(ctx: FoldContext, dec: Decomposition, h: GroupElement) -> GroupElement:
    """The element of G_V induced by h in G_{V~}."""
    g = g_decomposition(ctx, dec)
    c = _twists(ctx, g)
    blocks = {}
    for i in ctx.split.representatives:
        pieces = [h.blocks[(i, p)] for p in ctx.exponents(i)]
        blocks[i] = Matrix.block_diagonal(pieces)
        j = i
        for _ in range(ctx.aut.d_vertex(i) - 1):
            blocks[ctx.aut.vertex(j)] = c[j] @ blocks[j] @ c[j].inverse()
            j = ctx.aut.vertex(j)
    return GroupElement("V", blocks)


def rho_w(ctx: FoldContext, alpha: GroupElement) -> GroupElement:
    """The theta-fixed element of G_W whose restrictions to the W_{i,p} are alpha."""
    blocks = {}
    for i in ctx.split.representatives:
        pieces = [alpha.blocks[(i, p)] for p in ctx.exponents(i)]
        basis = ctx.w_basis[i]
        blocks[i] = basis @ Matrix.block_diagonal(pieces) @ basis.inverse()
        j = i
        for _ in range(ctx.aut.d_vertex(i) - 1):
            nxt = ctx.aut.vertex(j)
            blocks[nxt] = ctx.sigma[j] @ blocks[j] @ ctx.sigma[j].inverse()
            j = nxt
    return GroupElement("W", blocks)


# ---------------------------------------------------------- classification


@dataclass
class NotFixed:
    reason: str

    def __bool__(self):
        return False


@dataclass
class FixedPointClass:
    decomposition: Decomposition
    g: GroupElement
    normalizer: GroupElement
    representative: AdhmDatum
    preimage: AdhmDatum


def classify_fixed(ctx: FoldContext, x: AdhmDatum) -> FixedPointClass | NotFixed:
    """Decide whether the orbit of the stable point x is theta-stable and,
    if so, find its component and a split-quotient preimage."""
    q, a, sq = ctx.quiver, ctx.aut, ctx.split
    g = transporter(theta(ctx, x), x)
    if g is None:
        return NotFixed("no element of G_V carries theta(x) to x")
    c = _twists(ctx, g)
    dims, bases = {}, {}
    for i in sq.representatives:
        tau = _chain(ctx, c, i, a.d_vertex(i))
        columns = []
        for p in ctx.exponents(i):
            space = eigenspace(tau, ctx.root(p))
            dims[(i, p)] = len(space)
            columns.extend(space)
        if len(columns) != ctx.v[i]:
            return NotFixed(f"tau at {i!r} does not split into eigenspaces")
        bases[i] = Matrix.block([columns]) if columns else Matrix.identity(0)
    dec = Decomposition.from_dict(dims)
    h = {}
    for i in sq.representatives:
        h[i] = bases[i].inverse()
        j = i
        for _ in range(a.d_vertex(i) - 1):
            nxt = a.vertex(j)
            h[nxt] = ctx.phi[j] @ h[j] @ ctx.phi[j].inverse() @ g.blocks[nxt].inverse()
            j = nxt
    normalizer = GroupElement("V", h)
    xn = act(normalizer, x)
    gn = g_decomposition(ctx, dec)
    cn = _twists(ctx, gn)
    Gamma, Delta, B = {}, {}, {}
    for i in sq.representatives:
        basis = ctx.w_basis[i]
        gamma = (xn.Gamma[i] @ basis).scale(field_constant(ctx.field_order, 1) / sq.e(i))
        delta = basis.inverse() @ xn.Delta[i]
        v_off = _offsets(ctx, dims, i)
        w_off = _offsets(ctx, ctx.w_split, i)
        for p in ctx.exponents(i):
            Gamma[(i, p)] = gamma.submatrix(range(*v_off[p]), range(*w_off[p]))
            Delta[(i, p)] = delta.submatrix(range(*w_off[p]), range(*v_off[p]))
    for h1, f in ctx.edge_reps.items():
        hat = sq.hat_arrows[sq.arrow_hat[h1]]
        chain = _chain(ctx, cn, hat.tgt, f)
        forward = (chain.inverse() @ xn.B[h1]).scale(field_constant(ctx.field_order, 1) / hat.e)
        backward = xn.B[q.bar(h1)] @ chain
        B.update(_read_hat_blocks(ctx, hat, dims, forward, reverse=False))
        B.update(_read_hat_blocks(ctx, hat, dims, backward, reverse=True))
    y = AdhmDatum(sq.split, dims, dict(ctx.w_split), B, Gamma, Delta, ctx.field_order)
    if psi_embed(ctx, dec, y) != xn:
        return NotFixed("normalized point is not in the image of the embedding")
    return FixedPointClass(dec, g, normalizer, xn, y)


# ------------------------------------------------------------- similitudes


def is_theta_similitude(ctx: FoldContext, alpha: GroupElement):
    """The scalar lambda with theta(alpha) = lambda alpha, or None."""
    image = theta_group(ctx, alpha)
    ratio = None
    for i in sorted(ctx.quiver.vertices, key=id_key):
        a_i = alpha.blocks[i]
        for r in range(a_i.rows):
            for col in range(a_i.cols):
                if a_i[r, col]:
                    ratio = image.blocks[i][r, col] / a_i[r, col]
                    break
            if ratio is not None:
                break
        if ratio is not None:
            break
    if ratio is None:
        ratio = field_constant(ctx.field_order, 1)
    for i in ctx.quiver.vertices:
        if image.blocks[i] != alpha.blocks[i].scale(ratio):
            return None
    return ratio


def root_exponent(ctx: FoldContext, value) -> int | None:
    for m in range(ctx.period):
        if ctx.root(m) == value:
            return m
    return None


def component_permutation(ctx: FoldContext, lam) -> dict:
    """Map each v~ in D(v) to v~' with v'_{i, zeta} = v_{i, zeta lambda^(-d_i)}."""
    m = root_exponent(ctx, lam)
    if m is None:
        raise ValueError("lambda is not a root of unity of the period")
    n = ctx.period
    result = {}
    for dec in enumerate_decompositions(ctx):
        dims = dec.as_dict()
        moved = {(i, p): dims[(i, (p - m * ctx.split.d(i)) % n)] for (i, p) in dims}
        result[dec] = Decomposition.from_dict(moved)
    return result


def _twisted_fixed_space(composite: Matrix, scalar) -> list[Matrix]:
    """Basis of {X : composite X composite^-1 = scalar X}."""
    size = composite.rows
    inv = composite.inverse()
    columns = []
    for r in range(size):
        for c in range(size):
            unit = Matrix.zeros(size, size).with_entry(r, c, ONE)
            image = composite @ unit @ inv - unit.scale(scalar)
            columns.append([image[s, t] for s in range(size) for t in range(size)])
    operator = Matrix(size * size, size * size,
                      [[columns[col][row] for col in range(size * size)]
                       for row in range(size * size)])
    return [Matrix(size, size, [[vec[s * size + t, 0] for t in range(size)] for s in range(size)])
            for vec in operator.kernel()]


def random_similitude(ctx: FoldContext, rng, lam, bound: int = 3,
                      max_retries: int = 50) -> GroupElement | None:
    """A random alpha in G_W with theta(alpha) = lam alpha, or None if the
    draws never produced an invertible element."""
    a = ctx.aut
    blocks = {}
    for i in ctx.split.representatives:
        d = a.d_vertex(i)
        basis = _twisted_fixed_space(ctx.sigma_composite(i), power(lam, d))
        found = None
        for _ in range(max_retries):
            total = Matrix.zeros(ctx.w[i], ctx.w[i])
            for b in basis:
                total = total + b.scale(int(rng.integers(-bound, bound + 1)))
            if total.is_invertible():
                found = total
                break
        if found is None:
            return None
        blocks[i] = found
        j = i
        for _ in range(d - 1):
            nxt = a.vertex(j)
            blocks[nxt] = (ctx.sigma[j] @ blocks[j] @ ctx.sigma[j].inverse()).scale(ONE / lam)
            j = nxt
    return GroupElement("W", blocks)
