"""ADHM data (B_h, Gamma_i, Delta_i) on a quiver: relations, stability, group actions."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .exactmath import (
    ONE,
    ZERO,
    AffineSolutionSet,
    Matrix,
    make_rng,
    random_invertible,
    random_matrix,
    solve_sparse,
)
from .quiver import Quiver


@dataclass
class AdhmDatum:
    quiver: Quiver
    v: dict
    w: dict
    B: dict
    Gamma: dict
    Delta: dict
    field_order: int = 2

    def __post_init__(self):
        problems = self.shape_problems()
        if problems:
            raise ValueError("; ".join(problems))

    def shape_problems(self) -> list[str]:
        q = self.quiver
        problems = []
        for i in q.vertices:
            if i not in self.v or i not in self.w:
                problems.append(f"dimensions missing at vertex {i!r}")
                continue
            gamma, delta = self.Gamma.get(i), self.Delta.get(i)
            if gamma is None or gamma.shape != (self.v[i], self.w[i]):
                problems.append(f"Gamma at {i!r} should be {self.v[i]}x{self.w[i]}")
            if delta is None or delta.shape != (self.w[i], self.v[i]):
                problems.append(f"Delta at {i!r} should be {self.w[i]}x{self.v[i]}")
        for h in q.arrows:
            b = self.B.get(h.id)
            if b is None or b.shape != (self.v.get(h.tgt), self.v.get(h.src)):
                problems.append(f"B at {h.id!r} has the wrong shape")
        return problems

    @classmethod
    def zero(cls, quiver: Quiver, v: dict, w: dict, field_order: int = 2) -> "AdhmDatum":
        return cls(
            quiver, dict(v), dict(w),
            {h.id: Matrix.zeros(v[h.tgt], v[h.src]) for h in quiver.arrows},
            {i: Matrix.zeros(v[i], w[i]) for i in quiver.vertices},
            {i: Matrix.zeros(w[i], v[i]) for i in quiver.vertices},
            field_order,
        )

    def replace(self, B=None, Gamma=None, Delta=None) -> "AdhmDatum":
        return AdhmDatum(self.quiver, self.v, self.w,
                         dict(self.B if B is None else B),
                         dict(self.Gamma if Gamma is None else Gamma),
                         dict(self.Delta if Delta is None else Delta),
                         self.field_order)

    def __eq__(self, other):
        if not isinstance(other, AdhmDatum):
            return NotImplemented
        return (self.v == other.v and self.w == other.w
                and all(self.B[h] == other.B[h] for h in self.B)
                and all(self.Gamma[i] == other.Gamma[i] for i in self.Gamma)
                and all(self.Delta[i] == other.Delta[i] for i in self.Delta))

    __hash__ = None

    def total_dimension(self) -> int:
        return sum(self.v.values())


@dataclass
class GroupElement:
    """An element of G_V (kind "V") or G_W (kind "W"), one block per vertex."""

    kind: str
    blocks: dict

    def __post_init__(self):
        if self.kind not in ("V", "W"):
            raise ValueError("group kind must be 'V' or 'W'")

    @classmethod
    def identity(cls, kind: str, dims: dict) -> "GroupElement":
        return cls(kind, {i: Matrix.identity(d) for i, d in dims.items()})

    def inverse(self) -> "GroupElement":
        return GroupElement(self.kind, {i: b.inverse() for i, b in self.blocks.items()})

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if self.kind != other.kind:
            raise ValueError("cannot compose elements of different groups")
        return GroupElement(self.kind, {i: self.blocks[i] @ other.blocks[i] for i in self.blocks})

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.kind == other.kind and self.blocks.keys() == other.blocks.keys() and all(
            self.blocks[i] == other.blocks[i] for i in self.blocks)

    __hash__ = None

    def is_identity(self) -> bool:
        return all(b == Matrix.identity(b.rows) for b in self.blocks.values())


def act(g: GroupElement, x: AdhmDatum) -> AdhmDatum:
    """G_V: (g_t B g_s^-1, g Gamma, Delta g^-1).  G_W: (B, Gamma a^-1, a Delta)."""
    inverses = {i: b.inverse() for i, b in g.blocks.items()}
    q = x.quiver
    if g.kind == "V":
        B = {h.id: g.blocks[h.tgt] @ x.B[h.id] @ inverses[h.src] for h in q.arrows}
        Gamma = {i: g.blocks[i] @ x.Gamma[i] for i in q.vertices}
        Delta = {i: x.Delta[i] @ inverses[i] for i in q.vertices}
        return x.replace(B=B, Gamma=Gamma, Delta=Delta)
    Gamma = {i: x.Gamma[i] @ inverses[i] for i in q.vertices}
    Delta = {i: g.blocks[i] @ x.Delta[i] for i in q.vertices}
    return x.replace(Gamma=Gamma, Delta=Delta)


def moment_residual(x: AdhmDatum) -> dict:
    q = x.quiver
    residual = {i: -(x.Gamma[i] @ x.Delta[i]) for i in q.vertices}
    for h in q.oriented_arrows:
        forward, backward = x.B[h.id], x.B[h.bar]
        residual[h.src] = residual[h.src] + backward @ forward
        residual[h.tgt] = residual[h.tgt] - forward @ backward
    return residual


def in_lambda(x: AdhmDatum) -> bool:
    return all(r.is_zero() for r in moment_residual(x).values())


def _span(columns: Sequence[Matrix], dim: int) -> Matrix:
    if not columns:
        return Matrix.zeros(dim, 0)
    return Matrix.block([list(columns)]).column_space()


def is_stable(x: AdhmDatum) -> bool:
    """True iff the images of all Gamma_i generate V under the B maps."""
    q = x.quiver
    spans = {i: _span([x.Gamma[i]], x.v[i]) for i in q.vertices}
    for _ in range(x.total_dimension() + 1):
        grown = False
        for h in q.arrows:
            s, t = h.src, h.tgt
            if spans[s].cols == 0:
                continue
            candidate = _span([spans[t], x.B[h.id] @ spans[s]], x.v[t])
            if candidate.cols > spans[t].cols:
                spans[t] = candidate
                grown = True
        if not grown:
            break
    return all(spans[i].cols == x.v[i] for i in q.vertices)


def _annihilator(basis: Matrix, dim: int) -> Matrix:
    """Rows spanning the functionals that vanish on the columns of basis."""
    if basis.cols == 0:
        return Matrix.identity(dim)
    vectors = basis.T.kernel()
    if not vectors:
        return Matrix.zeros(0, dim)
    return Matrix.block([vectors]).T


def is_nilpotent_datum(x: AdhmDatum) -> bool:
    """Every long enough path product of B's vanishes.

    K_r(i) = vectors of V_i killed by every path of length r; computed as
    iterated preimages, K_{r+1}(i) = intersection over h out of i of B_h^-1 K_r(t(h)).
    """
    q = x.quiver
    killed = {i: Matrix.zeros(x.v[i], 0) for i in q.vertices}
    for _ in range(x.total_dimension() + 1):
        if all(killed[i].cols == x.v[i] for i in q.vertices):
            return True
        constraints = {i: _annihilator(killed[i], x.v[i]) for i in q.vertices}
        updated = {}
        for i in q.vertices:
            rows = [constraints[h.tgt] @ x.B[h.id] for h in q.arrows if h.src == i]
            rows = [r for r in rows if r.rows]
            if not rows or x.v[i] == 0:
                updated[i] = Matrix.identity(x.v[i])
                continue
            kernel = Matrix.block([[r] for r in rows]).kernel()
            updated[i] = Matrix.block([kernel]) if kernel else Matrix.zeros(x.v[i], 0)
        if all(updated[i].cols == killed[i].cols for i in q.vertices):
            return all(killed[i].cols == x.v[i] for i in q.vertices)
        killed = updated
    return all(killed[i].cols == x.v[i] for i in q.vertices)


def in_lagrangian(x: AdhmDatum, dynkin_finite: bool) -> bool:
    if any(not d.is_zero() for d in x.Delta.values()):
        return False
    return dynkin_finite or is_nilpotent_datum(x)


def geodesic(q: Quiver, start, end) -> list:
    """Shortest vertex path in the underlying graph (unique on trees)."""
    if start == end:
        return [start]
    previous = {start: None}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in q.neighbours(i):
            if j not in previous:
                previous[j] = i
                queue.append(j)
    if end not in previous:
        raise ValueError(f"no path from {start!r} to {end!r}")
    path = [end]
    while path[-1] != start:
        path.append(previous[path[-1]])
    return path[::-1]


def path_product(x: AdhmDatum, waypoints: Sequence) -> Matrix:
    """B_{u0,u1} B_{u1,u2} ... along the geodesics joining the waypoints.

    B_{a,b} is the unique arrow b -> a, so the product maps V_last -> V_first.
    """
    q = x.quiver
    if not waypoints:
        raise ValueError("empty waypoint list")
    for point in waypoints:
        if not q.has_vertex(point):
            raise ValueError(f"unknown vertex {point!r}")
    route = [waypoints[0]]
    for a, b in zip(waypoints, waypoints[1:]):
        route.extend(geodesic(q, a, b)[1:])
    result = Matrix.identity(x.v[route[0]])
    for a, b in zip(route, route[1:]):
        arrows = q.arrows_between(b, a)
        if len(arrows) != 1:
            raise ValueError(f"step {b!r} -> {a!r} is not a unique arrow")
        result = result @ x.B[arrows[0]]
    return result


# ----------------------------------------------------------- linear systems


class _Unknowns:
    """Flat indexing of the entries of several unknown matrices."""

    def __init__(self):
        self.blocks: dict = {}
        self.count = 0

    def add(self, key, rows: int, cols: int):
        self.blocks[key] = (self.count, rows, cols)
        self.count += rows * cols

    def var(self, key, r: int, c: int) -> int:
        offset, _, cols = self.blocks[key]
        return offset + r * cols + c

    def matrix(self, key, values: Sequence) -> Matrix:
        offset, rows, cols = self.blocks[key]
        return Matrix(rows, cols, [[values[offset + r * cols + c] for c in range(cols)]
                                   for r in range(rows)])


def _new_equations(rows: int, cols: int) -> list[list[dict]]:
    return [[{} for _ in range(cols)] for _ in range(rows)]


def _add_unknown_times(eqs, unknowns: _Unknowns, key, right: Matrix, sign=ONE):
    """eqs += sign * U @ right, U the unknown matrix named key."""
    _, rows, inner = unknowns.blocks[key]
    for p in range(rows):
        for r in range(inner):
            var = unknowns.var(key, p, r)
            for qq, value in enumerate(right.data[r]):
                if value:
                    eq = eqs[p][qq]
                    eq[var] = eq.get(var, ZERO) + sign * value


def _add_times_unknown(eqs, left: Matrix, unknowns: _Unknowns, key, sign=ONE):
    """eqs += sign * left @ U."""
    _, inner, cols = unknowns.blocks[key]
    for p in range(left.rows):
        for r, value in enumerate(left.data[p]):
            if not value:
                continue
            for qq in range(cols):
                var = unknowns.var(key, r, qq)
                eq = eqs[p][qq]
                eq[var] = eq.get(var, ZERO) + sign * value


def _flatten(eqs, constant: Matrix | None = None):
    """(coeffs, rhs) pairs for eqs == constant."""
    out = []
    for p, row in enumerate(eqs):
        for qq, coeffs in enumerate(row):
            rhs = constant.data[p][qq] if constant is not None else ZERO
            out.append((coeffs, rhs))
    return out


# ----------------------------------------------------------------- sampling


@dataclass
class SampleFailure:
    reason: str
    attempts: int
    diagnostics: list = field(default_factory=list)

    def __bool__(self):
        return False


def sample_point(q: Quiver, v: dict, w: dict, seed: int, *, delta_zero: bool = False,
                 require_stable: bool = False, max_retries: int = 50, bound: int = 3,
                 field_order: int = 2) -> AdhmDatum | SampleFailure:
    """A point of Lambda(V, W) with small integer forward maps and Gamma.

    Each relation is linear in the backward maps and Delta, so those are
    solved for exactly and shifted by a random kernel element.  After the
    first attempt the forward maps get random rank: stable points often sit
    where some forward map degenerates.
    """
    diagnostics = []
    for attempt in range(max_retries):
        rng = make_rng(seed, attempt)
        forward = {h.id: _forward_map(rng, v[h.tgt], v[h.src], bound, attempt > 0)
                   for h in q.oriented_arrows}
        gamma = {i: random_matrix(rng, v[i], w[i], bound) for i in q.vertices}
        unknowns = _Unknowns()
        for h in q.oriented_arrows:
            unknowns.add(("B", h.bar), v[h.src], v[h.tgt])
        if not delta_zero:
            for i in q.vertices:
                unknowns.add(("Delta", i), w[i], v[i])
        equations = []
        for i in q.vertices:
            eqs = _new_equations(v[i], v[i])
            for h in q.oriented_arrows:
                if h.src == i:
                    _add_unknown_times(eqs, unknowns, ("B", h.bar), forward[h.id])
                if h.tgt == i:
                    _add_times_unknown(eqs, forward[h.id], unknowns, ("B", h.bar), -ONE)
            if not delta_zero:
                _add_times_unknown(eqs, gamma[i], unknowns, ("Delta", i), -ONE)
            equations.extend(_flatten(eqs))
        solution = solve_sparse(equations, unknowns.count)
        if solution is None:
            diagnostics.append(f"attempt {attempt}: inconsistent")
            continue
        particular, kernel = solution
        values = list(particular)
        for vec in kernel:
            c = int(rng.integers(-bound, bound + 1))
            if c:
                values = [a + c * b for a, b in zip(values, vec)]
        B = dict(forward)
        for h in q.oriented_arrows:
            B[h.bar] = unknowns.matrix(("B", h.bar), values)
        if delta_zero:
            delta = {i: Matrix.zeros(w[i], v[i]) for i in q.vertices}
        else:
            delta = {i: unknowns.matrix(("Delta", i), values) for i in q.vertices}
        x = AdhmDatum(q, dict(v), dict(w), B, gamma, delta, field_order)
        if require_stable and not is_stable(x):
            diagnostics.append(f"attempt {attempt}: unstable")
            continue
        return x
    return SampleFailure("no stable point found" if require_stable else "no consistent system",
                         max_retries, diagnostics)


def _forward_map(rng, rows: int, cols: int, bound: int, random_rank: bool) -> Matrix:
    if not random_rank:
        return random_matrix(rng, rows, cols, bound)
    rank = int(rng.integers(0, min(rows, cols) + 1))
    return random_matrix(rng, rows, rank, bound) @ random_matrix(rng, rank, cols, bound)


def random_group_element(rng, kind: str, dims: dict, bound: int = 3) -> GroupElement:
    return GroupElement(kind, {i: random_invertible(rng, d, bound) for i, d in dims.items()})


# -------------------------------------------------------------- transporter


def _transporter_system(x: AdhmDatum, y: AdhmDatum):
    if x.v != y.v or x.w != y.w:
        raise ValueError("transporter needs equal dimension vectors")
    q = x.quiver
    unknowns = _Unknowns()
    for i in q.vertices:
        unknowns.add(i, x.v[i], x.v[i])
    equations = []
    for h in q.arrows:
        # g_t x.B = y.B g_s
        eqs = _new_equations(x.v[h.tgt], x.v[h.src])
        _add_unknown_times(eqs, unknowns, h.tgt, x.B[h.id])
        _add_times_unknown(eqs, y.B[h.id], unknowns, h.src, -ONE)
        equations.extend(_flatten(eqs))
    for i in q.vertices:
        # g x.Gamma = y.Gamma
        eqs = _new_equations(x.v[i], x.w[i])
        _add_unknown_times(eqs, unknowns, i, x.Gamma[i])
        equations.extend(_flatten(eqs, y.Gamma[i]))
        # y.Delta g = x.Delta
        eqs = _new_equations(x.w[i], x.v[i])
        _add_times_unknown(eqs, y.Delta[i], unknowns, i)
        equations.extend(_flatten(eqs, x.Delta[i]))
    return unknowns, equations


def transporter_solutions(x: AdhmDatum, y: AdhmDatum) -> AffineSolutionSet | None:
    """All (g_i), invertible or not, solving the equations of g . x = y."""
    unknowns, equations = _transporter_system(x, y)
    solution = solve_sparse(equations, unknowns.count)
    if solution is None:
        return None
    particular, kernel = solution
    return AffineSolutionSet(Matrix.column(particular), tuple(Matrix.column(k) for k in kernel))


def transporter(x: AdhmDatum, y: AdhmDatum) -> GroupElement | None:
    """The unique g in G_V with g . x = y, or None."""
    unknowns, equations = _transporter_system(x, y)
    solution = solve_sparse(equations, unknowns.count)
    if solution is None:
        return None
    particular, kernel = solution
    if kernel:
        return None
    blocks = {i: unknowns.matrix(i, particular) for i in x.quiver.vertices}
    if not all(b.is_invertible() for b in blocks.values()):
        return None
    return GroupElement("V", blocks)


def tangent_dimension(x: AdhmDatum) -> int:
    """dim ker(d mu at x) - dim G_V, with mu the moment map."""
    q = x.quiver
    unknowns = _Unknowns()
    for h in q.arrows:
        unknowns.add(("B", h.id), x.v[h.tgt], x.v[h.src])
    for i in q.vertices:
        unknowns.add(("Gamma", i), x.v[i], x.w[i])
        unknowns.add(("Delta", i), x.w[i], x.v[i])
    equations = []
    for i in q.vertices:
        eqs = _new_equations(x.v[i], x.v[i])
        for h in q.oriented_arrows:
            if h.src == i:
                _add_unknown_times(eqs, unknowns, ("B", h.bar), x.B[h.id])
                _add_times_unknown(eqs, x.B[h.bar], unknowns, ("B", h.id))
            if h.tgt == i:
                _add_unknown_times(eqs, unknowns, ("B", h.id), x.B[h.bar], -ONE)
                _add_times_unknown(eqs, x.B[h.id], unknowns, ("B", h.bar), -ONE)
        _add_unknown_times(eqs, unknowns, ("Gamma", i), x.Delta[i], -ONE)
        _add_times_unknown(eqs, x.Gamma[i], unknowns, ("Delta", i), -ONE)
        equations.extend(_flatten(eqs))
    _, kernel = solve_sparse(equations, unknowns.count)
    return len(kernel) - sum(d * d for d in x.v.values())
