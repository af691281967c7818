"""Two-row Slodowy slices in sl_2n, their base-point triples and the
involution given by a (skew-)symmetric form."""

from __future__ import annotations

from dataclasses import dataclass

from .exactmath import (
    ONE,
    Matrix,
    Partition,
    commutator,
    dominance_leq,
    is_nilpotent,
    jordan_type_nilpotent,
    kron,
)

SYMMETRIC = "symmetric"
SKEW = "skew"


@dataclass(frozen=True)
class SliceSpec:
    n: int
    k: int
    signature: tuple | None = None  # (w+, w-) of sigma_n, required when k = n

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")
        if self.k == self.n:
            if self.signature is None or sum(self.signature) != 2 or min(self.signature) < 0:
                raise ValueError("k = n needs a signature (w+, w-) with w+ + w- = 2")
        elif self.signature is not None and tuple(self.signature) != (0, 0):
            raise ValueError("a signature only makes sense when k = n")

    @property
    def square(self) -> bool:
        """True in the k = n regime, where R = End(W_n) is 2x2."""
        return self.k == self.n

    @property
    def size(self) -> int:
        return 2 * self.n

    def w(self) -> dict:
        """The framing dimension vector on 1..2n-1."""
        n, k = self.n, self.k
        w = {i: 0 for i in range(1, 2 * n)}
        if self.square:
            w[n] = 2
        else:
            w[k] = w[2 * n - k] = 1
        return w

    def base_partition(self) -> Partition:
        return Partition((2 * self.n - self.k, self.k))


def e_matrix(size: int) -> Matrix:
    return Matrix.from_rows([[1 if c == r + 1 else 0 for c in range(size)] for r in range(size)]) \
        if size else Matrix.zeros(0, 0)


def h_matrix(size: int) -> Matrix:
    m = size - 1
    return Matrix.diagonal([m - 2 * r for r in range(size)])


def f_matrix(size: int) -> Matrix:
    # subdiagonal entries i(m+1-i), i = 1..m
    m = size - 1
    return Matrix.from_rows([[(c + 1) * (m - c) if r == c + 1 else 0 for c in range(size)]
                             for r in range(size)]) if size else Matrix.zeros(0, 0)


def over_ring(x: Matrix, square: bool) -> Matrix:
    """Replace every scalar entry c by c * 1_R."""
    return kron(x, Matrix.identity(2)) if square else x


@dataclass(frozen=True)
class Sl2Triple:
    E: Matrix
    H: Matrix
    F: Matrix

    def relation_defects(self) -> list[str]:
        problems = []
        if commutator(self.H, self.E) != self.E.scale(2):
            problems.append("[H,E] != 2E")
        if commutator(self.H, self.F) != self.F.scale(-2):
            problems.append("[H,F] != -2F")
        if commutator(self.E, self.F) != self.H:
            problems.append("[E,F] != H")
        return problems


def ring_triple(size: int, square: bool) -> Sl2Triple:
    return Sl2Triple(over_ring(e_matrix(size), square), over_ring(h_matrix(size), square),
                     over_ring(f_matrix(size), square))


def build_triple(spec: SliceSpec) -> Sl2Triple:
    n, k = spec.n, spec.k
    if spec.square:
        return ring_triple(n, True)
    small, large = ring_triple(k, False), ring_triple(2 * n - k, False)
    return Sl2Triple(Matrix.block_diagonal([small.E, large.E]),
                     Matrix.block_diagonal([small.H, large.H]),
                     Matrix.block_diagonal([small.F, large.F]))


def in_slice(spec: SliceSpec, x: Matrix) -> bool:
    if x.shape != (spec.size, spec.size):
        raise ValueError(f"expected a {spec.size}x{spec.size} matrix")
    if x.trace() != 0:
        raise ValueError("slice elements have trace zero")
    triple = build_triple(spec)
    return commutator(x - triple.E, triple.F).is_zero() and is_nilpotent(x)


def in_orbit_closure(x: Matrix, lam: Partition) -> bool:
    return dominance_leq(jordan_type_nilpotent(x), lam)


# ------------------------------------------------------------------- forms


@dataclass(frozen=True)
class BilinearForm:
    gram: Matrix
    kind: str

    def pair(self, u: Matrix, y: Matrix):
        return (u.T @ self.gram @ y)[0, 0]


def inner_form(signature: tuple) -> Matrix:
    """Gram matrix of (w, y)_n = <w, sigma_n y>_n in the sigma_n eigenbasis,
    with <,>_n normalised to [[0, 1], [-1, 0]]."""
    plus, minus = signature
    skew = Matrix.from_rows([[0, 1], [-1, 0]])
    return skew @ Matrix.diagonal([1] * plus + [-1] * minus)


def build_form(spec: SliceSpec) -> BilinearForm:
    n, k = spec.n, spec.k
    size = spec.size
    if spec.square:
        inner = inner_form(spec.signature)
        data = Matrix.zeros(size, size).copy_data()
        for i in range(1, n + 1):
            block = inner.scale((-1) ** (i - 1))
            r0, c0 = 2 * (i - 1), 2 * (n - i)
            for r in range(2):
                for c in range(2):
                    data[r0 + r][c0 + c] = block[r, c]
        gram = Matrix(size, size, data)
    else:
        data = Matrix.zeros(size, size).copy_data()
        for i in range(1, k + 1):
            data[i - 1][k - i] = ONE * (-1) ** (i - 1)
        big = 2 * n - k
        for i in range(1, big + 1):
            data[k + i - 1][k + big - i] = ONE * (-1) ** (n - k + i)
        gram = Matrix(size, size, data)
    if gram.T == gram:
        kind = SYMMETRIC
    elif gram.T == -gram:
        kind = SKEW
    else:
        raise AssertionError("form is neither symmetric nor skew")
    return BilinearForm(gram, kind)


def expected_form_kind(spec: SliceSpec) -> str:
    """The symmetry type read off from (k, n, signature) without building the form."""
    if not spec.square:
        return SKEW if spec.k % 2 == 0 else SYMMETRIC
    inner_symmetric = tuple(spec.signature) == (1, 1)
    same = spec.n % 2 == 1
    return SYMMETRIC if inner_symmetric == same else SKEW


def theta_big(form: BilinearForm, x: Matrix) -> Matrix:
    """Negative transpose of x with respect to the form."""
    return -(form.gram.inverse() @ x.T @ form.gram)


def labels_orbit(lam: Partition, kind: str) -> bool:
    """Whether lam is the Jordan type of some nilpotent in sp (skew) or so (symmetric)."""
    counts: dict = {}
    for part in lam.parts:
        counts[part] = counts.get(part, 0) + 1
    parity = 1 if kind == SKEW else 0
    return all(c % 2 == 0 for part, c in counts.items() if part % 2 == parity)


# ------------------------------------------------------------- nonemptiness


@dataclass(frozen=True)
class NonemptyReport:
    nonempty: bool
    s: tuple
    ell: int


def half_dims(n: int, v) -> list[int]:
    """v_1..v_n from a symmetric vector on 1..2n-1 (dict) or from v_1..v_n (sequence)."""
    if isinstance(v, dict):
        if any(v[i] != v[2 * n - i] for i in range(1, 2 * n)):
            raise ValueError("v must satisfy v_i = v_(2n-i)")
        return [v[i] for i in range(1, n + 1)]
    values = list(v)
    if len(values) == 2 * n - 1:
        if values != values[::-1]:
            raise ValueError("v must satisfy v_i = v_(2n-i)")
        values = values[:n]
    if len(values) != n:
        raise ValueError(f"expected v_1..v_{n}")
    return values


def s_values(spec: SliceSpec, v) -> tuple:
    half = half_dims(spec.n, v)
    s = []
    for i in range(1, spec.n + 1):
        if i == 1:
            s.append(1 - half[0])
        elif i <= spec.k:
            s.append(1 - half[i - 1] + half[i - 2])
        else:
            s.append(half[i - 2] - half[i - 1])
    return tuple(s)


def nonempty_typeA(spec: SliceSpec, v) -> NonemptyReport:
    s = s_values(spec, v)
    ell = sum(1 for value in s if value != 0)
    ok = all(value in (-1, 0, 1) for value in s) and ell <= spec.k
    return NonemptyReport(ok, s, ell)


def symmetric_dims(n: int, half: list[int]) -> dict:
    return {i: half[min(i, 2 * n - i) - 1] for i in range(1, 2 * n)}


def nonempty_dims(spec: SliceSpec, max_dim: int) -> list[tuple]:
    """All v_1..v_n with entries in 0..max_dim whose quiver variety is nonempty."""
    import itertools

    return [half for half in itertools.product(range(max_dim + 1), repeat=spec.n)
            if nonempty_typeA(spec, half).nonempty]
