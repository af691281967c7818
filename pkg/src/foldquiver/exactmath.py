"""Exact scalars and small dense matrices.

Rationals are ``gmpy2.mpq``.  Elements of a cyclotomic field Q(zeta_N) with
N >= 3 are :class:`Cyclotomic`; for N in {1, 2} the field is Q itself and
plain rationals are used, so the common A/D computations never pay for the
polynomial representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)

# Coefficients of the N-th cyclotomic polynomial, lowest degree first.
CYCLOTOMIC_POLYNOMIALS: dict[int, tuple[int, ...]] = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    7: (1, 1, 1, 1, 1, 1, 1),
    8: (1, 0, 0, 0, 1),
    9: (1, 0, 0, 1, 0, 0, 1),
    10: (1, -1, 1, -1, 1),
    11: (1,) * 11,
    12: (1, 0, -1, 0, 1),
}


def rational(value) -> mpq:
    """Coerce ints, Fractions, mpq or "p/q" strings to mpq."""
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def cyclotomic_polynomial(order: int) -> tuple[int, ...]:
    try:
        return CYCLOTOMIC_POLYNOMIALS[order]
    except KeyError:
        raise ValueError(f"field order {order} outside the supported range 1..12") from None


class Cyclotomic:
    """An element of Q[x]/(Phi_N(x)), stored as a tuple of mpq coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence):
        degree = len(cyclotomic_polynomial(order)) - 1
        values = [rational(c) for c in coeffs]
        if len(values) > degree:
            values = _reduce_mod(values, order)
        values += [ZERO] * (degree - len(values))
        self.order = order
        self.coeffs = tuple(values)

    @classmethod
    def constant(cls, order: int, value) -> "Cyclotomic":
        return cls(order, [rational(value)])

    def _coerce(self, other) -> "Cyclotomic | None":
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                raise ValueError(f"mixing fields of order {self.order} and {other.order}")
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(ZERO):
            return Cyclotomic.constant(self.order, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Cyclotomic(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Cyclotomic(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        product[i + j] += a * b
        return Cyclotomic(self.order, product)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if not self:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        degree = len(self.coeffs)
        # Column c of the multiplication matrix is self * x^c.
        columns = []
        power = Cyclotomic(self.order, [ONE])
        x = Cyclotomic(self.order, [ZERO, ONE]) if degree > 1 else power
        for _ in range(degree):
            columns.append((self * power).coeffs)
            power = power * x
        mult = Matrix(degree, degree, [[columns[c][r] for c in range(degree)] for r in range(degree)])
        target = Matrix(degree, 1, [[ONE]] + [[ZERO] for _ in range(degree - 1)])
        solution = solve_linear(mult, target)
        return Cyclotomic(self.order, [solution.particular[r, 0] for r in range(degree)])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        base = self if exponent >= 0 else self.inverse()
        result = Cyclotomic(self.order, [ONE])
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Cyclotomic) and other.order != self.order:
            return False
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __repr__(self):
        return f"Cyclotomic({self.order}, [{', '.join(str(c) for c in self.coeffs)}])"


def _reduce_mod(values: list, order: int) -> list:
    modulus = cyclotomic_polynomial(order)
    degree = len(modulus) - 1
    values = list(values)
    # Phi_N is monic, so long division needs no inverses.
    for top in range(len(values) - 1, degree - 1, -1):
        lead = values[top]
        if lead:
            shift = top - degree
            for i, m in enumerate(modulus):
                if m:
                    values[shift + i] -= lead * m
    return values[:degree]


def root_of_unity(order: int, exponent: int = 1):
    """zeta_order ** exponent, as mpq when the field is Q."""
    exponent %= order
    if order == 1:
        return ONE
    if order == 2:
        return ONE if exponent == 0 else -ONE
    return Cyclotomic(order, [ZERO] * exponent + [ONE])


def field_constant(order: int, value):
    return rational(value) if order <= 2 else Cyclotomic.constant(order, value)


def is_rational(value) -> bool:
    return not isinstance(value, Cyclotomic) or value.is_rational()


def power(value, exponent: int):
    if exponent >= 0:
        return value ** exponent
    return ONE / (value ** (-exponent))


class Matrix:
    """Dense matrix of exact scalars; treated as immutable."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: list[list] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [[ZERO] * cols for _ in range(rows)]
        elif len(data) != rows or any(len(row) != cols for row in data):
            raise ValueError(f"data does not have shape {rows}x{cols}")
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, size: int) -> "Matrix":
        return cls.diagonal([ONE] * size)

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        size = len(entries)
        data = [[ZERO] * size for _ in range(size)]
        for i, e in enumerate(entries):
            data[i][i] = e
        return cls(size, size, data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = [[_as_scalar(e) for e in row] for row in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def column(cls, entries: Sequence) -> "Matrix":
        return cls(len(entries), 1, [[_as_scalar(e)] for e in entries])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every block row must agree on heights."""
        data: list[list] = []
        cols = sum(b.cols for b in blocks[0]) if blocks else 0
        for block_row in blocks:
            heights = {b.rows for b in block_row}
            if len(heights) > 1:
                raise ValueError("blocks in one row have different heights")
            if sum(b.cols for b in block_row) != cols:
                raise ValueError("block rows have different widths")
            height = heights.pop() if heights else 0
            for r in range(height):
                row: list = []
                for b in block_row:
                    row.extend(b.data[r])
                data.append(row)
        return cls(len(data), cols, data)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        result = cls(rows, cols)
        r0 = c0 = 0
        for b in blocks:
            for r in range(b.rows):
                result.data[r0 + r][c0:c0 + b.cols] = b.data[r]
            r0 += b.rows
            c0 += b.cols
        return result

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key):
        r, c = key
        return self.data[r][c]

    def entries(self) -> list:
        return [e for row in self.data for e in row]

    def copy_data(self) -> list[list]:
        return [list(row) for row in self.data]

    def with_entry(self, r: int, c: int, value) -> "Matrix":
        data = self.copy_data()
        data[r][c] = value
        return Matrix(self.rows, self.cols, data)

    def submatrix(self, row_range: Sequence[int], col_range: Sequence[int]) -> "Matrix":
        return Matrix(len(row_range), len(col_range),
                      [[self.data[r][c] for c in col_range] for r in row_range])

    def _check_same_shape(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols,
                      [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols,
                      [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [[-a for a in row] for row in self.data])

    def scale(self, factor) -> "Matrix":
        return Matrix(self.rows, self.cols, [[factor * a for a in row] for row in self.data])

    def __mul__(self, factor) -> "Matrix":
        if isinstance(factor, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(factor)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        other_cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        data = []
        for row in self.data:
            nonzero = [(k, a) for k, a in enumerate(row) if a]
            out = []
            for col in other_cols:
                acc = ZERO
                for k, a in nonzero:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                out.append(acc)
            data.append(out)
        return Matrix(self.rows, other.cols, data)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [list(col) for col in zip(*self.data)] if self.rows
                      else [[] for _ in range(self.cols)])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(a for row in self.data for a in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self):
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        total = ZERO
        for i in range(self.rows):
            total = total + self.data[i][i]
        return total

    def map(self, fn) -> "Matrix":
        return Matrix(self.rows, self.cols, [[fn(a) for a in row] for row in self.data])

    def power(self, exponent: int) -> "Matrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if exponent < 0:
            return self.inverse().power(-exponent)
        result = Matrix.identity(self.rows)
        base = self
        while exponent:
            if exponent & 1:
                result = result @ base
            exponent >>= 1
            if exponent:
                base = base @ base
        return result

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns (first nonzero pivot)."""
        data = self.copy_data()
        pivots: list[int] = []
        row = 0
        for col in range(self.cols):
            pivot = next((r for r in range(row, self.rows) if data[r][col]), None)
            if pivot is None:
                continue
            data[row], data[pivot] = data[pivot], data[row]
            lead = data[row][col]
            if lead != ONE:
                inv = ONE / lead
                data[row] = [a * inv for a in data[row]]
            for r in range(self.rows):
                if r != row:
                    factor = data[r][col]
                    if factor:
                        data[r] = [a - factor * b for a, b in zip(data[r], data[row])]
            pivots.append(col)
            row += 1
            if row == self.rows:
                break
        return Matrix(self.rows, self.cols, data), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list["Matrix"]:
        """Basis of the right null space, as column matrices."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            vec = [ZERO] * self.cols
            vec[free] = ONE
            for r, p in enumerate(pivots):
                vec[p] = -reduced.data[r][free]
            basis.append(Matrix.column(vec))
        return basis

    def column_space(self) -> "Matrix":
        """Matrix whose columns form a basis of the column space."""
        _, pivots = self.rref()
        return self.submatrix(range(self.rows), pivots)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        size = self.rows
        augmented = Matrix.block([[self, Matrix.identity(size)]])
        reduced, pivots = augmented.rref()
        if pivots[:size] != list(range(size)):
            raise ZeroDivisionError("matrix is singular")
        return reduced.submatrix(range(size), range(size, 2 * size))

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def __repr__(self):
        return f"Matrix({self.rows}, {self.cols}, {[[str(a) for a in row] for row in self.data]})"


def _as_scalar(value):
    if isinstance(value, (Cyclotomic,)) or type(value) is type(ZERO):
        return value
    return rational(value)


def commutator(x: Matrix, y: Matrix) -> Matrix:
    return x @ y - y @ x


def kron(a: Matrix, b: Matrix) -> Matrix:
    data = []
    for ra in a.data:
        for rb in b.data:
            data.append([x * y for x in ra for y in rb])
    return Matrix(a.rows * b.rows, a.cols * b.cols, data)


# ---------------------------------------------------------------- solving


@dataclass(frozen=True)
class AffineSolutionSet:
    """{particular + sum c_i kernel[i]}; vectors are column matrices."""

    particular: Matrix
    kernel: tuple[Matrix, ...]

    def is_unique(self) -> bool:
        return not self.kernel


def solve_linear(a: Matrix, b: Matrix) -> AffineSolutionSet | None:
    """All x with a @ x = b (b a single column), or None if inconsistent."""
    if a.rows != b.rows:
        raise ValueError(f"A has {a.rows} rows but b has {b.rows}")
    if b.cols != 1:
        raise ValueError("b must be a single column")
    equations = []
    for r in range(a.rows):
        equations.append(({c: v for c, v in enumerate(a.data[r]) if v}, b.data[r][0]))
    solution = solve_sparse(equations, a.cols)
    if solution is None:
        return None
    particular, kernel = solution
    return AffineSolutionSet(Matrix.column(particular), tuple(Matrix.column(k) for k in kernel))


def solve_sparse(equations: Iterable[tuple[dict, object]], num_vars: int):
    """Solve sum_v coeffs[v] * x_v = rhs for each (coeffs, rhs).

    Returns (particular, kernel_basis) as lists of scalars, or None when the
    system is inconsistent.  Elimination keeps every stored row fully
    reduced against the other pivots, so solutions read off directly.
    """
    pivot_rows: dict[int, tuple[dict, object]] = {}
    # var -> pivots whose row mentions var, for cheap back-elimination
    mentions: dict[int, set[int]] = {}
    for coeffs, rhs in equations:
        row = {v: c for v, c in coeffs.items() if c}
        const = rhs
        for v in [v for v in row if v in pivot_rows]:
            factor = row.get(v)
            if not factor:
                continue
            prow, pconst = pivot_rows[v]
            for w, c in prow.items():
                value = row.get(w, ZERO) - factor * c
                if value:
                    row[w] = value
                else:
                    row.pop(w, None)
            const = const - factor * pconst
        if not row:
            if const:
                return None
            continue
        pivot = min(row)
        lead = row[pivot]
        if lead != ONE:
            inv = ONE / lead
            row = {w: c * inv for w, c in row.items()}
            const = const * inv
        for other in list(mentions.get(pivot, ())):
            orow, oconst = pivot_rows[other]
            factor = orow.get(pivot)
            if not factor:
                continue
            for w, c in row.items():
                value = orow.get(w, ZERO) - factor * c
                if value:
                    orow[w] = value
                    if w != other:
                        mentions.setdefault(w, set()).add(other)
                else:
                    orow.pop(w, None)
            pivot_rows[other] = (orow, oconst - factor * const)
        mentions.pop(pivot, None)
        pivot_rows[pivot] = (row, const)
        for w in row:
            if w != pivot:
                mentions.setdefault(w, set()).add(pivot)
    particular = [ZERO] * num_vars
    for p, (row, const) in pivot_rows.items():
        particular[p] = const
    kernel = []
    free_vars = [v for v in range(num_vars) if v not in pivot_rows]
    for f in free_vars:
        vec = [ZERO] * num_vars
        vec[f] = ONE
        for p in mentions.get(f, ()):
            coeff = pivot_rows[p][0].get(f)
            if coeff:
                vec[p] = -coeff
        kernel.append(vec)
    return particular, kernel


def eigenspace(m: Matrix, value) -> list[Matrix]:
    """Basis of ker(m - value * I)."""
    if not m.is_square():
        raise ValueError("eigenspace of a non-square matrix")
    return (m - Matrix.identity(m.rows).scale(value)).kernel()


def is_nilpotent(x: Matrix) -> bool:
    if not x.is_square():
        raise ValueError("nilpotency of a non-square matrix")
    return x.power(x.rows).is_zero()


# ------------------------------------------------------------- partitions


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts if p)
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be positive")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts {parts} are not weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > i) for i in range(self.parts[0])))

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def jordan_type_nilpotent(x: Matrix) -> Partition:
    """Jordan type from the rank sequence: column j of the conjugate has
    rank(x^(j-1)) - rank(x^j) boxes."""
    if not is_nilpotent(x):
        raise ValueError("matrix is not nilpotent")
    ranks = [x.rows]
    current = Matrix.identity(x.rows)
    while ranks[-1]:
        current = current @ x
        ranks.append(current.rank())
    conjugate = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    return Partition(tuple(conjugate)).conjugate()


def dominance_leq(lam: Partition, mu: Partition) -> bool:
    if lam.total != mu.total:
        raise ValueError(f"partitions of different integers: {lam.total} vs {mu.total}")
    length = max(len(lam.parts), len(mu.parts))
    a = list(lam.parts) + [0] * (length - len(lam.parts))
    b = list(mu.parts) + [0] * (length - len(mu.parts))
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb:
            return False
    return True


# ------------------------------------------------------------- randomness


def make_rng(seed: int, *labels: int) -> np.random.Generator:
    """Independent generator for the stream named by (seed, *labels)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(labels)))


def random_matrix(rng: np.random.Generator, rows: int, cols: int, bound: int = 3) -> Matrix:
    values = rng.integers(-bound, bound + 1, size=(rows, cols))
    return Matrix(rows, cols, [[mpq(int(v)) for v in row] for row in values])


def random_invertible(rng: np.random.Generator, size: int, bound: int = 3) -> Matrix:
    while True:
        m = random_matrix(rng, size, size, bound)
        if m.is_invertible():
            return m
