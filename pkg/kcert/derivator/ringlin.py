"""
Exact linear algebra over the residue field k = F_p and the local rings
F_p[eps]/eps^2 and Z/p^2.

Scalars are stored as integer codes:

    field-Fp   0 .. p-1
    Z-mod-p2   0 .. p^2-1
    Fp-eps     a + p*b for the element a + b*eps

In both local rings the code of alpha is p, alpha*x only depends on x mod p,
and the residue map is ``code % p``.
"""
import enum
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import RingError, ShapeError

logger = logging.getLogger(__name__)


class RingKind(str, enum.Enum):
    FIELD = 'field-Fp'
    EPS = 'Fp-eps'
    ZP2 = 'Z-mod-p2'


def is_prime(p):
    if not isinstance(p, (int, np.integer)) or p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


@dataclass(frozen=True)
class RingSpec:
    kind: RingKind
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise RingError(f'{self.p} is not a prime')
        object.__setattr__(self, 'kind', RingKind(self.kind))
        object.__setattr__(self, 'p', int(self.p))

    def __str__(self):
        if self.kind is RingKind.FIELD:
            return f'F_{self.p}'
        if self.kind is RingKind.EPS:
            return f'F_{self.p}[eps]'
        return f'Z/{self.p * self.p}'

    @property
    def is_field(self):
        return self.kind is RingKind.FIELD

    @property
    def order(self):
        return self.p if self.is_field else self.p * self.p

    @property
    def alpha(self):
        if self.is_field:
            raise RingError(f'{self} has no distinguished element alpha')
        return self.p

    @property
    def unit_length(self):
        """Composition length of the ring as a module over itself."""
        return 1 if self.is_field else 2

    @cached_property
    def residue_field(self):
        return self if self.is_field else RingSpec(RingKind.FIELD, self.p)

    # Vectorized arithmetic on codes. Every method accepts ints or arrays.

    def normalize(self, x):
        return np.asarray(x, dtype=np.int64) % self.order

    def add(self, x, y):
        if self.kind is RingKind.EPS:
            p = self.p
            return (x % p + y % p) % p + p * ((x // p + y // p) % p)
        return (x + y) % self.order

    def neg(self, x):
        if self.kind is RingKind.EPS:
            p = self.p
            return (-(x % p)) % p + p * ((-(x // p)) % p)
        return (-x) % self.order

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.kind is RingKind.EPS:
            p = self.p
            a1, b1 = x % p, x // p
            a2, b2 = y % p, y // p
            return (a1 * a2) % p + p * ((a1 * b2 + b1 * a2) % p)
        return (x * y) % self.order

    def matmul(self, a, b):
        if self.kind is RingKind.EPS:
            p = self.p
            a1, b1 = a % p, a // p
            a2, b2 = b % p, b // p
            return (a1 @ a2) % p + p * ((a1 @ b2 + b1 @ a2) % p)
        return (a @ b) % self.order

    def is_unit(self, x):
        return x % self.p != 0

    def inverse(self, x):
        x = int(x)
        if not self.is_unit(x):
            raise RingError(f'{x} is not a unit in {self}')
        if self.kind is RingKind.EPS:
            p = self.p
            a, b = x % p, x // p
            ai = pow(a, -1, p)
            return ai + p * ((-b * ai * ai) % p)
        return pow(x, -1, self.order)

    def residue(self, x):
        return x % self.p

    def times_alpha(self, x):
        return self.alpha * (x % self.p)

    def divide_alpha(self, x):
        if np.any(x % self.p):
            raise RingError(f'{x} is not divisible by alpha in {self}')
        return x // self.p


def make_ring(kind, p):
    ring = RingSpec(RingKind(kind), p)
    logger.debug('Constructed ring %s', ring)
    return ring


@dataclass(frozen=True)
class Scalar:
    ring: RingSpec
    code: int

    def __post_init__(self):
        object.__setattr__(self, 'code', int(self.code) % self.ring.order)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingError(f'cannot combine {self.ring} with {other.ring}')
            return other.code
        return int(other) % self.ring.order

    def __add__(self, other):
        return Scalar(self.ring, self.ring.add(self.code, self._coerce(other)))

    def __sub__(self, other):
        return Scalar(self.ring, self.ring.sub(self.code, self._coerce(other)))

    def __mul__(self, other):
        return Scalar(self.ring, self.ring.mul(self.code, self._coerce(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.code))

    def __int__(self):
        return self.code

    @property
    def pair(self):
        """(a, b) for a + b*eps; only meaningful over F_p[eps]."""
        return self.code % self.ring.p, self.code // self.ring.p

    def is_unit(self):
        return bool(self.ring.is_unit(self.code))

    def inverse(self):
        return Scalar(self.ring, self.ring.inverse(self.code))

    def __str__(self):
        if self.ring.kind is RingKind.EPS:
            a, b = self.pair
            return f'{a}+{b}eps' if b else str(a)
        return str(self.code)


def residue(x):
    """The residue map q: R -> k on a scalar."""
    if x.ring.is_field:
        return x
    return Scalar(x.ring.residue_field, x.ring.residue(x.code))


class Matrix:
    """An immutable matrix of codes over one ring."""

    __slots__ = ('ring', 'data')

    def __init__(self, ring, data, shape=None):
        arr = np.array(data, dtype=np.int64)
        if shape is not None:
            arr = arr.reshape(shape)
        if arr.ndim != 2:
            raise ShapeError(f'expected a 2-d array, got shape {arr.shape}')
        arr = arr % ring.order
        arr.flags.writeable = False
        object.__setattr__(self, 'ring', ring)
        object.__setattr__(self, 'data', arr)

    def __setattr__(self, name, value):
        raise AttributeError('Matrix is immutable')

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, np.eye(n, dtype=np.int64))

    @classmethod
    def from_columns(cls, ring, rows, columns):
        if not columns:
            return cls.zeros(ring, rows, 0)
        return cls(ring, np.column_stack([np.asarray(c, dtype=np.int64) for c in columns]), shape=(rows, len(columns)))

    @classmethod
    def hstack(cls, ring, blocks, rows):
        arrays = [b.data for b in blocks if b.cols]
        if not arrays:
            return cls.zeros(ring, rows, 0)
        for b in blocks:
            _check_ring(ring, b)
            if b.rows != rows:
                raise ShapeError(f'cannot stack {b.shape} next to {rows} rows')
        return cls(ring, np.hstack(arrays))

    @classmethod
    def vstack(cls, ring, blocks, cols):
        arrays = [b.data for b in blocks if b.rows]
        if not arrays:
            return cls.zeros(ring, 0, cols)
        for b in blocks:
            _check_ring(ring, b)
            if b.cols != cols:
                raise ShapeError(f'cannot stack {b.shape} on {cols} columns')
        return cls(ring, np.vstack(arrays))

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @property
    def T(self):
        return Matrix(self.ring, self.data.T)

    def __getitem__(self, key):
        value = self.data[key]
        if np.ndim(value) == 2:
            return Matrix(self.ring, value)
        if np.ndim(value) == 0:
            return int(value)
        return value

    def _other(self, other):
        _check_ring(self.ring, other)
        if other.shape != self.shape:
            raise ShapeError(f'shape mismatch {self.shape} vs {other.shape}')
        return other.data

    def __add__(self, other):
        return Matrix(self.ring, self.ring.add(self.data, self._other(other)))

    def __sub__(self, other):
        return Matrix(self.ring, self.ring.sub(self.data, self._other(other)))

    def __neg__(self):
        return Matrix(self.ring, self.ring.neg(self.data))

    def __matmul__(self, other):
        _check_ring(self.ring, other)
        if self.cols != other.rows:
            raise ShapeError(f'cannot multiply {self.shape} by {other.shape}')
        if self.cols == 0:
            return Matrix.zeros(self.ring, self.rows, other.cols)
        return Matrix(self.ring, self.ring.matmul(self.data, other.data))

    def scale(self, code):
        return Matrix(self.ring, self.ring.mul(self.data, int(code) % self.ring.order))

    def residue(self):
        return Matrix(self.ring.residue_field, self.ring.residue(self.data))

    def lift(self, ring):
        """Reinterpret a matrix over k as a matrix over R via digit codes."""
        if not self.ring.is_field or ring.p != self.ring.p:
            raise RingError(f'cannot lift {self.ring} to {ring}')
        return Matrix(ring, self.data)

    def times_alpha(self):
        return Matrix(self.ring, self.ring.times_alpha(self.data))

    def divide_alpha(self):
        """The k-matrix c with alpha*c equal to this matrix."""
        return Matrix(self.ring.residue_field, self.ring.divide_alpha(self.data))

    def is_zero(self):
        return not self.data.any()

    def tolist(self):
        return self.data.tolist()

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.ring, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f'Matrix({self.ring}, {self.data.tolist()})'


def _check_ring(ring, matrix):
    if matrix.ring != ring:
        raise RingError(f'ring mismatch: {ring} vs {matrix.ring}')


@dataclass(frozen=True)
class Pivot:
    column: int
    unit: bool


@dataclass(frozen=True)
class HowellForm:
    rows: Matrix
    pivots: tuple

    @property
    def length(self):
        """log_p of the order of the row span."""
        unit = self.rows.ring.unit_length
        return sum(unit if pivot.unit else 1 for pivot in self.pivots)


def _eliminate(ring, row, pivot_row, factor):
    if not factor:
        return row
    return ring.sub(row, ring.mul(pivot_row, factor))


def howell_form(matrix):
    """
    Row-reduce ``matrix`` over a field or a local ring with alpha^2 = 0.

    Columns are processed left to right. A unit pivot (lowest row first) is
    normalized to 1 and cleared from every other row; otherwise an alpha pivot
    is normalized to alpha, cleared below, reduced mod alpha above, and its
    alpha-multiple goes back into the pool.
    """
    ring = matrix.ring
    p = ring.p
    pool = [row.copy() for row in matrix.data]
    reduced, pivots = [], []
    for col in range(matrix.cols):
        pick = next((i for i, row in enumerate(pool) if ring.is_unit(row[col])), None)
        if pick is not None:
            row = pool.pop(pick)
            row = ring.mul(row, ring.inverse(row[col]))
            pool = [_eliminate(ring, other, row, int(other[col])) for other in pool]
            reduced = [_eliminate(ring, other, row, int(other[col])) for other in reduced]
            reduced.append(row)
            pivots.append(Pivot(col, True))
            continue
        pick = next((i for i, row in enumerate(pool) if row[col]), None)
        if pick is None:
            continue
        row = pool.pop(pick)
        row = ring.mul(row, ring.inverse(int(row[col]) // p))
        pool = [_eliminate(ring, other, row, int(other[col]) // p) for other in pool]
        reduced = [_eliminate(ring, other, row, int(other[col]) // p) for other in reduced]
        shifted = ring.times_alpha(row)
        if shifted.any():
            pool.append(shifted)
        reduced.append(row)
        pivots.append(Pivot(col, False))
    rows = Matrix(ring, np.array(reduced, dtype=np.int64).reshape(len(reduced), matrix.cols))
    return HowellForm(rows, tuple(pivots))


def module_length(matrix):
    """log_p of the order of the column span of ``matrix``."""
    if not matrix.cols or not matrix.rows:
        return 0
    return howell_form(matrix.T).length


@dataclass(frozen=True)
class SolutionSet:
    particular: Matrix
    kernel: Matrix

    @property
    def solvable(self):
        return self.particular is not None


def howell_solve(a, b):
    """
    Describe {X : A X = B}.

    Returns one particular solution (or None) and a generating set of the
    kernel, as the columns of ``kernel``.
    """
    if a.ring != b.ring:
        raise RingError(f'ring mismatch: {a.ring} vs {b.ring}')
    if a.rows != b.rows:
        raise ShapeError(f'cannot solve {a.shape} X = {b.shape}')
    ring = a.ring
    m, n = a.shape
    augmented = Matrix.hstack(ring, [a.T, Matrix.identity(ring, n)], n)
    form = howell_form(augmented)
    kernel = [form.rows.data[r, m:] for r, pivot in enumerate(form.pivots) if pivot.column >= m]
    solutions = []
    for col in range(b.cols):
        solution = _reduce_against(ring, form, m, n, b.data[:, col])
        if solution is None:
            return SolutionSet(None, Matrix.from_columns(ring, n, kernel))
        solutions.append(solution)
    return SolutionSet(Matrix.from_columns(ring, n, solutions), Matrix.from_columns(ring, n, kernel))


def _reduce_against(ring, form, m, n, target):
    p = ring.p
    residual = np.array(target, dtype=np.int64)
    solution = np.zeros(n, dtype=np.int64)
    for row, pivot in zip(form.rows.data, form.pivots):
        if pivot.column >= m:
            break
        entry = int(residual[pivot.column])
        if not entry:
            continue
        if pivot.unit:
            factor = entry
        elif entry % p:
            return None
        else:
            factor = entry // p
        residual = ring.sub(residual, ring.mul(row[:m], factor))
        solution = ring.add(solution, ring.mul(row[m:], factor))
    if residual.any():
        return None
    return solution


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: tuple
    free_rank: int

    @property
    def torsion(self):
        return tuple(d for d in self.invariant_factors if d > 1)

    def describe(self):
        parts = ['Z'] * self.free_rank + [f'Z/{d}' for d in self.torsion]
        return ' + '.join(parts) if parts else '0'


def smith_over_Z(matrix):
    """Invariant factors and free rank of the cokernel of an integer matrix."""
    a = np.array(matrix, dtype=np.int64)
    if a.ndim != 2:
        a = a.reshape(len(a), -1)
    m, n = a.shape
    factors = []
    t = 0
    while t < min(m, n):
        block = np.abs(a[t:, t:])
        if not block.any():
            break
        i, j = np.unravel_index(np.argmin(np.where(block > 0, block, np.iinfo(np.int64).max)), block.shape)
        a[[t, t + i]] = a[[t + i, t]]
        a[:, [t, t + j]] = a[:, [t + j, t]]
        while True:
            pivot = a[t, t]
            for r in range(t + 1, m):
                a[r] -= (a[r, t] // pivot) * a[t]
            for c in range(t + 1, n):
                a[:, c] -= (a[t, c] // pivot) * a[:, t]
            rest_col = np.nonzero(a[t + 1:, t])[0]
            rest_row = np.nonzero(a[t, t + 1:])[0]
            if rest_col.size:
                r = t + 1 + rest_col[0]
                a[[t, r]] = a[[r, t]]
                continue
            if rest_row.size:
                c = t + 1 + rest_row[0]
                a[:, [t, c]] = a[:, [c, t]]
                continue
            bad = np.argwhere(a[t + 1:, t + 1:] % pivot)
            if bad.size:
                a[t] += a[t + 1 + bad[0][0]]
                continue
            break
        factors.append(int(abs(a[t, t])))
        t += 1
    return SmithForm(tuple(factors), m - len(factors))
