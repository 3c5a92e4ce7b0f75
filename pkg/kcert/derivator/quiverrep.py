"""
Representations of the linear quiver 0 -> 1 -> ... -> n over k = F_p.
"""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .exceptions import OutOfRangeError, SearchLimitError, ShapeError
from .ringlin import Matrix, howell_form, howell_solve, module_length

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuiverRep:
    field: object
    dims: tuple
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, 'dims', tuple(int(d) for d in self.dims))
        maps = tuple(m if isinstance(m, Matrix) else Matrix(self.field, m, shape=(self.dims[i + 1], self.dims[i]))
                     for i, m in enumerate(self.maps))
        object.__setattr__(self, 'maps', maps)
        if len(self.maps) != len(self.dims) - 1:
            raise ShapeError(f'{len(self.dims)} vertices need {len(self.dims) - 1} maps')
        for i, m in enumerate(self.maps):
            if m.shape != (self.dims[i + 1], self.dims[i]):
                raise ShapeError(f'map {i + 1} has shape {m.shape}, expected {(self.dims[i + 1], self.dims[i])}')

    @property
    def n(self):
        return len(self.dims) - 1

    def composite(self, a, b):
        """The map V_a -> V_b along the quiver."""
        result = Matrix.identity(self.field, self.dims[a])
        for i in range(a + 1, b + 1):
            result = self.maps[i - 1] @ result
        return result

    def __str__(self):
        return f'Rep(dims={list(self.dims)})'


@dataclass(frozen=True)
class IntervalModule:
    i: int
    j: int

    def __str__(self):
        return f'M_{{{self.i},{self.j}}}'


def interval(i, j, n, field):
    if not 0 <= i <= j <= n:
        raise OutOfRangeError(f'no interval ({i}, {j}) at level {n}', witness=f'({i},{j})')
    dims = tuple(1 if i <= pos <= j else 0 for pos in range(n + 1))
    maps = tuple(Matrix.identity(field, 1) if i < pos <= j else Matrix.zeros(field, dims[pos], dims[pos - 1])
                 for pos in range(1, n + 1))
    return QuiverRep(field, dims, maps)


def zero_rep(n, field):
    return QuiverRep(field, (0,) * (n + 1), tuple(Matrix.zeros(field, 0, 0) for _ in range(n)))


def direct_sum(reps, n=None, field=None):
    reps = list(reps)
    if not reps:
        return zero_rep(n, field)
    field = reps[0].field
    dims = tuple(sum(r.dims[pos] for r in reps) for pos in range(reps[0].n + 1))
    maps = []
    for pos in range(reps[0].n):
        block = np.zeros((dims[pos + 1], dims[pos]), dtype=np.int64)
        row = col = 0
        for r in reps:
            block[row:row + r.dims[pos + 1], col:col + r.dims[pos]] = r.maps[pos].data
            row += r.dims[pos + 1]
            col += r.dims[pos]
        maps.append(Matrix(field, block, shape=block.shape))
    return QuiverRep(field, dims, tuple(maps))


def _naturality_system(x, y):
    """Matrix of (h_i) -> (h_i x_i - y_i h_{i-1}) on row-major flattened h_i."""
    if x.n != y.n or x.field != y.field:
        raise ShapeError(f'{x} and {y} live on different quivers')
    field = x.field
    sizes = [y.dims[i] * x.dims[i] for i in range(x.n + 1)]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    out_sizes = [y.dims[i] * x.dims[i - 1] for i in range(1, x.n + 1)]
    out_offsets = np.concatenate([[0], np.cumsum(out_sizes)]).astype(int)
    system = np.zeros((int(out_offsets[-1]), int(offsets[-1])), dtype=np.int64)
    for i in range(1, x.n + 1):
        rows = slice(out_offsets[i - 1], out_offsets[i])
        # vec(h_i x_i) = (I kron x_i^T) vec(h_i)
        system[rows, offsets[i]:offsets[i + 1]] += np.kron(np.eye(y.dims[i], dtype=np.int64), x.maps[i - 1].data.T)
        # vec(y_i h_{i-1}) = (y_i kron I) vec(h_{i-1})
        system[rows, offsets[i - 1]:offsets[i]] -= np.kron(y.maps[i - 1].data, np.eye(x.dims[i - 1], dtype=np.int64))
    return Matrix(field, system, shape=system.shape), offsets


def rep_hom(x, y):
    """A k-basis of Hom(X, Y), each element a tuple of matrices h_i: X_i -> Y_i."""
    system, offsets = _naturality_system(x, y)
    kernel = howell_solve(system, Matrix.zeros(x.field, system.rows, 0)).kernel
    basis = []
    for column in kernel.data.T:
        basis.append(tuple(
            Matrix(x.field, column[offsets[i]:offsets[i + 1]], shape=(y.dims[i], x.dims[i]))
            for i in range(x.n + 1)
        ))
    return basis


def ext1(x, y):
    system, _ = _naturality_system(x, y)
    return system.rows - module_length(system)


def _rank(rep, a, b):
    n = rep.n
    if a < 0 or b > n:
        return 0
    if a == b:
        return rep.dims[a]
    return module_length(rep.composite(a, b))


def decompose(rep):
    """Interval multiplicities from the rank invariant."""
    counts = Counter()
    for i in range(rep.n + 1):
        for j in range(i, rep.n + 1):
            multiplicity = (_rank(rep, i, j) - _rank(rep, i - 1, j)
                            - _rank(rep, i, j + 1) + _rank(rep, i - 1, j + 1))
            if multiplicity:
                counts[IntervalModule(i, j)] = multiplicity
    return counts


def assemble(counts, n, field):
    reps = []
    for piece in sorted(counts, key=lambda m: (m.i, m.j)):
        reps.extend([interval(piece.i, piece.j, n, field)] * counts[piece])
    return direct_sum(reps, n, field)


def _columns(matrix):
    return [matrix.data[:, c] for c in range(matrix.cols)]


def _extend_basis(field, rows, spanned, candidates):
    """Greedily pick candidates that enlarge the span of ``spanned``."""
    chosen = []
    rank = module_length(Matrix.from_columns(field, rows, spanned))
    for v in candidates:
        grown = module_length(Matrix.from_columns(field, rows, spanned + chosen + [v]))
        if grown > rank:
            chosen.append(v)
            rank = grown
    return chosen


def interval_basis(rep):
    """Generators v in V_i for each interval [i, j]: v dies at j + 1 and is not born earlier."""
    field, n = rep.field, rep.n
    generators = {}
    for i in range(n + 1):
        rows = rep.dims[i]
        if not rows:
            continue
        spanned = _columns(rep.maps[i - 1]) if i else []
        for j in range(i, n + 1):
            if j == n:
                dying = _columns(Matrix.identity(field, rows))
            else:
                forward = rep.composite(i, j + 1)
                dying = _columns(howell_solve(forward, Matrix.zeros(field, forward.rows, 0)).kernel)
            chosen = _extend_basis(field, rows, spanned, dying)
            if chosen:
                generators[IntervalModule(i, j)] = chosen
            spanned = spanned + chosen
    return generators


def is_morphism(x, y, h):
    return all(y.maps[p] @ h[p] == h[p + 1] @ x.maps[p] for p in range(x.n))


def interval_isomorphism(rep):
    """assemble(decompose(rep)) -> rep, built from an interval basis."""
    generators = interval_basis(rep)
    counts = Counter({piece: len(vectors) for piece, vectors in generators.items()})
    rebuilt = assemble(counts, rep.n, rep.field)
    columns = [[] for _ in range(rep.n + 1)]
    for piece in sorted(generators, key=lambda m: (m.i, m.j)):
        for v in generators[piece]:
            for p in range(piece.i, piece.j + 1):
                image = rep.composite(piece.i, p) @ Matrix(rep.field, v, shape=(rep.dims[piece.i], 1))
                columns[p].append(image.data[:, 0])
    h = tuple(Matrix.from_columns(rep.field, rep.dims[p], columns[p]) for p in range(rep.n + 1))
    return rebuilt, h


def _is_invertible(h):
    return h.rows == h.cols and module_length(h) == h.rows


def is_isomorphism(h):
    return all(_is_invertible(component) for component in h)


def is_isomorphic(x, y):
    """Equal dimension vectors and equal dim Hom(M_{a,b}, -) on every interval."""
    if x.dims != y.dims:
        return False
    for a in range(x.n + 1):
        for b in range(a, x.n + 1):
            m = interval(a, b, x.n, x.field)
            if len(rep_hom(m, x)) != len(rep_hom(m, y)):
                return False
    return True


def find_isomorphism(x, y, limit=4096, attempts=256, seed=0):
    """An explicit invertible element of Hom(X, Y), or None."""
    if x.dims != y.dims:
        return None
    basis = rep_hom(x, y)
    p = x.field.p
    if not basis:
        return tuple(Matrix.zeros(x.field, 0, 0) for _ in x.dims) if not any(x.dims) else None

    def combine(coeffs):
        return tuple(
            Matrix(x.field, sum(c * h[i].data for c, h in zip(coeffs, basis)), shape=basis[0][i].shape)
            for i in range(x.n + 1)
        )

    if p ** len(basis) <= limit:
        for coeffs in itertools.product(range(p), repeat=len(basis)):
            h = combine(coeffs)
            if is_isomorphism(h):
                return h
        return None
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        h = combine(rng.integers(0, p, size=len(basis)))
        if is_isomorphism(h):
            return h
    raise SearchLimitError(f'no isomorphism found among {attempts} random elements of a {len(basis)}-dim space')


def random_rep(n, field, rng, max_dim=3):
    dims = tuple(int(d) for d in rng.integers(0, max_dim + 1, size=n + 1))
    maps = tuple(Matrix(field, rng.integers(0, field.p, size=(dims[i + 1], dims[i])), shape=(dims[i + 1], dims[i]))
                 for i in range(n))
    return QuiverRep(field, dims, maps)


# The simplicial operators of S.(mod k) on sequences of vector spaces.

def delete_position(rep, t):
    dims = rep.dims[:t] + rep.dims[t + 1:]
    maps = list(rep.maps)
    if 0 < t < rep.n:
        maps[t - 1:t + 1] = [rep.maps[t] @ rep.maps[t - 1]]
    elif t == 0:
        maps = maps[1:]
    else:
        maps = maps[:-1]
    return QuiverRep(rep.field, dims, tuple(maps))


def repeat_position(rep, t):
    dims = rep.dims[:t + 1] + rep.dims[t:]
    maps = list(rep.maps[:t]) + [Matrix.identity(rep.field, rep.dims[t])] + list(rep.maps[t:])
    return QuiverRep(rep.field, dims, tuple(maps))


def prepend_zero(rep):
    return QuiverRep(rep.field, (0,) + rep.dims, (Matrix.zeros(rep.field, rep.dims[0], 0),) + rep.maps)


@dataclass(frozen=True)
class Quotient:
    rep: QuiverRep
    projections: tuple
    sections: tuple


def _quotient_space(field, dim, image):
    """Projection onto and section of a complement of the column span of ``image``."""
    if not image.cols or image.is_zero():
        eye = Matrix.identity(field, dim)
        return eye, eye
    form = howell_form(image.T)
    pivots = [pv.column for pv in form.pivots]
    free = [c for c in range(dim) if c not in pivots]
    projection = np.zeros((len(free), dim), dtype=np.int64)
    for out, c in enumerate(free):
        projection[out, c] = 1
    # reduce e_c against the echelon rows before reading the free coordinates
    for row, c in zip(form.rows.data, pivots):
        projection[:, c] = (-row[free]) % field.p
    section = np.zeros((dim, len(free)), dtype=np.int64)
    for out, c in enumerate(free):
        section[c, out] = 1
    return Matrix(field, projection, shape=projection.shape), Matrix(field, section, shape=section.shape)


def quotient_by_first(rep):
    """Positions 1..n of rep divided by the image of V_0, with induced maps."""
    field = rep.field
    projections, sections = [], []
    for pos in range(1, rep.n + 1):
        proj, sec = _quotient_space(field, rep.dims[pos], rep.composite(0, pos))
        projections.append(proj)
        sections.append(sec)
    maps = tuple(projections[i + 1] @ rep.maps[i + 1] @ sections[i] for i in range(rep.n - 1))
    dims = tuple(p.rows for p in projections)
    return Quotient(QuiverRep(field, dims, maps), tuple(projections), tuple(sections))
