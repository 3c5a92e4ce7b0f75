"""
Finitely generated modules R^a + k^b over a local ring R with alpha^2 = 0,
their morphisms in four blocks, the Waldhausen structure (cofibrations are
the monomorphisms) and the stable category.

Vectors of a module are int64 arrays of codes: free coordinates first
(codes over R), then residue coordinates (digits 0..p-1).
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import CompositionError, KcertError, NotMonomorphismError, RingError, ShapeError
from .ringlin import Matrix, howell_solve, module_length

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FgModule:
    ring: object
    free_rank: int = 0
    residue_rank: int = 0

    def __post_init__(self):
        if self.ring.is_field:
            raise RingError('modules are taken over the local rings, not over the residue field')
        if self.free_rank < 0 or self.residue_rank < 0:
            raise ShapeError(f'negative rank ({self.free_rank}, {self.residue_rank})')

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append('R' if self.free_rank == 1 else f'R^{self.free_rank}')
        if self.residue_rank:
            parts.append('k' if self.residue_rank == 1 else f'k^{self.residue_rank}')
        return ' + '.join(parts) or '0'

    @property
    def rank(self):
        return self.free_rank + self.residue_rank

    @property
    def length(self):
        """log_p of the number of elements."""
        return 2 * self.free_rank + self.residue_rank

    def is_zero(self):
        return self.rank == 0

    def relations(self):
        """Presentation matrix: the module is the cokernel of these columns on R^rank."""
        rel = np.zeros((self.rank, self.residue_rank), dtype=np.int64)
        for j in range(self.residue_rank):
            rel[self.free_rank + j, j] = self.ring.alpha
        return Matrix(self.ring, rel, shape=(self.rank, self.residue_rank))

    def canonical(self, vector):
        v = np.array(vector, dtype=np.int64).reshape(self.rank)
        v[:self.free_rank] %= self.ring.order
        v[self.free_rank:] = self.ring.residue(v[self.free_rank:])
        return v

    def zero_vector(self):
        return np.zeros(self.rank, dtype=np.int64)

    def unit_vector(self, index):
        v = self.zero_vector()
        v[index] = 1
        return v

    def elements(self):
        ranges = [range(self.ring.order)] * self.free_rank + [range(self.ring.p)] * self.residue_rank
        for values in itertools.product(*ranges):
            yield np.array(values, dtype=np.int64)


def free_module(ring, rank=1):
    return FgModule(ring, rank, 0)


def residue_module(ring, rank=1):
    return FgModule(ring, 0, rank)


def zero_module(ring):
    return FgModule(ring, 0, 0)


def _blockify(ring, value, rows, cols):
    if isinstance(value, Matrix):
        if value.ring != ring:
            raise RingError(f'block over {value.ring}, expected {ring}')
        if value.shape != (rows, cols):
            raise ShapeError(f'block of shape {value.shape}, expected {(rows, cols)}')
        return value
    if value is None:
        return Matrix.zeros(ring, rows, cols)
    return Matrix(ring, value, shape=(rows, cols))


@dataclass(frozen=True)
class ModMorphism:
    source: FgModule
    target: FgModule
    rr: Matrix
    kr: Matrix
    rk: Matrix
    kk: Matrix

    @classmethod
    def blocks(cls, source, target, rr=None, kr=None, rk=None, kk=None):
        if source.ring != target.ring:
            raise RingError(f'{source.ring} vs {target.ring}')
        ring, k = source.ring, source.ring.residue_field
        a, b = source.free_rank, source.residue_rank
        a2, b2 = target.free_rank, target.residue_rank
        return cls(
            source, target,
            _blockify(ring, rr, a2, a),
            _blockify(k, kr, a2, b),
            _blockify(k, rk, b2, a),
            _blockify(k, kk, b2, b),
        )

    @classmethod
    def zero(cls, source, target):
        return cls.blocks(source, target)

    @classmethod
    def identity(cls, module):
        ring = module.ring
        return cls.blocks(
            module, module,
            rr=Matrix.identity(ring, module.free_rank),
            kk=Matrix.identity(ring.residue_field, module.residue_rank),
        )

    @classmethod
    def from_lift(cls, source, target, lifted):
        """Read canonical blocks off a matrix over R acting on presentations."""
        a, a2 = source.free_rank, target.free_rank
        if lifted.shape != (target.rank, source.rank):
            raise ShapeError(f'lift of shape {lifted.shape} for {source} -> {target}')
        return cls.blocks(
            source, target,
            rr=lifted[:a2, :a],
            kr=lifted[:a2, a:].divide_alpha(),
            rk=lifted[a2:, :a].residue(),
            kk=lifted[a2:, a:].residue(),
        )

    @property
    def ring(self):
        return self.source.ring

    def lift(self):
        ring = self.ring
        top = Matrix.hstack(ring, [self.rr, self.kr.lift(ring).times_alpha()], self.target.free_rank)
        bottom = Matrix.hstack(ring, [self.rk.lift(ring), self.kk.lift(ring)], self.target.residue_rank)
        return Matrix.vstack(ring, [top, bottom], self.source.rank)

    def compose(self, other):
        """self o other."""
        if other.target != self.source:
            raise CompositionError(f'cannot compose {self.source} <- {other.target}')
        ring = self.ring
        return ModMorphism(
            other.source, self.target,
            self.rr @ other.rr + (self.kr @ other.rk).lift(ring).times_alpha(),
            self.rr.residue() @ other.kr + self.kr @ other.kk,
            self.rk @ other.rr.residue() + self.kk @ other.rk,
            self.kk @ other.kk,
        )

    __matmul__ = compose

    def _check_parallel(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise CompositionError(f'{self.source}->{self.target} vs {other.source}->{other.target}')

    def __add__(self, other):
        self._check_parallel(other)
        return ModMorphism(self.source, self.target, self.rr + other.rr, self.kr + other.kr,
                           self.rk + other.rk, self.kk + other.kk)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ModMorphism(self.source, self.target, -self.rr, -self.kr, -self.rk, -self.kk)

    def scale(self, code):
        return ModMorphism.from_lift(self.source, self.target, self.lift().scale(code))

    def is_zero(self):
        return all(block.is_zero() for block in (self.rr, self.kr, self.rk, self.kk))

    def apply(self, vector):
        lifted = self.lift()
        if not self.source.rank:
            return self.target.zero_vector()
        image = self.ring.matmul(lifted.data, np.asarray(vector, dtype=np.int64))
        return self.target.canonical(image)

    def __str__(self):
        blocks = [(name, getattr(self, name)) for name in ('rr', 'kr', 'rk', 'kk')]
        shown = ' '.join(f'{name.upper()}={m.tolist()}' for name, m in blocks if m.rows and m.cols)
        return f'[{self.source} -> {self.target}: {shown or "0"}]'


class Presentation:
    """A module as the cokernel of diag(0..0, alpha..alpha) on R^rank; morphisms act by lifted matrices."""

    def __init__(self, module):
        self.module = module
        self.relations = module.relations()

    def augment(self, columns):
        return Matrix.hstack(self.module.ring, [columns, self.relations], self.module.rank)

    def span_length(self, columns):
        """Length of the submodule spanned by ``columns``."""
        return module_length(self.augment(columns)) - self.module.residue_rank

    def vanishes(self, columns):
        """Whether every column of ``columns`` is zero in the module."""
        if not self.module.rank or not columns.cols:
            return True
        if not self.module.residue_rank:
            return columns.is_zero()
        return howell_solve(self.relations, columns).solvable

    def same(self, first, second):
        return self.vanishes(first - second)


# Linear maps between coordinate modules.

def linear_map(source, target, images):
    """The morphism sending the i-th generator of ``source`` to ``images[i]``."""
    columns = [target.canonical(v) for v in images]
    return ModMorphism.from_lift(source, target, Matrix.from_columns(source.ring, target.rank, columns))


def _with_relations(f):
    return Presentation(f.target).augment(f.lift())


def image_length(f):
    return Presentation(f.target).span_length(f.lift())


def submodule_length(module, vectors):
    gens = Matrix.from_columns(module.ring, module.rank, [module.canonical(v) for v in vectors])
    return Presentation(module).span_length(gens)


def kernel_generators(f):
    """Generators of ker f as source vectors, zeros dropped."""
    system = _with_relations(f)
    kernel = howell_solve(system, Matrix.zeros(f.ring, f.target.rank, 0)).kernel
    generators = []
    for column in kernel.data.T:
        v = f.source.canonical(column[:f.source.rank])
        if v.any():
            generators.append(v)
    return generators


def solve(f, vector):
    """Some x with f(x) = vector, or None."""
    system = _with_relations(f)
    rhs = Matrix(f.ring, f.target.canonical(vector), shape=(f.target.rank, 1))
    solution = howell_solve(system, rhs)
    if not solution.solvable:
        return None
    return f.source.canonical(solution.particular.data[:f.source.rank, 0])


def extend_basis(module, spanning, candidates):
    """
    Greedy choice among ``candidates`` of representatives of a k-basis of
    module / span(spanning). Returns the chosen indices.
    """
    current = list(spanning)
    length = submodule_length(module, current)
    chosen = []
    for index, candidate in enumerate(candidates):
        grown = submodule_length(module, current + [candidate])
        if grown == length:
            continue
        if grown != length + 1:
            raise KcertError('quotient is not annihilated by alpha')
        current.append(candidate)
        length = grown
        chosen.append(index)
    return chosen


def is_mono(f):
    return image_length(f) == f.source.length


def is_epi(f):
    return image_length(f) == f.target.length


class HomModule:
    """Hom(M, N) as the coordinate module R^{a'a} + k^{a'b + b'a + b'b}."""

    def __init__(self, source, target):
        if source.ring != target.ring:
            raise RingError(f'{source.ring} vs {target.ring}')
        self.source = source
        self.target = target
        a, b = source.free_rank, source.residue_rank
        a2, b2 = target.free_rank, target.residue_rank
        self.shapes = {'rr': (a2, a), 'kr': (a2, b), 'rk': (b2, a), 'kk': (b2, b)}
        self.module = FgModule(source.ring, a2 * a, a2 * b + b2 * a + b2 * b)

    def to_vector(self, f):
        if (f.source, f.target) != (self.source, self.target):
            raise CompositionError(f'{f} is not in Hom({self.source}, {self.target})')
        parts = [getattr(f, name).data.reshape(-1) for name in ('rr', 'kr', 'rk', 'kk')]
        return np.concatenate(parts).astype(np.int64)

    def from_vector(self, vector):
        vector = self.module.canonical(vector)
        blocks, offset = {}, 0
        for name in ('rr', 'kr', 'rk', 'kk'):
            rows, cols = self.shapes[name]
            blocks[name] = vector[offset:offset + rows * cols].reshape(rows, cols)
            offset += rows * cols
        return ModMorphism.blocks(self.source, self.target, **blocks)

    def generators(self):
        return [self.from_vector(self.module.unit_vector(i)) for i in range(self.module.rank)]


def composition_map(hom_from, hom_to, transform):
    """The linear map between hom modules given by f -> transform(f)."""
    images = [hom_to.to_vector(transform(g)) for g in hom_from.generators()]
    return linear_map(hom_from.module, hom_to.module, images)


def lift_along(g, h):
    """Some s with g o s = h, or None."""
    hom_from = HomModule(h.source, g.source)
    hom_to = HomModule(h.source, h.target)
    x = solve(composition_map(hom_from, hom_to, g.compose), hom_to.to_vector(h))
    return None if x is None else hom_from.from_vector(x)


def extend_along(f, h):
    """Some s with s o f = h, or None."""
    hom_from = HomModule(f.target, h.target)
    hom_to = HomModule(f.source, h.target)
    x = solve(composition_map(hom_from, hom_to, lambda s: s.compose(f)), hom_to.to_vector(h))
    return None if x is None else hom_from.from_vector(x)


@dataclass(frozen=True)
class HomSpace:
    source: FgModule
    target: FgModule
    block_ranks: dict = field(hash=False)
    generators: tuple = field(hash=False)

    @property
    def length(self):
        """log_p |Hom(M, N)|."""
        return 2 * self.block_ranks['rr'] + sum(self.block_ranks[name] for name in ('kr', 'rk', 'kk'))

    def elements(self):
        hom = HomModule(self.source, self.target)
        for vector in hom.module.elements():
            yield hom.from_vector(vector)


def hom_space(source, target):
    hom = HomModule(source, target)
    ranks = {name: rows * cols for name, (rows, cols) in hom.shapes.items()}
    return HomSpace(source, target, ranks, tuple(hom.generators()))


@dataclass(frozen=True)
class DirectSum:
    module: FgModule
    summands: tuple

    @cached_property
    def offsets(self):
        free, residue = [], []
        f = r = 0
        for m in self.summands:
            free.append(f)
            residue.append(r)
            f += m.free_rank
            r += m.residue_rank
        return tuple(free), tuple(residue)

    def injection(self, index):
        m = self.summands[index]
        ring = m.ring
        free_off, res_off = self.offsets[0][index], self.offsets[1][index]
        rr = np.zeros((self.module.free_rank, m.free_rank), dtype=np.int64)
        rr[free_off:free_off + m.free_rank] = np.eye(m.free_rank, dtype=np.int64)
        kk = np.zeros((self.module.residue_rank, m.residue_rank), dtype=np.int64)
        kk[res_off:res_off + m.residue_rank] = np.eye(m.residue_rank, dtype=np.int64)
        return ModMorphism.blocks(m, self.module, rr=Matrix(ring, rr, shape=rr.shape),
                                  kk=Matrix(ring.residue_field, kk, shape=kk.shape))

    def projection(self, index):
        m = self.summands[index]
        ring = m.ring
        free_off, res_off = self.offsets[0][index], self.offsets[1][index]
        rr = np.zeros((m.free_rank, self.module.free_rank), dtype=np.int64)
        rr[:, free_off:free_off + m.free_rank] = np.eye(m.free_rank, dtype=np.int64)
        kk = np.zeros((m.residue_rank, self.module.residue_rank), dtype=np.int64)
        kk[:, res_off:res_off + m.residue_rank] = np.eye(m.residue_rank, dtype=np.int64)
        return ModMorphism.blocks(self.module, m, rr=Matrix(ring, rr, shape=rr.shape),
                                  kk=Matrix(ring.residue_field, kk, shape=kk.shape))

    def join(self, vectors):
        free = [v[:m.free_rank] for m, v in zip(self.summands, vectors)]
        residue = [v[m.free_rank:] for m, v in zip(self.summands, vectors)]
        return np.concatenate(free + residue).astype(np.int64)

    def split(self, vector):
        free_offsets, res_offsets = self.offsets
        a = self.module.free_rank
        out = []
        for m, f, r in zip(self.summands, free_offsets, res_offsets):
            out.append(np.concatenate([vector[f:f + m.free_rank], vector[a + r:a + r + m.residue_rank]]))
        return out


def direct_sum(*modules):
    if not modules:
        raise ShapeError('direct sum of nothing needs a ring')
    ring = modules[0].ring
    total = FgModule(ring, sum(m.free_rank for m in modules), sum(m.residue_rank for m in modules))
    return DirectSum(total, tuple(modules))


def sum_of_morphisms(*morphisms):
    """Block diagonal f_1 + ... + f_r between the direct sums of sources and targets."""
    source = direct_sum(*(f.source for f in morphisms))
    target = direct_sum(*(f.target for f in morphisms))
    total = ModMorphism.zero(source.module, target.module)
    for index, f in enumerate(morphisms):
        total = total + target.injection(index) @ f @ source.projection(index)
    return total


def stack_morphisms(target_sum, components):
    """The map into a direct sum with the given components."""
    total = ModMorphism.zero(components[0].source, target_sum.module)
    for index, f in enumerate(components):
        total = total + target_sum.injection(index) @ f
    return total


@dataclass(frozen=True)
class Cokernel:
    module: FgModule
    projection: ModMorphism
    transform: Matrix


def _chain_ring_smith(matrix):
    """Row transform U (recorded) and diagonal kinds for U * matrix * V over R."""
    ring = matrix.ring
    p = ring.p
    work = matrix.data.copy()
    m, c = work.shape
    u = np.eye(m, dtype=np.int64)
    kinds = []
    t = 0
    while t < min(m, c):
        sub = work[t:, t:]
        units = np.argwhere(ring.is_unit(sub).T)
        nonzero = np.argwhere((sub != 0).T)
        if units.size:
            col, row = units[0]
            unit = True
        elif nonzero.size:
            col, row = nonzero[0]
            unit = False
        else:
            break
        row, col = t + row, t + col
        work[[t, row]] = work[[row, t]]
        u[[t, row]] = u[[row, t]]
        work[:, [t, col]] = work[:, [col, t]]
        scale = ring.inverse(work[t, t] if unit else work[t, t] // p)
        work[t] = ring.mul(work[t], scale)
        u[t] = ring.mul(u[t], scale)
        for i in range(t + 1, m):
            factor = int(work[i, t]) if unit else int(work[i, t]) // p
            if factor:
                work[i] = ring.sub(work[i], ring.mul(work[t], factor))
                u[i] = ring.sub(u[i], ring.mul(u[t], factor))
        for j in range(t + 1, c):
            factor = int(work[t, j]) if unit else int(work[t, j]) // p
            if factor:
                work[:, j] = ring.sub(work[:, j], ring.mul(work[:, t], factor))
        kinds.append('unit' if unit else 'alpha')
        t += 1
    kinds.extend(['zero'] * (m - len(kinds)))
    return Matrix(ring, u, shape=(m, m)), kinds


def cokernel(f):
    """Cofiber of a monomorphism, in normal form, with a deterministic projection."""
    if not is_mono(f):
        raise NotMonomorphismError(f'{f} is not a monomorphism')
    n = f.target
    transform, kinds = _chain_ring_smith(_with_relations(f))
    free_rows = [i for i, kind in enumerate(kinds) if kind == 'zero']
    alpha_rows = [i for i, kind in enumerate(kinds) if kind == 'alpha']
    module = FgModule(f.ring, len(free_rows), len(alpha_rows))
    lifted = Matrix(f.ring, transform.data[free_rows + alpha_rows], shape=(module.rank, n.rank))
    projection = ModMorphism.from_lift(n, module, lifted)
    logger.debug('cokernel of %s is %s', f, module)
    return Cokernel(module, projection, transform)


def free_cover(module):
    """(F, eps) with eps: F -> M onto, F = R^{a+b}."""
    ring, a, b = module.ring, module.free_rank, module.residue_rank
    cover = free_module(ring, a + b)
    rr = np.hstack([np.eye(a, dtype=np.int64), np.zeros((a, b), dtype=np.int64)])
    rk = np.hstack([np.zeros((b, a), dtype=np.int64), np.eye(b, dtype=np.int64)])
    return cover, ModMorphism.blocks(cover, module, rr=rr, rk=rk)


def injective_embed(module):
    """(I, iota) with iota: M -> I injective, I = R^{a+b}."""
    ring, a, b = module.ring, module.free_rank, module.residue_rank
    hull = free_module(ring, a + b)
    rr = np.vstack([np.eye(a, dtype=np.int64), np.zeros((b, a), dtype=np.int64)])
    kr = np.vstack([np.zeros((a, b), dtype=np.int64), np.eye(b, dtype=np.int64)])
    return hull, ModMorphism.blocks(module, hull, rr=rr, kr=kr)


@dataclass(frozen=True)
class StableHom:
    source: FgModule
    target: FgModule
    representatives: tuple = field(hash=False)
    projective_part: tuple = field(hash=False, repr=False)

    @property
    def dimension(self):
        return len(self.representatives)

    @cached_property
    def _hom(self):
        return HomModule(self.source, self.target)

    def is_zero(self, f):
        """Whether f factors through a projective."""
        base = submodule_length(self._hom.module, list(self.projective_part))
        return submodule_length(self._hom.module, list(self.projective_part) + [self._hom.to_vector(f)]) == base

    def coordinates(self, f):
        hom = self._hom
        columns = [hom.to_vector(g) for g in self.representatives] + list(self.projective_part)
        system = linear_map(FgModule(hom.module.ring, len(columns), 0), hom.module, columns)
        x = solve(system, hom.to_vector(f))
        if x is None:
            raise KcertError(f'{f} is not in the span of the stable representatives')
        return tuple(int(c) for c in hom.module.ring.residue(x[:self.dimension]))


def stable_hom(source, target):
    hom = HomModule(source, target)
    cover, eps = free_cover(target)
    through_cover = HomModule(source, cover)
    projective_part = [hom.to_vector(eps @ g) for g in through_cover.generators()]
    candidates = hom.generators()
    chosen = extend_basis(hom.module, projective_part, [hom.to_vector(g) for g in candidates])
    return StableHom(source, target, tuple(candidates[i] for i in chosen), tuple(projective_part))


def include_residue(dimension, ring):
    """The k-vector space k^dimension as the R-module (0, dimension)."""
    return residue_module(ring, dimension)


# The generating cofibrations with their chosen cofibers.
def generating_monos(ring):
    zero, k, r = zero_module(ring), residue_module(ring), free_module(ring)
    return {
        '0->0': ModMorphism.zero(zero, zero),
        '0->k': ModMorphism.zero(zero, k),
        'k->k': ModMorphism.identity(k),
        '0->R': ModMorphism.zero(zero, r),
        'k->R': ModMorphism.blocks(k, r, kr=[[1]]),
        'R->R': ModMorphism.identity(r),
    }
