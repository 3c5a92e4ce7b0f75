"""
Diagrams X_0 -> X_1 -> ... -> X_n in mod R and their homotopy category.

A diagram is cofibrant when every connecting map is a monomorphism. Weak
equivalences are the levelwise stable equivalences, every object is fibrant,
and for cofibrant X two morphisms f, g: X -> Y are homotopic exactly when
g - f factors as eps o H through the levelwise free cover eps: F(Y) -> Y.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

from .exceptions import CompositionError, KcertError, NotNaturalError, OutOfRangeError, SearchLimitError, ShapeError
from .modcat import (
    FgModule, HomModule, ModMorphism, cokernel, direct_sum as direct_sum_modules, extend_along, free_cover,
    free_module, injective_embed, is_mono, kernel_generators, lift_along, linear_map, residue_module, solve,
    stable_hom, submodule_length, sum_of_morphisms, zero_module,
)

logger = logging.getLogger(__name__)

CACHE_SIZE = 2048


@dataclass(frozen=True)
class Diagram:
    ring: object
    objects: tuple
    maps: tuple  # maps[p - 1]: X_{p-1} -> X_p

    def __post_init__(self):
        object.__setattr__(self, 'objects', tuple(self.objects))
        object.__setattr__(self, 'maps', tuple(self.maps))
        if not self.objects:
            raise ShapeError('a diagram has at least one position')
        if len(self.maps) != len(self.objects) - 1:
            raise ShapeError(f'{len(self.objects)} positions need {len(self.objects) - 1} maps')
        for p, f in enumerate(self.maps, start=1):
            if (f.source, f.target) != (self.objects[p - 1], self.objects[p]):
                raise ShapeError(f'map {p} is {f.source} -> {f.target}, '
                                 f'expected {self.objects[p - 1]} -> {self.objects[p]}')

    @property
    def n(self):
        return len(self.objects) - 1

    def is_cofibrant(self):
        return all(is_mono(f) for f in self.maps)

    def is_zero(self):
        return all(x.is_zero() for x in self.objects)

    def composite(self, a, b):
        result = ModMorphism.identity(self.objects[a])
        for p in range(a + 1, b + 1):
            result = self.maps[p - 1] @ result
        return result

    def __str__(self):
        return ' -> '.join(str(x) for x in self.objects)


def direct_sum(*diagrams):
    if not diagrams:
        raise ShapeError('direct sum of no diagrams')
    n = diagrams[0].n
    objects = [direct_sum_modules(*(d.objects[p] for d in diagrams)).module for p in range(n + 1)]
    maps = [sum_of_morphisms(*(d.maps[p] for d in diagrams)) for p in range(n)]
    return Diagram(diagrams[0].ring, objects, maps)


@dataclass(frozen=True)
class DiagMorphism:
    source: Diagram
    target: Diagram
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, 'components', tuple(self.components))
        if self.source.n != self.target.n or len(self.components) != self.source.n + 1:
            raise ShapeError(f'{len(self.components)} components between {self.source} and {self.target}')
        for p, h in enumerate(self.components):
            if (h.source, h.target) != (self.source.objects[p], self.target.objects[p]):
                raise ShapeError(f'component {p} is {h.source} -> {h.target}')
        for p in range(1, self.source.n + 1):
            left = self.components[p] @ self.source.maps[p - 1]
            right = self.target.maps[p - 1] @ self.components[p - 1]
            if left != right:
                raise NotNaturalError(f'square {p} of {self} does not commute')

    @classmethod
    def identity(cls, diagram):
        return cls(diagram, diagram, tuple(ModMorphism.identity(x) for x in diagram.objects))

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, tuple(ModMorphism.zero(x, y) for x, y in zip(source.objects, target.objects)))

    def compose(self, other):
        """self o other."""
        if other.target != self.source:
            raise CompositionError(f'cannot compose {self} after {other}')
        return DiagMorphism(other.source, self.target, tuple(g @ f for g, f in zip(self.components, other.components)))

    __matmul__ = compose

    def __add__(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise CompositionError(f'cannot add {self} and {other}')
        return DiagMorphism(self.source, self.target, tuple(f + g for f, g in zip(self.components, other.components)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DiagMorphism(self.source, self.target, tuple(-f for f in self.components))

    def scale(self, code):
        return DiagMorphism(self.source, self.target, tuple(f.scale(code) for f in self.components))

    def is_zero(self):
        return all(f.is_zero() for f in self.components)

    def __str__(self):
        return '(' + ', '.join(str(f) for f in self.components) + ')'


def _kind_module(ring, kind):
    return {'0': zero_module, 'k': residue_module, 'R': free_module}[kind](ring)


def _standard_map(source, target):
    """Zero into or out of 0, identity on equal modules, alpha from k to R."""
    if source.is_zero() or target.is_zero():
        return ModMorphism.zero(source, target)
    if source == target:
        return ModMorphism.identity(source)
    if (source.free_rank, source.residue_rank, target.free_rank, target.residue_rank) == (0, 1, 1, 0):
        return ModMorphism.blocks(source, target, kr=[[1]])
    raise ShapeError(f'no standard map {source} -> {target}')


def _quotient_map(source, target):
    """q: R -> k; zero otherwise."""
    if (source.free_rank, source.residue_rank, target.free_rank, target.residue_rank) == (1, 0, 0, 1):
        return ModMorphism.blocks(source, target, rk=[[1]])
    return _standard_map(source, target)


def diagram_from_kinds(ring, kinds):
    objects = [_kind_module(ring, kind) for kind in kinds]
    maps = [_standard_map(objects[p - 1], objects[p]) for p in range(1, len(objects))]
    return Diagram(ring, objects, maps)


def _check_interval(i, j, n):
    if not 0 <= i <= j <= n:
        raise OutOfRangeError(f'no interval ({i}, {j}) at level {n}', witness=f'({i},{j}), n={n}')


def interval_diagram(i, j, n, ring):
    """M_{i,j}: k on positions i..j, zero elsewhere."""
    _check_interval(i, j, n)
    return diagram_from_kinds(ring, ['k' if i <= p <= j else '0' for p in range(n + 1)])


def zero_diagram(n, ring):
    return diagram_from_kinds(ring, ['0'] * (n + 1))


def mtilde_kinds(i, j, n):
    return ['0' if p < i else 'k' if p <= j else 'R' for p in range(n + 1)]


@dataclass(frozen=True)
class Replacement:
    """A cofibrant diagram with a levelwise stable equivalence onto the original."""
    diagram: Diagram
    weq: DiagMorphism


def mtilde(i, j, n, ring):
    """The cofibrant replacement M~_{i,j} -> M_{i,j}: k on i..j, then alpha into R on j+1..n."""
    _check_interval(i, j, n)
    source = diagram_from_kinds(ring, mtilde_kinds(i, j, n))
    target = interval_diagram(i, j, n, ring)
    components = [_standard_map(x, y) for x, y in zip(source.objects, target.objects)]
    return Replacement(source, DiagMorphism(source, target, components))


def cofibrant_replace(diagram):
    if diagram.is_cofibrant():
        return Replacement(diagram, DiagMorphism.identity(diagram))
    objects = [diagram.objects[0]]
    maps, weq = [], [ModMorphism.identity(diagram.objects[0])]
    for p in range(1, diagram.n + 1):
        g = diagram.maps[p - 1] @ weq[-1]
        hull, iota = injective_embed(objects[-1])
        total = direct_sum_modules(diagram.objects[p], hull)
        maps.append(total.injection(0) @ g + total.injection(1) @ iota)
        objects.append(total.module)
        weq.append(total.projection(0))
    replaced = Diagram(diagram.ring, objects, maps)
    logger.debug('cofibrant replacement of %s is %s', diagram, replaced)
    return Replacement(replaced, DiagMorphism(replaced, diagram, weq))


def free_cover_diagram(diagram):
    """(F(Y), eps): levelwise free covers with connecting maps lifted along the covers."""
    covers = [free_cover(x) for x in diagram.objects]
    maps = []
    for p in range(1, diagram.n + 1):
        lifted = lift_along(covers[p][1], diagram.maps[p - 1] @ covers[p - 1][1])
        if lifted is None:
            raise KcertError(f'no lift of map {p} of {diagram} to the free covers')
        maps.append(lifted)
    cover = Diagram(diagram.ring, [c[0] for c in covers], maps)
    return cover, DiagMorphism(cover, diagram, [c[1] for c in covers])


class DiagramHom:
    """Hom(X, Y) of diagrams inside the coordinate module of levelwise homs."""

    def __init__(self, source, target):
        if source.ring != target.ring or source.n != target.n:
            raise ShapeError(f'{source} and {target} are not diagrams of one shape over one ring')
        self.source = source
        self.target = target
        self.levels = [HomModule(x, y) for x, y in zip(source.objects, target.objects)]
        self.total = direct_sum_modules(*(h.module for h in self.levels))
        self.module = self.total.module

    def to_vector(self, f):
        return self.total.join([h.to_vector(c) for h, c in zip(self.levels, f.components)])

    def _components(self, vector):
        return [h.from_vector(v) for h, v in zip(self.levels, self.total.split(vector))]

    def from_vector(self, vector):
        return DiagMorphism(self.source, self.target, self._components(vector))

    def _defect_map(self):
        n = self.source.n
        defects = [HomModule(self.source.objects[p - 1], self.target.objects[p]) for p in range(1, n + 1)]
        space = direct_sum_modules(*(d.module for d in defects))
        images = []
        for index in range(self.module.rank):
            comps = self._components(self.module.unit_vector(index))
            images.append(space.join([
                d.to_vector(comps[p] @ self.source.maps[p - 1] - self.target.maps[p - 1] @ comps[p - 1])
                for p, d in enumerate(defects, start=1)
            ]))
        return linear_map(self.module, space.module, images)

    def generators(self):
        """Generators of the natural transformations, as vectors."""
        if not self.module.rank:
            return []
        if not self.source.n:
            return [self.module.unit_vector(i) for i in range(self.module.rank)]
        return kernel_generators(self._defect_map())


def _solve_modulo(module, columns, null, rhs):
    """Coefficients c (residues) with sum c_i columns_i - rhs in span(null), or None."""
    every = list(columns) + list(null)
    if not every:
        return () if not module.canonical(rhs).any() else None
    system = linear_map(FgModule(module.ring, len(every), 0), module, every)
    x = solve(system, rhs)
    if x is None:
        return None
    return tuple(int(c) for c in module.ring.residue(x[:len(columns)]))


class HoHomSpace:
    """Ho(X, Y) = Hom(X~, Y) modulo morphisms factoring through eps: F(Y) -> Y."""

    def __init__(self, source, target):
        self.source = source
        self.target = target
        self.replacement = cofibrant_replace(source)
        self.cofibrant = self.replacement.diagram
        self.cover, self.eps = free_cover_diagram(target)
        self.hom = DiagramHom(self.cofibrant, target)
        through = DiagramHom(self.cofibrant, self.cover)
        self.homotopies = [through.from_vector(v) for v in through.generators()]
        self.null = [self.hom.to_vector(self.eps @ h) for h in self.homotopies]
        candidates = [self.hom.from_vector(v) for v in self.hom.generators()]
        chosen = self._extend(candidates)
        self.basis = tuple(candidates[i] for i in chosen)
        logger.debug('Ho(%s, %s) has dimension %d', source, target, len(self.basis))

    def _extend(self, candidates):
        module = self.hom.module
        current = list(self.null)
        length = submodule_length(module, current) if current else 0
        chosen = []
        for index, f in enumerate(candidates):
            grown = submodule_length(module, current + [self.hom.to_vector(f)])
            if grown == length:
                continue
            if grown != length + 1:
                raise KcertError(f'Ho({self.source}, {self.target}) is not annihilated by alpha')
            current.append(self.hom.to_vector(f))
            length = grown
            chosen.append(index)
        return chosen

    @property
    def dimension(self):
        return len(self.basis)

    def represent(self, f):
        """A representative on the cofibrant replacement."""
        if f.source == self.cofibrant:
            return f
        if f.source == self.source:
            return f @ self.replacement.weq
        raise CompositionError(f'{f} does not start at {self.source}')

    def is_zero(self, f):
        vector = self.hom.to_vector(self.represent(f))
        if not self.null:
            return not self.hom.module.canonical(vector).any()
        base = submodule_length(self.hom.module, self.null)
        return submodule_length(self.hom.module, self.null + [vector]) == base

    def are_homotopic(self, f, g):
        return self.is_zero(self.represent(f) - self.represent(g))

    def coordinates(self, f):
        vector = self.hom.to_vector(self.represent(f))
        coords = _solve_modulo(self.hom.module, [self.hom.to_vector(b) for b in self.basis], self.null, vector)
        if coords is None:
            raise KcertError(f'{f} is not in the span of the Ho basis')
        return coords

    def null_homotopy(self, f):
        """H: X~ -> F(Y) with eps o H = f, or None."""
        vector = self.hom.to_vector(self.represent(f))
        if not self.homotopies:
            return DiagMorphism.zero(self.cofibrant, self.cover) if self.is_zero(f) else None
        module = self.hom.module
        system = linear_map(FgModule(module.ring, len(self.null), 0), module, self.null)
        coords = solve(system, vector)
        if coords is None:
            return None
        # coefficients over R, not just their residues
        total = DiagMorphism.zero(self.cofibrant, self.cover)
        for c, h in zip(coords, self.homotopies):
            if c:
                total = total + h.scale(int(c))
        return total

    def combination(self, coords):
        total = DiagMorphism.zero(self.cofibrant, self.target)
        for c, b in zip(coords, self.basis):
            if c:
                total = total + b.scale(c)
        return total


@lru_cache(maxsize=CACHE_SIZE)
def ho_hom(source, target):
    if source.ring != target.ring:
        raise ShapeError(f'{source} and {target} live over different rings')
    return HoHomSpace(source, target)


def is_contractible(diagram):
    return ho_hom(diagram, diagram).dimension == 0


@lru_cache(maxsize=CACHE_SIZE)
def _stable(source, target):
    return stable_hom(source, target)


def stable_components(f):
    """Coordinates of every component in the stable hom spaces, concatenated."""
    coords = []
    for h in f.components:
        coords.extend(_stable(h.source, h.target).coordinates(h))
    return tuple(coords)


def stable_dimensions(source, target):
    return tuple(_stable(x, y).dimension for x, y in zip(source.objects, target.objects))


def _step(x, y, n, ring):
    source = mtilde(*x, n, ring).diagram
    target = mtilde(*y, n, ring).diagram
    return DiagMorphism(source, target, [_standard_map(a, b) for a, b in zip(source.objects, target.objects)])


def nu_lift(path, n, ring):
    """The composite of the lifted ne/se steps along ``path``, a sequence of objects (i, j)."""
    path = [tuple(x) for x in path]
    for x in path:
        _check_interval(*x, n)
    result = DiagMorphism.identity(mtilde(*path[0], n, ring).diagram)
    for x, y in zip(path, path[1:]):
        if y not in ((x[0] - 1, x[1]), (x[0], x[1] - 1)):
            raise OutOfRangeError(f'{x} -> {y} is not a mesh step', witness=f'{x} -> {y}')
        result = _step(x, y, n, ring) @ result
    return result


def canonical_path(x, y):
    """ne steps first, then se steps, from x down to y."""
    (i1, j1), (i2, j2) = x, y
    if not (i2 <= i1 and j2 <= j1 and i2 <= j2):
        raise OutOfRangeError(f'no monotone path {x} -> {y}', witness=f'{x} -> {y}')
    return [(i, j1) for i in range(i1, i2 - 1, -1)] + [(i2, j) for j in range(j1 - 1, j2 - 1, -1)]


def nu_tilde(x, y, n, ring):
    return nu_lift(canonical_path(x, y), n, ring)


def phi_tilde(i, n, ring):
    """M~_{0,i-1} -> M_{i,n}: zero on the k positions, q on the R positions."""
    if not 0 < i <= n:
        raise OutOfRangeError(f'no phi_{i} at level {n}', witness=f'i={i}, n={n}')
    source = mtilde(0, i - 1, n, ring).diagram
    target = mtilde(i, n, n, ring).diagram
    return DiagMorphism(source, target, [_quotient_map(a, b) for a, b in zip(source.objects, target.objects)])


def htrivial(x, y, n, ring):
    """M~_{i1,j1} -> M_{i2,j2} for i2 <= i1 and j1 < j2: zero on the k positions, q on the R positions."""
    (i1, j1), (i2, j2) = x, y
    if not (i2 <= i1 and j1 + 1 <= j2):
        raise OutOfRangeError(f'no htrivial map {x} -> {y}', witness=f'{x} -> {y}, n={n}')
    source = mtilde(i1, j1, n, ring).diagram
    target = interval_diagram(i2, j2, n, ring)
    components = [
        ModMorphism.blocks(a, b, rk=[[1]]) if a.free_rank and b.residue_rank else ModMorphism.zero(a, b)
        for a, b in zip(source.objects, target.objects)
    ]
    return DiagMorphism(source, target, components)


@dataclass(frozen=True)
class Suspension:
    diagram: Diagram
    cone: Diagram
    inclusion: DiagMorphism
    projection: DiagMorphism


def suspend(diagram):
    """Sigma X: the cofiber of X into a levelwise injective cone C(X)."""
    hulls = [injective_embed(x) for x in diagram.objects]
    cone_maps = []
    for p in range(1, diagram.n + 1):
        extended = extend_along(hulls[p - 1][1], hulls[p][1] @ diagram.maps[p - 1])
        if extended is None:
            raise KcertError(f'map {p} of {diagram} does not extend to the injective hulls')
        cone_maps.append(extended)
    cone = Diagram(diagram.ring, [h[0] for h in hulls], cone_maps)
    inclusion = DiagMorphism(diagram, cone, [h[1] for h in hulls])
    cofibers = [cokernel(h[1]) for h in hulls]
    maps = []
    for p in range(1, diagram.n + 1):
        induced = extend_along(cofibers[p - 1].projection, cofibers[p].projection @ cone_maps[p - 1])
        if induced is None:
            raise KcertError(f'map {p} of the cone does not descend to the cofibers')
        maps.append(induced)
    suspended = Diagram(diagram.ring, [c.module for c in cofibers], maps)
    projection = DiagMorphism(cone, suspended, [c.projection for c in cofibers])
    logger.debug('suspension of %s is %s', diagram, suspended)
    return Suspension(suspended, cone, inclusion, projection)


@dataclass(frozen=True)
class HoIsomorphism:
    forward: DiagMorphism
    backward: DiagMorphism


def ho_isomorphism(first, second, limit=4096):
    """Mutually inverse classes between the cofibrant replacements, or None."""
    a = cofibrant_replace(first).diagram
    b = cofibrant_replace(second).diagram
    forward, backward = ho_hom(a, b), ho_hom(b, a)
    end_a, end_b = ho_hom(a, a), ho_hom(b, b)
    if end_a.dimension == 0 and end_b.dimension == 0:
        return HoIsomorphism(DiagMorphism.zero(a, b), DiagMorphism.zero(b, a))
    p = a.ring.p
    if p ** forward.dimension > limit:
        raise SearchLimitError(f'{p}^{forward.dimension} candidate classes exceed {limit}')
    id_a = end_a.hom.to_vector(DiagMorphism.identity(a))
    id_b = DiagMorphism.identity(b)
    for coeffs in itertools.product(range(p), repeat=forward.dimension):
        if not any(coeffs):
            continue
        f = forward.combination(coeffs)
        columns = [end_a.hom.to_vector(g @ f) for g in backward.basis]
        solved = _solve_modulo(end_a.hom.module, columns, end_a.null, id_a)
        if solved is None:
            continue
        g = backward.combination(solved)
        if end_b.are_homotopic(f @ g, id_b):
            return HoIsomorphism(f, g)
    return None


def is_ho_isomorphic(first, second, limit=4096):
    return ho_isomorphism(first, second, limit) is not None
