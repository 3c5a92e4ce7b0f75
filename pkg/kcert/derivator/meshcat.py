"""
Presented k-linear categories.

Hom spaces of a category presented by an acyclic quiver with relations are
computed recursively: Hom(x, y) is spanned by pairs (arrow a: x -> x', basis
path of Hom(x', y)) modulo the relations that start at x. The mesh category
of the linear quiver, the bimodule D_n, semidirect products, the zero-object
completion, the additive hull and the simplicial family of all of these live
here.
"""
import enum
import itertools
import logging
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .certificates import Evidence
from .exceptions import CompositionError, LocalityError, OutOfRangeError, SearchLimitError
from .ringlin import Matrix, howell_form, howell_solve

logger = logging.getLogger(__name__)


class _ZeroObject:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return '0'

    def __reduce__(self):
        return (_ZeroObject, ())


ZERO = _ZeroObject()


def object_key(x):
    return (1, ()) if x is ZERO else (0, tuple(x))


def object_label(x):
    return '0' if x is ZERO else f'({x[0]},{x[1]})'


@dataclass(frozen=True)
class Morphism:
    source: object
    target: object
    coords: tuple

    def is_zero(self):
        return not any(self.coords)

    def __str__(self):
        return f'{object_label(self.source)}->{object_label(self.target)}{list(self.coords)}'


class LinearCategory(ABC):
    def __init__(self, field):
        self.field = field

    @abstractmethod
    def hom_dim(self, x, y):
        ...

    @abstractmethod
    def compose(self, g, f):
        """g o f."""

    @abstractmethod
    def identity(self, x):
        ...

    def zero(self, x, y):
        return Morphism(x, y, (0,) * self.hom_dim(x, y))

    def basis(self, x, y):
        d = self.hom_dim(x, y)
        return [Morphism(x, y, tuple(int(i == b) for i in range(d))) for b in range(d)]

    def add(self, f, g):
        if (f.source, f.target) != (g.source, g.target):
            raise CompositionError(f'cannot add {f} and {g}')
        p = self.field.p
        return Morphism(f.source, f.target, tuple((a + b) % p for a, b in zip(f.coords, g.coords)))

    def scale(self, f, c):
        p = self.field.p
        return Morphism(f.source, f.target, tuple((a * c) % p for a in f.coords))

    def sub(self, f, g):
        return self.add(f, self.scale(g, -1))

    def combination(self, x, y, terms):
        total = self.zero(x, y)
        for c, f in terms:
            if c % self.field.p:
                total = self.add(total, self.scale(f, c))
        return total

    def _check_composable(self, g, f):
        if f.target != g.source:
            raise CompositionError(f'cannot compose {g} after {f}')


def _reduce(p, form, vector):
    if form is None:
        return vector
    for row, pivot in zip(form.rows.data, form.pivots):
        c = vector[pivot.column]
        if c:
            vector = (vector - c * row) % p
    return vector


def _relation_form(field, rows, width):
    if not rows or not width:
        return None
    return howell_form(Matrix(field, np.array(rows, dtype=np.int64), shape=(len(rows), width)))


@dataclass(frozen=True)
class Arrow:
    name: tuple
    source: object
    target: object


@dataclass(frozen=True)
class Relation:
    source: object
    target: object
    terms: tuple  # (coefficient, path), a path being arrow names in order of application


class _HomData:
    __slots__ = ('index', 'width', 'form', 'basis_columns', 'basis_paths')

    def __init__(self, index, width, form, basis_columns, basis_paths):
        self.index = index
        self.width = width
        self.form = form
        self.basis_columns = basis_columns
        self.basis_paths = basis_paths


class PresentedCategory(LinearCategory):
    def __init__(self, field, objects, arrows, relations):
        super().__init__(field)
        self.objects = tuple(objects)
        self.arrows = {a.name: a for a in arrows}
        self._out = {x: [] for x in self.objects}
        for a in arrows:
            self._out[a.source].append(a)
        self._relations = {x: [] for x in self.objects}
        for r in relations:
            self._relations[r.source].append(r)
        self._homs = {}
        self._paths = {}

    def _data(self, x, y):
        data = self._homs.get((x, y))
        if data is None:
            data = self._build(x, y)
            self._homs[(x, y)] = data
        return data

    def _build(self, x, y):
        if x == y:
            return _HomData({}, 0, None, (0,), ((),))
        ambient = []
        for arrow in self._out[x]:
            sub = self._data(arrow.target, y)
            ambient.extend((arrow.name, i) for i in range(len(sub.basis_paths)))
        index = {entry: pos for pos, entry in enumerate(ambient)}
        rows = []
        for relation in self._relations[x]:
            for tail in self._data(relation.target, y).basis_paths:
                row = np.zeros(len(ambient), dtype=np.int64)
                for coef, path in relation.terms:
                    row = row + coef * self._ambient_vector(index, len(ambient), y, path + tail)
                rows.append(row % self.field.p)
        form = _relation_form(self.field, rows, len(ambient))
        pivots = set() if form is None else {pv.column for pv in form.pivots}
        columns = tuple(c for c in range(len(ambient)) if c not in pivots)
        paths = tuple(
            (ambient[c][0],) + self._data(self.arrows[ambient[c][0]].target, y).basis_paths[ambient[c][1]]
            for c in columns
        )
        return _HomData(index, len(ambient), form, columns, paths)

    def _ambient_vector(self, index, width, y, path):
        first = self.arrows[path[0]]
        vector = np.zeros(width, dtype=np.int64)
        for i, c in enumerate(self.path_coordinates(first.target, y, path[1:])):
            if c:
                vector[index[(first.name, i)]] = c
        return vector

    def path_coordinates(self, x, y, path):
        key = (x, y, path)
        cached = self._paths.get(key)
        if cached is not None:
            return cached
        if not path:
            if x != y:
                raise CompositionError(f'empty path from {x} to {y}')
            coords = (1,)
        else:
            if self.arrows[path[0]].source != x:
                raise CompositionError(f'path {path} does not start at {x}')
            if x == y:
                raise CompositionError(f'nontrivial loop {path} at {x}')
            data = self._data(x, y)
            vector = _reduce(self.field.p, data.form, self._ambient_vector(data.index, data.width, y, path))
            coords = tuple(int(vector[c]) for c in data.basis_columns)
        self._paths[key] = coords
        return coords

    def hom_dim(self, x, y):
        return len(self._data(x, y).basis_paths)

    def basis_paths(self, x, y):
        return self._data(x, y).basis_paths

    def compose(self, g, f):
        self._check_composable(g, f)
        x, y, z = f.source, f.target, g.target
        p = self.field.p
        total = np.zeros(self.hom_dim(x, z), dtype=np.int64)
        for fc, fpath in zip(f.coords, self.basis_paths(x, y)):
            if not fc:
                continue
            for gc, gpath in zip(g.coords, self.basis_paths(y, z)):
                if gc:
                    total = (total + fc * gc * np.array(self.path_coordinates(x, z, fpath + gpath), dtype=np.int64)) % p
        return Morphism(x, z, tuple(int(c) for c in total))

    def identity(self, x):
        return Morphism(x, x, (1,))

    def path_morphism(self, x, y, path):
        return Morphism(x, y, self.path_coordinates(x, y, tuple(path)))

    def arrow(self, name):
        a = self.arrows[name]
        return self.path_morphism(a.source, a.target, (name,))


def hom_predicate(x, y):
    """Nonzero mesh homs: i2 <= i1 <= j2 <= j1."""
    (i1, j1), (i2, j2) = x, y
    return i2 <= i1 <= j2 <= j1


def dn_predicate(x, y):
    """Nonzero D_n spaces: i1 + 1 <= i2 <= j1 + 1 <= j2."""
    (i1, j1), (i2, j2) = x, y
    return i1 + 1 <= i2 <= j1 + 1 <= j2


def mesh_objects(n):
    return tuple((i, j) for i in range(n + 1) for j in range(i, n + 1))


class MeshCategory(PresentedCategory):
    def __init__(self, n, field):
        self.n = n
        objects = mesh_objects(n)
        arrows = []
        for i, j in objects:
            if i > 0:
                arrows.append(Arrow(('ne', i, j), (i, j), (i - 1, j)))
            if j > i:
                arrows.append(Arrow(('se', i, j), (i, j), (i, j - 1)))
        relations = []
        for i, j in objects:
            if 0 < i < j:
                relations.append(Relation((i, j), (i - 1, j - 1), (
                    (1, (('ne', i, j), ('se', i - 1, j))),
                    (-1, (('se', i, j), ('ne', i, j - 1))),
                )))
            if 0 < i == j:
                relations.append(Relation((i, i), (i - 1, i - 1), ((1, (('ne', i, i), ('se', i - 1, i))),)))
        super().__init__(field, objects, arrows, relations)

    @staticmethod
    def canonical_path(x, y):
        """ne steps first, then se steps."""
        (i1, j1), (i2, j2) = x, y
        return tuple(('ne', i, j1) for i in range(i1, i2, -1)) + tuple(('se', i2, j) for j in range(j1, j2, -1))

    def nu(self, x, y):
        if not hom_predicate(x, y):
            return self.zero(x, y)
        return self.path_morphism(x, y, self.canonical_path(x, y))

    def generators(self):
        return [self.arrow(name) for name in self.arrows]


def build_mesh(n, field):
    mesh = MeshCategory(n, field)
    logger.debug('mesh category at level %d: %d objects, %d arrows', n, len(mesh.objects), len(mesh.arrows))
    return mesh


@dataclass(frozen=True)
class BimoduleGenerator:
    name: tuple
    source: object
    target: object


@dataclass(frozen=True)
class BimoduleRelation:
    source: object
    target: object
    terms: tuple  # (coefficient, left morphism, generator name, right morphism)


class PresentedBimodule:
    """A bimodule over a presented category, free on generators modulo relations."""

    def __init__(self, category, generators, relations):
        self.category = category
        self.field = category.field
        self.generators = {g.name: g for g in generators}
        self.relations = tuple(relations)
        self._spaces = {}

    def _space(self, x, y):
        data = self._spaces.get((x, y))
        if data is None:
            data = self._build(x, y)
            self._spaces[(x, y)] = data
        return data

    def _build(self, x, y):
        c = self.category
        ambient = [(name, gi, fi)
                   for name, gen in self.generators.items()
                   for gi in range(c.hom_dim(gen.target, y))
                   for fi in range(c.hom_dim(x, gen.source))]
        index = {entry: pos for pos, entry in enumerate(ambient)}
        rows = []
        for relation in self.relations:
            for g in c.basis(relation.target, y):
                for f in c.basis(x, relation.source):
                    row = np.zeros(len(ambient), dtype=np.int64)
                    for coef, left, name, right in relation.terms:
                        row = row + coef * self._ambient(index, len(ambient), c.compose(g, left), name,
                                                         c.compose(right, f))
                    rows.append(row % self.field.p)
        form = _relation_form(self.field, rows, len(ambient))
        pivots = set() if form is None else {pv.column for pv in form.pivots}
        columns = tuple(col for col in range(len(ambient)) if col not in pivots)
        words = []
        for col in columns:
            name, gi, fi = ambient[col]
            gen = self.generators[name]
            words.append((c.basis(gen.target, y)[gi], name, c.basis(x, gen.source)[fi]))
        return _HomData(index, len(ambient), form, columns, tuple(words))

    @staticmethod
    def _ambient(index, width, left, name, right):
        vector = np.zeros(width, dtype=np.int64)
        for gi, gc in enumerate(left.coords):
            if not gc:
                continue
            for fi, fc in enumerate(right.coords):
                if fc:
                    vector[index[(name, gi, fi)]] += gc * fc
        return vector

    def _element(self, x, y, vector):
        data = self._space(x, y)
        vector = _reduce(self.field.p, data.form, vector % self.field.p)
        return Morphism(x, y, tuple(int(vector[col]) for col in data.basis_columns))

    def dim(self, x, y):
        return len(self._space(x, y).basis_columns)

    def words(self, x, y):
        """Basis elements as (left morphism, generator name, right morphism)."""
        return self._space(x, y).basis_paths

    def zero(self, x, y):
        return Morphism(x, y, (0,) * self.dim(x, y))

    def word_element(self, left, name, right):
        x, y = right.source, left.target
        data = self._space(x, y)
        return self._element(x, y, self._ambient(data.index, data.width, left, name, right))

    def generator(self, name):
        gen = self.generators[name]
        c = self.category
        return self.word_element(c.identity(gen.target), name, c.identity(gen.source))

    def act_left(self, g, a):
        """g . a for g in C(y, z) and a in D(x, y)."""
        if g.source != a.target:
            raise CompositionError(f'cannot act by {g} on {a}')
        x, z = a.source, g.target
        data = self._space(x, z)
        vector = np.zeros(data.width, dtype=np.int64)
        for coef, (left, name, right) in zip(a.coords, self.words(a.source, a.target)):
            if coef:
                vector += coef * self._ambient(data.index, data.width, self.category.compose(g, left), name, right)
        return self._element(x, z, vector)

    def act_right(self, a, f):
        """a . f for a in D(y, z) and f in C(x, y)."""
        if a.source != f.target:
            raise CompositionError(f'cannot act by {f} on {a}')
        x, z = f.source, a.target
        data = self._space(x, z)
        vector = np.zeros(data.width, dtype=np.int64)
        for coef, (left, name, right) in zip(a.coords, self.words(a.source, a.target)):
            if coef:
                vector += coef * self._ambient(data.index, data.width, left, name, self.category.compose(right, f))
        return self._element(x, z, vector)

    def add(self, a, b):
        p = self.field.p
        return Morphism(a.source, a.target, tuple((u + v) % p for u, v in zip(a.coords, b.coords)))


def phi_name(i):
    return ('phi', i)


def build_Dn(n, field, mesh=None):
    mesh = mesh or build_mesh(n, field)
    generators = [BimoduleGenerator(phi_name(i), (0, i - 1), (i, n)) for i in range(1, n + 1)]
    relations = []
    for i in range(1, n):
        relations.append(BimoduleRelation((0, i), (i, n), (
            (1, mesh.arrow(('ne', i + 1, n)), phi_name(i + 1), mesh.identity((0, i))),
            (-1, mesh.identity((i, n)), phi_name(i), mesh.arrow(('se', 0, i))),
        )))
    if n >= 1:
        relations.append(BimoduleRelation((0, 0), (0, n), (
            (1, mesh.arrow(('ne', 1, n)), phi_name(1), mesh.identity((0, 0))),
        )))
        # phi_{n+1} = 0
        relations.append(BimoduleRelation((0, n), (n, n), (
            (1, mesh.identity((n, n)), phi_name(n), mesh.arrow(('se', 0, n))),
        )))
    return PresentedBimodule(mesh, generators, relations)


class SemidirectProduct(LinearCategory):
    """Homs D(x, y) + C(x, y), composed by (b, g)(a, f) = (b.f + g.a, gf)."""

    def __init__(self, bimodule, category):
        super().__init__(category.field)
        self.bimodule = bimodule
        self.category = category
        self.objects = category.objects

    def hom_dim(self, x, y):
        return self.bimodule.dim(x, y) + self.category.hom_dim(x, y)

    def split(self, m):
        d = self.bimodule.dim(m.source, m.target)
        return (Morphism(m.source, m.target, m.coords[:d]), Morphism(m.source, m.target, m.coords[d:]))

    def join(self, a, f):
        return Morphism(f.source, f.target, tuple(a.coords) + tuple(f.coords))

    def embed_category(self, f):
        return self.join(self.bimodule.zero(f.source, f.target), f)

    def embed_bimodule(self, a):
        return self.join(a, self.category.zero(a.source, a.target))

    def compose(self, second, first):
        self._check_composable(second, first)
        b, g = self.split(second)
        a, f = self.split(first)
        d = self.bimodule
        part = d.add(d.act_right(b, f), d.act_left(g, a))
        return self.join(part, self.category.compose(g, f))

    def identity(self, x):
        return self.embed_category(self.category.identity(x))


def semidirect(bimodule, category):
    return SemidirectProduct(bimodule, category)


class ZeroCompletion(LinearCategory):
    def __init__(self, category):
        super().__init__(category.field)
        self.category = category
        self.objects = tuple(category.objects) + (ZERO,)

    def hom_dim(self, x, y):
        if x is ZERO or y is ZERO:
            return 0
        return self.category.hom_dim(x, y)

    def compose(self, g, f):
        self._check_composable(g, f)
        if ZERO in (f.source, f.target, g.target):
            return self.zero(f.source, g.target)
        return self.category.compose(g, f)

    def identity(self, x):
        if x is ZERO:
            return Morphism(ZERO, ZERO, ())
        return self.category.identity(x)


def add_zero(category):
    return ZeroCompletion(category)


class Additivization(LinearCategory):
    """Finite sequences of objects; morphisms are matrices, stored row-major by (target, source)."""

    def __init__(self, category):
        super().__init__(category.field)
        self.category = category

    def hom_dim(self, xs, ys):
        return sum(self.category.hom_dim(x, y) for y in ys for x in xs)

    def entries(self, f):
        out, offset = [], 0
        for y in f.target:
            row = []
            for x in f.source:
                d = self.category.hom_dim(x, y)
                row.append(Morphism(x, y, f.coords[offset:offset + d]))
                offset += d
            out.append(row)
        return out

    def from_entries(self, xs, ys, entries):
        coords = []
        for r, y in enumerate(ys):
            for c, x in enumerate(xs):
                coords.extend(entries[r][c].coords)
        return Morphism(tuple(xs), tuple(ys), tuple(coords))

    def compose(self, g, f):
        self._check_composable(g, f)
        c = self.category
        fe, ge = self.entries(f), self.entries(g)
        out = []
        for r, z in enumerate(g.target):
            row = []
            for col, x in enumerate(f.source):
                total = c.zero(x, z)
                for m in range(len(f.target)):
                    total = c.add(total, c.compose(ge[r][m], fe[m][col]))
                row.append(total)
            out.append(row)
        return self.from_entries(f.source, g.target, out)

    def identity(self, xs):
        c = self.category
        entries = [[c.identity(x) if r == col else c.zero(x, y) for col, x in enumerate(xs)]
                   for r, y in enumerate(xs)]
        return self.from_entries(xs, xs, entries)


def additivize(category):
    return Additivization(category)


def check_locality(category, x):
    """End(x) = k.id + N with N a multiplicatively closed span of nilpotents."""
    basis = category.basis(x, x)
    p = category.field.p
    ident = category.identity(x)
    rows = [list(ident.coords)]
    radical = []
    for b in basis:
        candidate = rows + [list(b.coords)]
        form = howell_form(Matrix(category.field, candidate, shape=(len(candidate), len(b.coords))))
        if len(form.pivots) > len(rows):
            rows.append(list(b.coords))
            radical.append(b)
    span = Matrix(category.field, rows, shape=(len(rows), len(ident.coords))) if rows[0] else None
    for e in radical:
        power = e
        for _ in range(len(basis)):
            power = category.compose(power, e)
        if not power.is_zero():
            raise LocalityError(f'End{object_label(x)} is not local', witness=str(e))
        for other in radical:
            product = category.compose(other, e)
            if span is not None and not product.is_zero():
                coeffs = howell_solve(span.T, Matrix(category.field, product.coords, shape=(len(product.coords), 1)))
                if not coeffs.solvable or coeffs.particular.data[0, 0] % p:
                    raise LocalityError(f'radical of End{object_label(x)} is not an ideal', witness=str(product))
    return True


def iso_classes(additive, xs):
    """Multiset of indecomposable summands, after checking every summand is local."""
    for x in set(xs):
        check_locality(additive.category, x)
    return Counter(xs)


def is_isomorphic(additive, xs, ys):
    return iso_classes(additive, xs) == iso_classes(additive, ys)


def find_isomorphism(additive, xs, ys, limit=4096):
    """A pair (f, g) of mutually inverse morphisms, or None."""
    xs, ys = tuple(xs), tuple(ys)
    dim = additive.hom_dim(xs, ys)
    p = additive.field.p
    if p ** dim > limit:
        raise SearchLimitError(f'{p}^{dim} candidate morphisms exceed {limit}')
    back = additive.basis(ys, xs)
    id_x, id_y = additive.identity(xs), additive.identity(ys)
    for coeffs in itertools.product(range(p), repeat=dim):
        f = Morphism(xs, ys, coeffs)
        images = [additive.compose(b, f).coords for b in back]
        if not back:
            if not id_x.coords and not id_y.coords:
                return f, Morphism(ys, xs, ())
            continue
        system = Matrix(additive.field, np.array(images, dtype=np.int64).T.reshape(len(id_x.coords), len(back)))
        solved = howell_solve(system, Matrix(additive.field, id_x.coords, shape=(len(id_x.coords), 1)))
        if not solved.solvable:
            continue
        g = Morphism(ys, xs, tuple(int(v) for v in solved.particular.data[:, 0]))
        if additive.compose(f, g) == id_y:
            return f, g
    return None


# The simplicial family.

class D0Variant(str, enum.Enum):
    ADOPTED = 'adopted'
    DISPLAYED = 'displayed'


D0_FORMULAS = {
    D0Variant.ADOPTED: 'd_0(0,j) = (j, n-1) for j < n',
    D0Variant.DISPLAYED: 'd_0(0,j) = (j+1, n-1) for j < n',
}


def face_object(n, t, x, variant=D0Variant.ADOPTED):
    """d_t on objects of level n + 1 (mesh level n)."""
    if x is ZERO:
        return ZERO
    i, j = x
    if t == 0:
        if i > 0:
            return (i - 1, j - 1)
        if j == n:
            return ZERO
        return (j, n - 1) if variant is D0Variant.ADOPTED else (j + 1, n - 1)
    t -= 1
    if t < i:
        return (i - 1, j - 1)
    if i <= t <= j and i < j:
        return (i, j - 1)
    if i == t == j:
        return ZERO
    return (i, j)


def degeneracy_object(n, t, x):
    """s_t on objects of level n + 1 (mesh level n)."""
    if x is ZERO:
        return ZERO
    i, j = x
    t -= 1
    if t < i:
        return (i + 1, j + 1)
    if t <= j:
        return (i, j + 1)
    return (i, j)


class Level:
    """The category (D_n x| mesh_n)_+ at simplicial level n + 1."""

    def __init__(self, index, field):
        self.index = index
        self.n = index - 1
        self.mesh = build_mesh(self.n, field)
        self.bimodule = build_Dn(self.n, field, self.mesh)
        self.product = SemidirectProduct(self.bimodule, self.mesh)
        self.category = ZeroCompletion(self.product)
        self.objects = self.category.objects

    def has_object(self, x):
        return x is ZERO or x in self.mesh.objects

    def mesh_morphism(self, f):
        return self.product.embed_category(f)

    def phi(self, i):
        return self.product.embed_bimodule(self.bimodule.generator(phi_name(i)))

    def generators(self):
        """Mesh arrows and the phi_i, as morphisms of the level category."""
        arrows = [self.mesh_morphism(self.mesh.arrow(name)) for name in self.mesh.arrows]
        return arrows + [self.phi(i) for i in range(1, self.n + 1)]

    def basis(self):
        for x in self.mesh.objects:
            for y in self.mesh.objects:
                yield from self.category.basis(x, y)


class SimplicialOperator:
    """A face (kind 'd') or degeneracy (kind 's') between consecutive levels."""

    def __init__(self, family, kind, index, level):
        self.family = family
        self.kind = kind
        self.index = index
        self.source = family.levels[level]
        self.target = family.levels[level - 1 if kind == 'd' else level + 1]

    def __repr__(self):
        return f'{self.kind}_{self.index}@{self.source.index}'

    def on_object(self, x):
        n = self.source.n
        if self.kind == 'd':
            y = face_object(n, self.index, x, self.family.variant)
        else:
            y = degeneracy_object(n, self.index, x)
        if not self.target.has_object(y):
            raise OutOfRangeError(
                f'{self!r} sends {object_label(x)} outside level {self.target.index}',
                witness=f'{self.kind}_{self.index}{object_label(x)} = ({y[0]},{y[1]}) at n={n}',
            )
        return y

    def _on_mesh_basis(self, x, y):
        fx, fy = self.on_object(x), self.on_object(y)
        if fx is ZERO or fy is ZERO:
            return self.target.category.zero(fx, fy)
        if self.kind == 'd' and self.index == 0 and y[0] == 0 < x[0]:
            return self._d0_crossing(fx, fy)
        return self.target.mesh_morphism(self.target.mesh.nu(fx, fy))

    def _d0_crossing(self, fx, fy):
        """d_0 of nu: (i1,j1) -> (0,j2) with i1 > 0 is phi_{j2} . nu(fx, (0, j2 - 1))."""
        target = self.target
        i = fy[0]
        if i < 1 or fy[1] != target.n:
            raise OutOfRangeError(
                f'{self!r} has no phi component into {object_label(fy)}',
                witness=f'd_0 lands at {object_label(fy)} at n={target.n}',
            )
        right = target.mesh.nu(fx, (0, i - 1))
        phi = target.bimodule.generator(phi_name(i))
        return target.product.embed_bimodule(target.bimodule.act_right(phi, right))

    def on_phi(self, i):
        """The image of phi_i as a morphism of the target level."""
        n = self.source.n
        src, tgt = (0, i - 1), (i, n)
        fx, fy = self.on_object(src), self.on_object(tgt)
        target = self.target
        if fx is ZERO or fy is ZERO:
            return target.category.zero(fx, fy)
        t = self.index
        if self.kind == 'd':
            if t == 0:
                image = target.product.identity(fx) if fx == fy else None
            else:
                t -= 1
                if t == 0 and i == 1:
                    image = target.category.zero(fx, fy)
                elif t < i:
                    image = target.phi(i - 1)
                else:
                    image = target.phi(i)
        else:
            if t == 0:
                phi = target.bimodule.generator(phi_name(i + 1))
                image = target.product.embed_bimodule(
                    target.bimodule.act_right(phi, target.mesh.arrow(('ne', 1, i))))
            else:
                image = target.phi(i + 1) if t - 1 < i else target.phi(i)
        if image is None or (image.source, image.target) != (fx, fy):
            found = 'nothing' if image is None else f'{object_label(image.source)}->{object_label(image.target)}'
            raise OutOfRangeError(
                f'{self!r} on phi_{i} does not match its endpoints',
                witness=f'{self.kind}_{self.index}(phi_{i}) must map {object_label(fx)}->{object_label(fy)}, '
                        f'formula gives {found} at n={n}',
            )
        return image

    def __call__(self, m):
        x, y = m.source, m.target
        fx, fy = self.on_object(x), self.on_object(y)
        target = self.target.category
        if x is ZERO or y is ZERO or fx is ZERO or fy is ZERO:
            return target.zero(fx, fy)
        source = self.source
        a, f = source.product.split(m)
        result = target.zero(fx, fy)
        for coef, _ in zip(f.coords, source.mesh.basis(x, y)):
            if coef:
                result = target.add(result, target.scale(self._on_mesh_basis(x, y), coef))
        for coef, (left, name, right) in zip(a.coords, source.bimodule.words(x, y)):
            if not coef:
                continue
            image = target.compose(
                self(source.mesh_morphism(left)),
                target.compose(self.on_phi(name[1]), self(source.mesh_morphism(right))),
            )
            result = target.add(result, target.scale(image, coef))
        return result


class SimplicialFamily:
    def __init__(self, field, top, variant=D0Variant.ADOPTED):
        self.field = field
        self.top = top
        self.variant = D0Variant(variant)
        self.levels = [Level(m, field) for m in range(top + 1)]
        self._validate()
        logger.info('simplicial family over %s built to level %d (%s d_0)', field, top, self.variant.value)

    def face(self, level, t):
        return SimplicialOperator(self, 'd', t, level)

    def degeneracy(self, level, t):
        return SimplicialOperator(self, 's', t, level)

    def operators(self, level):
        ops = []
        if level >= 1:
            ops.extend(self.face(level, t) for t in range(level + 1))
        if level + 1 <= self.top:
            ops.extend(self.degeneracy(level, t) for t in range(level + 1))
        return ops

    def _validate(self):
        for level in self.levels:
            for op in self.operators(level.index):
                for x in level.objects:
                    op.on_object(x)
                for i in range(1, level.n + 1):
                    op.on_phi(i)

    def signature(self, top=None):
        """Objects, hom dimensions and operator tables, for structural comparison."""
        top = self.top if top is None else top
        out = []
        for level in self.levels[:top + 1]:
            objects = sorted(level.objects, key=object_key)
            dims = tuple(tuple(level.category.hom_dim(x, y) for y in objects) for x in objects)
            tables = []
            for op in self.operators(level.index):
                if op.target.index > top:
                    continue
                tables.append((repr(op), tuple(object_label(op.on_object(x)) for x in objects),
                               tuple(op(g).coords for g in level.generators())))
            out.append((tuple(object_label(x) for x in objects), dims, tuple(tables)))
        return tuple(out)


def simplicial_family(field, top, variant=D0Variant.ADOPTED):
    return SimplicialFamily(field, top, variant)


def _identity_pairs(family, m):
    """(label, lhs operators, rhs operators) with operators applied right to left."""
    top = family.top
    pairs = []
    d, s = family.face, family.degeneracy
    if m >= 2:
        for j in range(m + 1):
            for i in range(j):
                pairs.append((f'd{i}d{j}=d{j - 1}d{i}', (d(m - 1, i), d(m, j)), (d(m - 1, j - 1), d(m, i))))
    if m + 2 <= top:
        for j in range(m + 1):
            for i in range(j + 1):
                pairs.append((f's{i}s{j}=s{j + 1}s{i}', (s(m + 1, i), s(m, j)), (s(m + 1, j + 1), s(m, i))))
    if m + 1 <= top:
        for j in range(m + 1):
            for i in range(m + 2):
                lhs = (d(m + 1, i), s(m, j))
                if i < j:
                    pairs.append((f'd{i}s{j}=s{j - 1}d{i}', lhs, (s(m - 1, j - 1), d(m, i))))
                elif i in (j, j + 1):
                    pairs.append((f'd{i}s{j}=id', lhs, ()))
                else:
                    pairs.append((f'd{i}s{j}=s{j}d{i - 1}', lhs, (s(m - 1, j), d(m, i - 1))))
    return pairs


def _apply_objects(ops, x):
    for op in reversed(ops):
        x = op.on_object(x)
    return x


def _apply(ops, f):
    for op in reversed(ops):
        f = op(f)
    return f


def check_simplicial_identities(family, top=None, morphism_top=None, evidence=None):
    """The simplicial identities on all objects and on the generating morphisms."""
    evidence = evidence or Evidence()
    top = family.top if top is None else min(top, family.top)
    morphism_top = top if morphism_top is None else min(morphism_top, top)
    for m in range(top + 1):
        level = family.levels[m]
        for label, lhs, rhs in _identity_pairs(family, m):
            for x in level.objects:
                left, right = _apply_objects(lhs, x), _apply_objects(rhs, x)
                evidence.expect(left == right, f'objects {label}',
                                f'level {m}: {object_label(x)} -> {object_label(left)} vs {object_label(right)}')
            if m > morphism_top:
                continue
            for g in level.generators():
                left, right = _apply(lhs, g), _apply(rhs, g)
                evidence.expect(left == right, f'morphisms {label}', f'level {m}: {g} -> {left} vs {right}')
    for m in range(1, morphism_top + 1):
        check_functoriality(family, m, evidence)
    return evidence


def check_functoriality(family, m, evidence):
    """F(a o f) = F(a) o F(f) for generators a and basis elements f at level m."""
    level = family.levels[m]
    cat = level.category
    for op in family.operators(m):
        target = op.target.category
        for a in level.generators():
            for x in level.mesh.objects:
                for f in cat.basis(x, a.source):
                    lhs = op(cat.compose(a, f))
                    rhs = target.compose(op(a), op(f))
                    evidence.expect(lhs == rhs, 'functoriality', f'{op!r} on {a} after {f}')
    return evidence


def check_mesh_closure(family, top=None, evidence=None):
    """Every operator takes mesh morphisms to mesh morphisms."""
    evidence = evidence or Evidence()
    top = family.top if top is None else top
    for m in range(1, top + 1):
        level = family.levels[m]
        for op in family.operators(m):
            for name in level.mesh.arrows:
                image = op(level.mesh_morphism(level.mesh.arrow(name)))
                if image.source is ZERO or image.target is ZERO:
                    continue
                bimodule_part, _ = op.target.product.split(image)
                evidence.expect(bimodule_part.is_zero(), 'mesh closure', f'{op!r} on {name}')
    return evidence


def b_objects(level):
    """(i, n) at mesh level n, and the zero object."""
    return tuple((i, level.n) for i in range(level.n + 1)) + (ZERO,)


def check_b_closure(family, top=None, evidence=None):
    evidence = evidence or Evidence()
    top = family.top if top is None else top
    for m in range(top + 1):
        level = family.levels[m]
        for op in family.operators(m):
            allowed = b_objects(op.target)
            for x in b_objects(level):
                y = op.on_object(x)
                evidence.expect(y in allowed, 'B closure', f'{op!r}{object_label(x)} = {object_label(y)}')
    return evidence


def hom_table(category, objects):
    return [[category.hom_dim(x, y) for y in objects] for x in objects]
