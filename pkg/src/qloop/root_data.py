"""Simply-laced root data: Dynkin diagrams, Cartan matrices, lattices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence, Tuple


class DiagramError(ValueError):
    """Raised for diagrams outside finite simply-laced type."""


@dataclass(frozen=True)
class DynkinDiagram:
    """A finite graph ``(I, E)`` without loops, of finite type A/D/E.

    Vertices are labelled ``1..n``; node ``0`` is reserved for the affine
    vertex of the extended diagram.
    """

    vertices: Tuple[int, ...]
    edges: FrozenSet[FrozenSet[int]]
    name: str = field(default="", compare=False)
    _cartan: Tuple[Tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        vs = tuple(self.vertices)
        if not vs:
            raise DiagramError("empty diagram")
        if 0 in vs:
            raise DiagramError("vertex 0 is reserved for the affine node")
        for e in self.edges:
            if len(e) != 2:
                raise DiagramError(f"edge {set(e)} is a loop")
            if not e <= set(vs):
                raise DiagramError(f"edge {set(e)} uses unknown vertices")
        if not _connected(vs, self.edges):
            raise DiagramError("diagram is not connected")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "_cartan", _cartan_entries(vs, self.edges))
        failing = _failing_minor(self._cartan)
        if failing is not None:
            raise DiagramError(
                f"Cartan matrix is not positive definite: leading minor of size {failing} is not positive"
            )

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def index(self, i: int) -> int:
        return self.vertices.index(i)

    def a(self, i: int, j: int) -> int:
        """Cartan entry ``a_ij`` for finite nodes."""
        return self._cartan[self.index(i)][self.index(j)]

    def neighbours(self, i: int) -> List[int]:
        return [j for j in self.vertices if j != i and frozenset((i, j)) in self.edges]

    def type_letter(self) -> str:
        return self.name[:1] if self.name else "?"

    def is_type_a(self) -> bool:
        n = self.rank
        return self.vertices == tuple(range(1, n + 1)) and self.edges == frozenset(
            frozenset((i, i + 1)) for i in range(1, n)
        )

    def to_json(self):
        if self.name and self.name[0] in "ADE" and self.name[1:].isdigit():
            return {"type": self.name[0], "rank": int(self.name[1:])}
        return {"vertices": list(self.vertices), "edges": sorted(sorted(e) for e in self.edges)}


def _connected(vs, edges) -> bool:
    seen = {vs[0]}
    stack = [vs[0]]
    while stack:
        v = stack.pop()
        for e in edges:
            if v in e:
                (w,) = e - {v}
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return len(seen) == len(vs)


def _cartan_entries(vs, edges):
    return tuple(
        tuple(2 if i == j else (-1 if frozenset((i, j)) in edges else 0) for j in vs) for i in vs
    )


def _det(m: Sequence[Sequence[int]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def _failing_minor(c) -> "int | None":
    for k in range(1, len(c) + 1):
        if _det([row[:k] for row in c[:k]]) <= 0:
            return k
    return None


def type_a(n: int) -> DynkinDiagram:
    return DynkinDiagram(tuple(range(1, n + 1)), frozenset(frozenset((i, i + 1)) for i in range(1, n)), f"A{n}")


def type_d(n: int) -> DynkinDiagram:
    if n < 4:
        raise DiagramError("type D needs rank >= 4")
    edges = {frozenset((i, i + 1)) for i in range(1, n - 1)}
    edges.add(frozenset((n - 2, n)))
    return DynkinDiagram(tuple(range(1, n + 1)), frozenset(edges), f"D{n}")


def type_e(n: int) -> DynkinDiagram:
    if n not in (6, 7, 8):
        raise DiagramError("type E exists for ranks 6, 7, 8")
    # Bourbaki labelling: 1-3-4-5-6(-7-8), 2 attached to 4
    edges = {frozenset((1, 3)), frozenset((3, 4)), frozenset((2, 4))}
    edges |= {frozenset((i, i + 1)) for i in range(4, n)}
    return DynkinDiagram(tuple(range(1, n + 1)), frozenset(edges), f"E{n}")


PRESETS = {"A1": type_a(1), "A2": type_a(2), "A3": type_a(3), "A4": type_a(4), "D4": type_d(4)}


def diagram_from_json(spec) -> DynkinDiagram:
    """Accepts ``{"type": "A", "rank": 2}``, ``"A2"``, or an explicit edge list."""
    if isinstance(spec, DynkinDiagram):
        return spec
    if isinstance(spec, str):
        letter, rank = spec[0].upper(), spec[1:].lstrip("_")
        return diagram_from_json({"type": letter, "rank": int(rank)})
    if "type" in spec:
        letter = str(spec["type"]).upper()
        rank = int(spec["rank"])
        builders = {"A": type_a, "D": type_d, "E": type_e}
        if letter not in builders:
            raise DiagramError(f"unsupported type {letter!r}; only simply-laced A, D, E")
        return builders[letter](rank)
    edges = frozenset(frozenset(e) for e in spec["edges"])
    vertices = spec.get("vertices") or sorted({v for e in spec["edges"] for v in e})
    return DynkinDiagram(tuple(vertices), edges, spec.get("name", ""))


def cartan_matrix(d: DynkinDiagram) -> List[List[int]]:
    return [list(row) for row in d._cartan]


class Weight:
    """Integral vector in the fundamental-weight basis of ``P``."""

    __slots__ = ("diagram", "coords")
    basis = "omega"

    def __init__(self, diagram: DynkinDiagram, coords: Dict[int, int]):
        self.diagram = diagram
        self.coords = {i: int(coords.get(i, 0)) for i in diagram.vertices}

    @classmethod
    def fundamental(cls, d: DynkinDiagram, i: int) -> "Weight":
        return cls(d, {i: 1})

    def key(self) -> Tuple[int, ...]:
        return tuple(self.coords[i] for i in self.diagram.vertices)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other):
        if type(other) is not type(self) or other.diagram != self.diagram:
            raise DiagramError("lattice elements from different diagrams or lattices")

    def __add__(self, other):
        self._check(other)
        return type(self)(self.diagram, {i: self.coords[i] + other.coords[i] for i in self.coords})

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.diagram, {i: self.coords[i] - other.coords[i] for i in self.coords})

    def __neg__(self):
        return type(self)(self.diagram, {i: -c for i, c in self.coords.items()})

    def __rmul__(self, n: int):
        return type(self)(self.diagram, {i: n * c for i, c in self.coords.items()})

    def __eq__(self, other):
        return type(other) is type(self) and other.diagram == self.diagram and other.coords == self.coords

    def __hash__(self):
        return hash((type(self).__name__, self.key()))

    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coords.values())

    def __repr__(self):
        sym = "w" if self.basis == "omega" else "a"
        terms = [f"{c}{sym}{i}" if c != 1 else f"{sym}{i}" for i, c in self.coords.items() if c]
        return "+".join(terms) if terms else "0"


class RootVector(Weight):
    """Integral vector in the simple-root basis of ``Q``."""

    basis = "alpha"

    @classmethod
    def simple(cls, d: DynkinDiagram, i: int) -> "RootVector":
        return cls(d, {i: 1})

    def to_weight(self) -> Weight:
        d = self.diagram
        return Weight(d, {j: sum(self.coords[i] * d.a(i, j) for i in d.vertices) for j in d.vertices})


def pairing(alpha: RootVector, lam: Weight) -> int:
    """Bilinear extension of ``(alpha_i | omega_j) = delta_ij``."""
    if not isinstance(alpha, RootVector) or isinstance(lam, RootVector) or alpha.diagram != lam.diagram:
        raise DiagramError("pairing needs a root vector and a weight of the same diagram")
    return sum(alpha.coords[i] * lam.coords[i] for i in alpha.diagram.vertices)


def weyl_rho(d: DynkinDiagram) -> Weight:
    return Weight(d, {i: 1 for i in d.vertices})


def positive_roots(d: DynkinDiagram) -> List[RootVector]:
    """All positive roots, by closure of the simple roots under adding simple
    roots while the result stays a root (``(beta|alpha_i) = -1``)."""
    simple = [RootVector.simple(d, i) for i in d.vertices]
    roots = {r.key(): r for r in simple}
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            bw = beta.to_weight()
            for i in d.vertices:
                if bw[i] == -1:
                    gamma = beta + RootVector.simple(d, i)
                    if gamma.key() not in roots:
                        roots[gamma.key()] = gamma
                        nxt.append(gamma)
        frontier = nxt
    return sorted(roots.values(), key=lambda r: (sum(r.key()), r.key()))


def highest_root(d: DynkinDiagram) -> RootVector:
    return max(positive_roots(d), key=lambda r: sum(r.key()))


def affine_cartan(d: DynkinDiagram) -> Dict[Tuple[int, int], int]:
    """Cartan matrix of the extended diagram on ``{0} + I``."""
    theta = highest_root(d).to_weight()
    out = {}
    nodes = (0,) + d.vertices
    for i in nodes:
        for j in nodes:
            if i == 0 and j == 0:
                out[i, j] = 2
            elif i == 0:
                out[i, j] = -theta[j]
            elif j == 0:
                out[i, j] = -theta[i]
            else:
                out[i, j] = d.a(i, j)
    return out


def spanning_order(d: DynkinDiagram, root: int) -> List[Tuple[int, int]]:
    """Breadth-first (parent, child) pairs covering the diagram from ``root``."""
    order = []
    seen = {root}
    queue = [root]
    while queue:
        v = queue.pop(0)
        for w in d.neighbours(v):
            if w not in seen:
                seen.add(w)
                order.append((v, w))
                queue.append(w)
    return order


def descending_chain(d: DynkinDiagram) -> Tuple[int, List[int]]:
    """A simple root ``alpha_s`` and nodes ``j_1..j_m`` with
    ``theta - alpha_{j_1} - ... - alpha_{j_t}`` a positive root for every
    ``t`` and equal to ``alpha_s`` at ``t = m``."""
    theta = highest_root(d)
    beta = theta
    chain: List[int] = []
    while sum(beta.key()) > 1:
        bw = beta.to_weight()
        j = next(i for i in d.vertices if bw[i] == 1 and beta[i] > 0)
        beta = beta - RootVector.simple(d, j)
        chain.append(j)
    (s,) = [i for i in d.vertices if beta[i] == 1]
    return s, chain

