"""Submodules, duals, cyclicity and the standard-module harness."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import KM, KP, E, F, Gen, KKac, XMinus, XPlus
from .linalg import Echelon, SparseMatrix, Vector
from .repmod import ModuleRealization, SpectralParam, evaluation_module, highest_weight_line, tensor
from .root_data import diagram_from_json
from .scalar import check_zeta, coerce


class Subspace:
    """Row-reduced basis of a subspace of a module."""

    def __init__(self, ambient: int, echelon: Optional[Echelon] = None):
        self.ambient = ambient
        self._ech = echelon or Echelon(ambient)

    @property
    def dim(self) -> int:
        return len(self._ech)

    def basis(self) -> List[Vector]:
        return self._ech.basis()

    def pivots(self) -> List[int]:
        return self._ech.pivots()

    def __contains__(self, v: Vector) -> bool:
        return self._ech.contains(v)

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def __le__(self, other: "Subspace") -> bool:
        return all(v in other for v in self.basis())

    def __repr__(self):
        return f"Subspace(dim={self.dim}/{self.ambient})"


def closure_generators(M: ModuleRealization) -> List[SparseMatrix]:
    """``e_i, f_i, k_i^{+-1}`` for ``i`` in ``I + {0}``; they generate the algebra."""
    out = []
    for i in (0,) + M.diagram.vertices:
        out += [M.act(E(i)), M.act(F(i)), M.act(KKac(i)), M.act(KKac(i, -1))]
    return out


def generated_submodule(M: ModuleRealization, v: Vector) -> Subspace:
    """Smallest invariant subspace containing ``v``, by worklist closure."""
    ech = Echelon(M.dim)
    gens = closure_generators(M)
    work = []
    r = ech.add(v)
    if r is not None:
        work.append(r)
    while work:
        w = work.pop()
        for g in gens:
            new = ech.add(g.apply(w))
            if new is not None:
                work.append(new)
    return Subspace(M.dim, ech)


def is_cyclic(M: ModuleRealization, v: Vector) -> bool:
    if not v:
        raise ValueError("cyclicity of the zero vector is undefined")
    return generated_submodule(M, v).is_full()


def dual_module(M: ModuleRealization) -> ModuleRealization:
    """Left dual: ``g`` acts on functionals as the transpose of ``S(g)``.

    ``S`` is the antipode of the Chevalley coproduct, ``S(e) = -k^{-1} e``,
    ``S(f) = -f k``, ``S(k) = k^{-1}``.  Weights are negated.  The
    Drinfeld action is derived from the Chevalley one.
    """
    km = {}
    for i in (0,) + M.diagram.vertices:
        k, ki = M.act(KKac(i)), M.act(KKac(i, -1))
        km[E(i)] = (-(ki @ M.act(E(i)))).T
        km[F(i)] = (-(M.act(F(i)) @ k)).T
        km[KKac(i)] = ki.T
        km[KKac(i, -1)] = k.T
    return ModuleRealization(
        M.diagram,
        M.zeta,
        [f"{b}*" for b in M.labels],
        [-w for w in M.weights],
        km,
        spectral_params=M.spectral_params,
        name=f"{M.name}^*",
    )


class WeightSpaceError(ValueError):
    pass


def is_cocyclic(M: ModuleRealization, v: Vector) -> bool:
    """True iff ``M`` is cogenerated by ``v``: the dual is generated by the
    functional dual to ``v``.  Only for ``v`` spanning its weight space."""
    if not v:
        raise ValueError("cocyclicity of the zero vector is undefined")
    w = M.weights[min(v)].key()
    space = [b for b in range(M.dim) if M.weights[b].key() == w]
    if len(space) != 1 or set(v) != set(space):
        raise WeightSpaceError("vector must span a one-dimensional weight space")
    return is_cyclic(dual_module(M), {space[0]: 1})


def highest_weight_tensor(M: ModuleRealization) -> Vector:
    """Tensor of the factors' top basis vectors (index 0 in every factor)."""
    return {0: coerce(1, M.zeta)}


def standard_module(factors: Sequence[Tuple[int, object, int]], zeta=Fraction(2), coproduct: str = "circ", diagram=None):
    """Ordered tensor of ``V(omega_{i_j})`` with parameters ``alpha * zeta^tau_j``.

    ``factors`` is a list of ``(node, alpha, tau)``; ``diagram`` defaults to
    ``A_1``.
    """
    if not factors:
        raise ValueError("standard module needs at least one factor")
    d = diagram_from_json(diagram if diagram is not None else "A1")
    zeta = check_zeta(zeta)
    mods = []
    for node, alpha, shift in factors:
        alpha = Fraction(alpha) if not hasattr(alpha, "num") else alpha
        m = evaluation_module(d, node, alpha * zeta ** shift, zeta, check=False)
        m.spectral_params = (SpectralParam(node, alpha, shift),)
        mods.append(m)
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m, coproduct)
    return out


@dataclass
class CyclicityReport:
    cyclic: bool
    submodule_dim: int
    dimension: int
    cocyclic: Optional[bool] = None

    def to_json(self):
        out = {"cyclic": self.cyclic, "submodule_dim": self.submodule_dim, "witness_basis_size": self.submodule_dim, "dimension": self.dimension}
        if self.cocyclic is not None:
            out["cocyclic"] = self.cocyclic
        return out


def cyclicity_report(M: ModuleRealization, with_cocyclic: bool = True) -> CyclicityReport:
    v = highest_weight_tensor(M)
    sub = generated_submodule(M, v)
    co = is_cocyclic(M, v) if with_cocyclic else None
    return CyclicityReport(sub.is_full(), sub.dim, M.dim, co)


def detect_orientation(zeta=Fraction(2), coproduct: str = "circ") -> str:
    """Which monotone shift order makes standard modules cyclic.

    Decided once on ``A_1`` at the critical ratio ``zeta^2``: returns
    ``"descending"`` if ``V_{zeta^2} (x) V_1`` is cyclic from the top tensor,
    ``"ascending"`` if ``V_1 (x) V_{zeta^2}`` is; raises if neither or both.
    """
    down = is_cyclic(standard_module([(1, 1, 2), (1, 1, 0)], zeta, coproduct), {0: 1})
    up = is_cyclic(standard_module([(1, 1, 0), (1, 1, 2)], zeta, coproduct), {0: 1})
    if down == up:
        raise RuntimeError("critical-ratio dichotomy failed; orientation undetermined")
    return "descending" if down else "ascending"


# ------------------------------------------------------ triangular coproduct


def _block(m: SparseMatrix, n2: int, a: int, b: int) -> SparseMatrix:
    """Matrix of ``m`` from ``v_b (x) M2`` into ``v_a (x) M2``."""
    rows = {}
    for i, row in m.rows.items():
        if a * n2 <= i < (a + 1) * n2:
            r = {j - b * n2: v for j, v in row.items() if b * n2 <= j < (b + 1) * n2}
            if r:
                rows[i - a * n2] = r
    return SparseMatrix(n2, n2, rows)


def _block_second(m: SparseMatrix, n1: int, n2: int, a: int, b: int) -> SparseMatrix:
    """Matrix of ``m`` from ``M1 (x) v_b`` into ``M1 (x) v_a``."""
    rows = {}
    for i, row in m.rows.items():
        if i % n2 == a:
            r = {j // n2: v for j, v in row.items() if j % n2 == b}
            if r:
                rows[i // n2] = r
    return SparseMatrix(n1, n1, rows)


@dataclass
class TriangularResult:
    ok: bool
    sign: int
    r: int
    terms: int

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "sign": "+" if self.sign > 0 else "-", "r": self.r, "terms": self.terms}


def triangular_coproduct_check(M1: ModuleRealization, M2: ModuleRealization, i: int, r: int, sign: int = 1) -> TriangularResult:
    """Compare the coproduct action of ``x+-_{i,r}`` with its triangular part.

    The tensor's Drinfeld action is derived from its Chevalley action
    (independently of the factors' Drinfeld data).  For ``x+`` the action
    is restricted to the highest-weight line ``v`` of ``M1`` tensored with
    ``M2`` and projected back onto it; it must equal::

        sum_{s=0}^{r}      k+_{i,s}  (x) x+_{i,r-s}      r >= 0
        sum_{s=0}^{-r-1}   k-_{i,-s} (x) x+_{i,r+s}      r <  0

    Terms lowering the first factor (those that vanish in the limiting
    expansion) are what the projection removes.  For ``x-`` the roles of
    the factors are mirrored on ``M1 (x) v'``::

        sum_{s=0}^{-r}     x-_{i,r+s} (x) k-_{i,-s}      r <= 0
        sum_{s=0}^{r-1}    x-_{i,r-s} (x) k+_{i,s}       r >  0
    """
    T = tensor(M1, M2, "circ")
    if sign > 0:
        hw = highest_weight_line(M1).vector
        (a,) = hw  # highest weight line of a simple module is a basis line
        n2 = M2.dim
        lhs = _block(T.act(XPlus(i, r)), n2, a, a)
        eig = lambda g: M1.act(g)[a, a]
        rhs = SparseMatrix(n2, n2)
        if r >= 0:
            rng = [(Gen(KP, i, s), XPlus(i, r - s)) for s in range(r + 1)]
        else:
            rng = [(Gen(KM, i, -s), XPlus(i, r + s)) for s in range(-r)]
        for kg, xg in rng:
            rhs = rhs + M2.act(xg).scale(eig(kg))
    else:
        hw = highest_weight_line(M2).vector
        (a,) = hw
        n1, n2 = M1.dim, M2.dim
        lhs = _block_second(T.act(XMinus(i, r)), n1, n2, a, a)
        eig = lambda g: M2.act(g)[a, a]
        rhs = SparseMatrix(n1, n1)
        if r <= 0:
            rng = [(XMinus(i, r + s), Gen(KM, i, -s)) for s in range(-r + 1)]
        else:
            rng = [(XMinus(i, r - s), Gen(KP, i, s)) for s in range(r)]
        for xg, kg in rng:
            rhs = rhs + M1.act(xg).scale(eig(kg))
    return TriangularResult(lhs == rhs, sign, r, len(rng))
