"""Finite-dimensional module realizations.

A :class:`ModuleRealization` carries the Chevalley (Kac-Moody) action of
``e_i, f_i, k_i^{+-1}`` for ``i`` in ``I + {0}`` as sparse matrices, plus a
source for the Drinfeld generators:

* evaluation modules of type A use closed formulas, valid for every mode;
* tensor products and duals *derive* the Drinfeld action from the
  Chevalley action (see :class:`DerivedDrinfeld`);
* user supplied realizations may give a finite table of modes.

Conventions.  The fundamental module ``V(omega_k)`` of ``A_n`` lives on
``k``-subsets ``S`` of ``{1..n+1}``.  For ``T`` containing ``j`` but not
``j+1`` and ``S = T - j + (j+1)``::

    x+_{j,r} v_S = mu^r v_T,     x-_{j,r} v_T = mu^r v_S,
    mu = mu_j(T) = root * q^(j - 2 #{t in T : t < j} + k - 2)

The eigenvalue of ``k+_j(z)`` on the highest weight vector of a module
with Drinfeld polynomial ``P_j`` is ``q^{-deg P_j} P_j(q^2 z) / P_j(z)``
expanded at ``z = oo``.  With ``root = zeta^{-1} alpha`` the module built
by :func:`evaluation_module` therefore has ``P_j = (z - zeta^{-1} alpha)``
at ``j = k`` and ``1`` elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import (
    E_,
    F_,
    HH,
    KC,
    KK,
    KM,
    KP,
    XM,
    XP,
    E,
    F,
    Gen,
    K,
    KKac,
    ModeUnavailable,
    XMinus,
    XPlus,
    verify_relations,
)
from .linalg import SparseMatrix, commutator, inverse, nullspace
from .root_data import (
    DynkinDiagram,
    Weight,
    descending_chain,
    diagram_from_json,
    highest_root,
    pairing,
    spanning_order,
)
from .scalar import (
    check_zeta,
    coerce,
    poly_in_z_to_str,
    qint,
    rational_from_str,
    rational_to_str,
)


class ConstructionError(RuntimeError):
    """A realization failed its relation check; ``report`` holds the details."""

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class HighestWeightError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralParam:
    node: int
    alpha: object
    shift: int = 0

    def to_json(self):
        a = self.alpha
        return {
            "node": self.node,
            "alpha": rational_to_str(a) if isinstance(a, (int, Fraction)) else repr(a),
            "tau": self.shift,
        }


class ModuleRealization:
    """Finite-dimensional graded module with sparse exact action matrices."""

    def __init__(
        self,
        diagram: DynkinDiagram,
        zeta,
        labels: Sequence[str],
        weights: Sequence[Weight],
        km: Dict[Gen, SparseMatrix],
        drinfeld: Optional[Callable[[Gen], SparseMatrix]] = None,
        spectral_params: Sequence[SpectralParam] = (),
        mode_bound: Optional[int] = None,
        name: str = "",
    ):
        self.diagram = diagram
        self.zeta = check_zeta(zeta)
        self.labels = list(labels)
        self.weights = list(weights)
        self.dim = len(self.labels)
        self._km = dict(km)
        self.spectral_params = tuple(spectral_params)
        self.mode_bound = mode_bound
        self.name = name
        self._cache: Dict[Gen, SparseMatrix] = {}
        for i in (0,) + diagram.vertices:
            if KKac(i, -1) not in self._km:
                self._km[KKac(i, -1)] = inverse(self._km[KKac(i)])
        self._drinfeld = drinfeld if drinfeld is not None else DerivedDrinfeld(self)

    @property
    def q(self):
        return self.zeta

    def one(self):
        return coerce(1, self.zeta)

    has_drinfeld = True

    def act(self, g: Gen) -> SparseMatrix:
        m = self._cache.get(g)
        if m is not None:
            return m
        m = self._compute(g)
        self._cache[g] = m
        return m

    def _compute(self, g: Gen) -> SparseMatrix:
        if g.kind in (E_, F_, KK):
            try:
                return self._km[g]
            except KeyError:
                raise ModeUnavailable(f"{g!r} not defined on this module") from None
        if g.kind == KC:
            return self.act(KKac(g.i, g.r))
        if g.kind == KP and g.r == 0:
            return self.act(KKac(g.i, 1))
        if g.kind == KM and g.r == 0:
            return self.act(KKac(g.i, -1))
        if g.kind == HH:
            return h_operators(self, g.i, abs(g.r), sign=1 if g.r > 0 else -1)[-1]
        if self.mode_bound is not None and g.kind in (XP, XM, KP, KM) and abs(g.r) > 2 * self.mode_bound:
            raise ModeUnavailable(f"{g!r} beyond stored mode data")
        return self._drinfeld(g)

    def weight_spaces(self) -> Dict[Tuple[int, ...], List[int]]:
        out: Dict[Tuple[int, ...], List[int]] = {}
        for b, w in enumerate(self.weights):
            out.setdefault(w.key(), []).append(b)
        return out

    def __repr__(self):
        return f"ModuleRealization({self.name or '?'}, dim={self.dim}, zeta={self.zeta})"

    def to_json(self):
        mats = {}
        for g in sorted(self._km):
            mats[repr(g)] = [[i, j, _scalar_str(v)] for i, j, v in self._km[g].entries()]
        return {
            "name": self.name,
            "diagram": self.diagram.to_json(),
            "zeta": _scalar_str(self.zeta),
            "dimension": self.dim,
            "basis": self.labels,
            "weights": [list(w.key()) for w in self.weights],
            "spectral_params": [p.to_json() for p in self.spectral_params],
            "action": mats,
        }


def _scalar_str(v):
    if isinstance(v, (int, Fraction)):
        return rational_to_str(v)
    return repr(v)


# ------------------------------------------------------------------ builders


def _k_theta(d: DynkinDiagram, kmat: Callable[[int, int], SparseMatrix], dim: int) -> SparseMatrix:
    theta = highest_root(d)
    out = SparseMatrix.identity(dim)
    for i in d.vertices:
        for _ in range(theta[i]):
            out = out @ kmat(i, 1)
    return out


def _qcomm(a: SparseMatrix, b: SparseMatrix, v) -> SparseMatrix:
    return a @ b - (b @ a).scale(v)


def affine_from_drinfeld(d: DynkinDiagram, zeta, op: Callable[[Gen], SparseMatrix], dim: int):
    """``e_0, f_0`` from Drinfeld generators.

    With the chain ``theta = alpha_s + alpha_{j_m} + ... + alpha_{j_1}``::

        X = x-_{s,1};  X <- [x-_{j,0}, X]_{q^-1}  (j = j_m .. j_1);  e_0 = X k_theta^{-1}
        Y = x+_{s,-1}; Y <- -q [x+_{j,0}, Y]_{q^-1};                  f_0 = k_theta Y
    """
    q = zeta
    s, chain = descending_chain(d)
    X = op(XMinus(s, 1))
    Y = op(XPlus(s, -1))
    for j in reversed(chain):
        X = _qcomm(op(XMinus(j, 0)), X, q ** -1)
        Y = _qcomm(op(XPlus(j, 0)), Y, q ** -1).scale(-q)
    kt = _k_theta(d, lambda i, sg: op(K(i, sg)), dim)
    return X @ inverse(kt), kt @ Y


class DerivedDrinfeld:
    """Drinfeld generators recovered from the Chevalley action.

    Peeling the chain off ``e_0 k_theta`` and ``k_theta^{-1} f_0`` gives
    ``x-_{s,1}`` and ``x+_{s,-1}``; then::

        h_{i,1} = k_i^{-1} [e_i, x-_{i,1}],   h_{i,-1} = k_i [x+_{i,-1}, f_i]
        [h_{i,+-1}, x-+_{j,r}] = -+[a_ij] ... (shift the mode by +-1)

    propagate along a spanning tree of the diagram and to every mode.
    ``k+-`` modes come from ``[x+_{i,m}, f_i] = (k+_{i,m} - k-_{i,m}) / (q - q^-1)``.
    """

    def __init__(self, module: ModuleRealization):
        self.M = module
        self.cache: Dict[Gen, SparseMatrix] = {}
        self._h: Dict[Tuple[int, int], SparseMatrix] = {}
        self._ready = False

    def _km(self, g):
        return self.M.act(g)

    def _bootstrap(self):
        M = self.M
        d = M.diagram
        q = M.zeta
        s, chain = descending_chain(d)
        kt = _k_theta(d, lambda i, sg: M.act(KKac(i, sg)), M.dim)
        X = M.act(E(0)) @ kt
        Y = inverse(kt) @ M.act(F(0))
        for j in chain:
            X = commutator(M.act(E(j)), X) @ M.act(KKac(j, -1))
            Y = (M.act(KKac(j)) @ commutator(M.act(F(j)), Y)).scale(-1)
        self.cache[XMinus(s, 1)] = X
        self.cache[XPlus(s, -1)] = Y
        self._set_h(s)
        for parent, child in spanning_order(d, s):
            a = coerce(qint(d.a(parent, child)), q)
            self.cache[XMinus(child, 1)] = commutator(self._h[parent, 1], M.act(F(child))).scale(-1 / a)
            self.cache[XPlus(child, -1)] = commutator(self._h[parent, -1], M.act(E(child))).scale(1 / a)
            self._set_h(child)
        self._ready = True

    def _set_h(self, i):
        M = self.M
        xm1 = self.cache[XMinus(i, 1)]
        xp1 = self.cache[XPlus(i, -1)]
        self._h[i, 1] = M.act(KKac(i, -1)) @ commutator(M.act(E(i)), xm1)
        self._h[i, -1] = M.act(KKac(i)) @ commutator(xp1, M.act(F(i)))

    def __call__(self, g: Gen) -> SparseMatrix:
        if not self._ready:
            self._bootstrap()
        m = self.cache.get(g)
        if m is not None:
            return m
        m = self._compute(g)
        self.cache[g] = m
        return m

    def _compute(self, g: Gen) -> SparseMatrix:
        M = self.M
        q = M.zeta
        i, r = g.i, g.r
        two = coerce(qint(2), q)
        if g.kind == XP:
            if r == 0:
                return M.act(E(i))
            if r > 0:
                return commutator(self._h[i, 1], self(XPlus(i, r - 1))).scale(1 / two)
            return commutator(self._h[i, -1], self(XPlus(i, r + 1))).scale(1 / two)
        if g.kind == XM:
            if r == 0:
                return M.act(F(i))
            if r > 0:
                return commutator(self._h[i, 1], self(XMinus(i, r - 1))).scale(-1 / two)
            return commutator(self._h[i, -1], self(XMinus(i, r + 1))).scale(-1 / two)
        qq = q - q ** -1
        if g.kind == KP:
            return commutator(self(XPlus(i, r)), M.act(F(i))).scale(qq)
        if g.kind == KM:
            return commutator(self(XPlus(i, r)), M.act(F(i))).scale(-qq)
        raise ModeUnavailable(repr(g))


class TableDrinfeld:
    """Finite table of Drinfeld modes supplied by the user."""

    def __init__(self, table: Dict[Gen, SparseMatrix]):
        self.table = dict(table)

    def __call__(self, g):
        try:
            return self.table[g]
        except KeyError:
            raise ModeUnavailable(f"{g!r} not supplied") from None


def _subset_label(S):
    return "v" + "".join(str(s) for s in S)


def evaluation_module(d, k: int, alpha, zeta=Fraction(2), check: bool = True, mode_bound: int = 3) -> ModuleRealization:
    """The fundamental module ``V_zeta(omega_k)_alpha`` of a type A diagram.

    ``alpha`` is the spectral parameter; the Drinfeld polynomial at node
    ``k`` is ``z - alpha/zeta``.  The realization is checked against every
    relation family with modes up to ``mode_bound`` and rejected on failure.
    """
    d = diagram_from_json(d)
    if not d.is_type_a():
        raise ValueError("evaluation modules are implemented for type A only")
    zeta = check_zeta(zeta)
    alpha = coerce(alpha if not isinstance(alpha, str) else rational_from_str(alpha), zeta)
    if not alpha:
        raise ValueError("spectral parameter must be nonzero")
    n = d.rank
    if k not in d.vertices:
        raise ValueError(f"node {k} not in diagram")
    q = zeta
    root = alpha / zeta
    subsets = list(itertools.combinations(range(1, n + 2), k))
    index = {S: b for b, S in enumerate(subsets)}
    dim = len(subsets)
    weights = [Weight(d, {j: (j in S) - (j + 1 in S) for j in d.vertices}) for S in subsets]

    def mu(j, T):
        c = sum(1 for t in T if t < j)
        return root * q ** (j - 2 * c + k - 2)

    # pairs[j] = list of (index of T, index of S, mu)
    pairs: Dict[int, List[Tuple[int, int, object]]] = {}
    for j in d.vertices:
        lst = []
        for T in subsets:
            if j in T and j + 1 not in T:
                S = tuple(sorted(set(T) - {j} | {j + 1}))
                lst.append((index[T], index[S], mu(j, T)))
        pairs[j] = lst
    qq = q - q ** -1

    def kdiag(j, sign):
        vals = []
        for b in range(dim):
            w = weights[b][j]
            vals.append(q ** (sign * w))
        return SparseMatrix.diagonal(vals)

    def op(g: Gen) -> SparseMatrix:
        j, r = g.i, g.r
        if g.kind == KC or (g.kind in (KP, KM) and r == 0):
            sign = g.r if g.kind == KC else (1 if g.kind == KP else -1)
            return kdiag(j, sign)
        if g.kind == XP:
            return SparseMatrix.from_entries(dim, dim, [(t, s, m ** r) for t, s, m in pairs[j]])
        if g.kind == XM:
            return SparseMatrix.from_entries(dim, dim, [(s, t, m ** r) for t, s, m in pairs[j]])
        if g.kind in (KP, KM):
            c = qq if g.kind == KP else -qq
            ents = []
            for t, s, m in pairs[j]:
                ents.append((t, t, c * m ** r))
                ents.append((s, s, -c * m ** r))
            return SparseMatrix.from_entries(dim, dim, ents)
        raise ModeUnavailable(repr(g))

    km: Dict[Gen, SparseMatrix] = {}
    for j in d.vertices:
        km[E(j)] = op(XPlus(j, 0))
        km[F(j)] = op(XMinus(j, 0))
        km[KKac(j)] = kdiag(j, 1)
        km[KKac(j, -1)] = kdiag(j, -1)
    e0, f0 = affine_from_drinfeld(d, zeta, op, dim)
    km[E(0)] = e0
    km[F(0)] = f0
    theta = highest_root(d)
    km[KKac(0)] = SparseMatrix.diagonal([q ** (-pairing(theta, w)) for w in weights])
    km[KKac(0, -1)] = SparseMatrix.diagonal([q ** pairing(theta, w) for w in weights])
    M = ModuleRealization(
        d,
        zeta,
        [_subset_label(S) for S in subsets],
        weights,
        km,
        drinfeld=op,
        spectral_params=[SpectralParam(k, alpha, 0)],
        name=f"V(w{k})_{_scalar_str(alpha)}",
    )
    if check:
        rep = verify_relations(M, mode_bound)
        if not rep.ok:
            raise ConstructionError(f"evaluation module {M.name} violates relations", rep)
    return M


def trivial_module(d, zeta=Fraction(2)) -> ModuleRealization:
    d = diagram_from_json(d)
    zeta = check_zeta(zeta)
    one = SparseMatrix.identity(1, coerce(1, zeta))
    zero = SparseMatrix(1, 1)
    km = {}
    for i in (0,) + d.vertices:
        km[E(i)] = zero
        km[F(i)] = zero
        km[KKac(i)] = one
        km[KKac(i, -1)] = one

    def op(g):
        if g.kind in (XP, XM):
            return zero
        if g.kind in (KP, KM):
            return one if g.r == 0 else zero
        if g.kind == KC:
            return one
        raise ModeUnavailable(repr(g))

    return ModuleRealization(d, zeta, ["1"], [Weight(d, {})], km, drinfeld=op, name="trivial")


def tensor(M1: ModuleRealization, M2: ModuleRealization, coproduct: str = "circ") -> ModuleRealization:
    """``M1 (x) M2`` with the Chevalley action given by the chosen coproduct.

    ``circ``: ``e -> e#1 + k#e``, ``f -> f#k^-1 + 1#f``, ``k -> k#k``;
    ``bullet`` is its flip.  Basis index of ``a (x) b`` is ``a*dim(M2) + b``.
    """
    if M1.diagram != M2.diagram:
        raise ValueError("tensor factors use different diagrams")
    if M1.zeta != M2.zeta:
        raise ValueError("tensor factors use different zeta")
    if coproduct not in ("circ", "bullet"):
        raise ValueError(f"unknown coproduct {coproduct!r}")
    d = M1.diagram
    I1 = SparseMatrix.identity(M1.dim)
    I2 = SparseMatrix.identity(M2.dim)
    km = {}
    for i in (0,) + d.vertices:
        e1, e2 = M1.act(E(i)), M2.act(E(i))
        f1, f2 = M1.act(F(i)), M2.act(F(i))
        k1, k2 = M1.act(KKac(i)), M2.act(KKac(i))
        ki1, ki2 = M1.act(KKac(i, -1)), M2.act(KKac(i, -1))
        if coproduct == "circ":
            km[E(i)] = e1.kron(I2) + k1.kron(e2)
            km[F(i)] = f1.kron(ki2) + I1.kron(f2)
        else:
            km[E(i)] = I1.kron(e2) + e1.kron(k2)
            km[F(i)] = ki1.kron(f2) + f1.kron(I2)
        km[KKac(i)] = k1.kron(k2)
        km[KKac(i, -1)] = ki1.kron(ki2)
    labels = [f"{a}*{b}" for a in M1.labels for b in M2.labels]
    weights = [w1 + w2 for w1 in M1.weights for w2 in M2.weights]
    sym = "o" if coproduct == "circ" else "*"
    return ModuleRealization(
        d,
        M1.zeta,
        labels,
        weights,
        km,
        spectral_params=M1.spectral_params + M2.spectral_params,
        name=f"({M1.name} {sym} {M2.name})",
    )


def with_overrides(M: ModuleRealization, overrides: Dict[Gen, SparseMatrix]) -> ModuleRealization:
    """Copy of ``M`` in which the listed generators act by the given matrices.

    Everything else is read from ``M`` unchanged, so a single corrupted
    matrix stays isolated; used to exercise the relation checker.
    """
    km = {g: overrides.get(g, m) for g, m in M._km.items()}

    def op(g):
        return overrides[g] if g in overrides else M.act(g)

    return ModuleRealization(
        M.diagram, M.zeta, M.labels, M.weights, km, drinfeld=op, spectral_params=M.spectral_params, name=f"{M.name}'"
    )


# ------------------------------------------------------------ highest weight


@dataclass
class HighestWeightVector:
    vector: Dict[int, object]
    weight: Weight
    drinfeld_highest: bool


def highest_weight_vectors(M: ModuleRealization, window: int = 2) -> List[HighestWeightVector]:
    """Basis of the joint kernel of ``e_i`` (``i`` in ``I``), weight by weight.

    Each vector is flagged if it is also killed by ``x+_{i,r}`` for
    ``|r| <= window``.
    """
    d = M.diagram
    out = []
    es = [M.act(E(i)) for i in d.vertices]
    for key, idxs in sorted(M.weight_spaces().items(), reverse=True):
        pos = {b: n for n, b in enumerate(idxs)}
        rows = []
        for e in es:
            # columns restricted to this weight space
            cols: Dict[int, Dict[int, object]] = {}
            for i, j, v in e.entries():
                if j in pos:
                    cols.setdefault(i, {})[pos[j]] = v
            rows.extend(cols.values())
        for sol in nullspace(rows, len(idxs)):
            vec = {idxs[n]: v for n, v in sol.items()}
            flag = True
            for i in d.vertices:
                for r in range(-window, window + 1):
                    try:
                        if M.act(XPlus(i, r)).apply(vec):
                            flag = False
                    except ModeUnavailable:
                        pass
            out.append(HighestWeightVector(vec, M.weights[idxs[0]], flag))
    return out


def highest_weight_line(M: ModuleRealization) -> HighestWeightVector:
    cands = [h for h in highest_weight_vectors(M) if h.drinfeld_highest]
    if len(cands) != 1:
        raise HighestWeightError(f"expected one highest-weight line, found {len(cands)}")
    return cands[0]


# ------------------------------------------------------------ Cartan series


def k_series(M: ModuleRealization, i: int, order: int):
    """Matrices of ``k+_{i,r}`` and ``k-_{i,-r}`` for ``0 <= r <= order``."""
    if M.mode_bound is not None and order > 2 * M.mode_bound:
        raise ModeUnavailable(f"series order {order} exceeds stored data")
    plus = [M.act(Gen(KP, i, r)) for r in range(order + 1)]
    minus = [M.act(Gen(KM, i, -r)) for r in range(order + 1)]
    return plus, minus


def h_operators(M: ModuleRealization, i: int, s_max: int, sign: int = 1) -> List[SparseMatrix]:
    """``h_{i,sign*s}`` for ``s = 1..s_max`` by an exact logarithm.

    ``k_i^{-+1} k+-_i(z) = exp(+-(q - q^-1) sum_s h_{i,+-s} z^{-+s})``.
    """
    if s_max <= 0:
        return []
    q = M.zeta
    plus, minus = k_series(M, i, s_max)
    series = plus if sign > 0 else minus
    k0inv = inverse(series[0])
    g = [k0inv @ c for c in series]
    ell = _series_log(g, M.dim)
    qq = q - q ** -1
    return [l.scale(sign / qq) for l in ell[1:]]


def _series_log(g: List[SparseMatrix], dim: int) -> List[SparseMatrix]:
    """Coefficients of ``log(g)`` for commuting coefficients with ``g_0 = 1``.

    From ``s g_s = sum_{j=1..s} j l_j g_{s-j}``.
    """
    ell = [SparseMatrix(dim, dim)]
    for s in range(1, len(g)):
        acc = g[s].scale(s)
        for j in range(1, s):
            acc = acc - (ell[j] @ g[s - j]).scale(j)
        ell.append(acc.scale(Fraction(1, s)))
    return ell


def series_exp(ell: List[SparseMatrix], dim: int) -> List[SparseMatrix]:
    """Inverse of :func:`_series_log`; ``ell[0]`` is ignored."""
    g = [SparseMatrix.identity(dim)]
    for s in range(1, len(ell)):
        acc = SparseMatrix(dim, dim)
        for j in range(1, s + 1):
            acc = acc + (ell[j] @ g[s - j]).scale(j)
        g.append(acc.scale(Fraction(1, s)))
    return g


# ------------------------------------------------------ Drinfeld polynomials


@dataclass
class DrinfeldPolynomialSet:
    """Monic polynomials in ``z``, ascending coefficient lists per node."""

    polys: Dict[int, List[object]]

    def __eq__(self, other):
        return isinstance(other, DrinfeldPolynomialSet) and self.polys == other.polys

    def degree(self, j):
        return len(self.polys[j]) - 1

    def __mul__(self, other: "DrinfeldPolynomialSet") -> "DrinfeldPolynomialSet":
        out = {}
        for j in self.polys:
            a, b = self.polys[j], other.polys[j]
            c = [0] * (len(a) + len(b) - 1)
            for x, u in enumerate(a):
                for y, v in enumerate(b):
                    c[x + y] = c[x + y] + u * v
            out[j] = c
        return DrinfeldPolynomialSet(out)

    def to_json(self):
        return {
            str(j): {"polynomial": poly_in_z_to_str(c), "coefficients": [_scalar_str(x) for x in c]}
            for j, c in sorted(self.polys.items())
        }

    @classmethod
    def from_roots(cls, d: DynkinDiagram, roots: Dict[int, Sequence]) -> "DrinfeldPolynomialSet":
        out = {}
        for j in d.vertices:
            c = [1]
            for a in roots.get(j, ()):
                # multiply by (z - a)
                c = [(-a * c[0])] + [c[t - 1] - a * c[t] for t in range(1, len(c))] + [c[-1]]
            out[j] = c
        return cls(out)


def drinfeld_polynomials(M: ModuleRealization, extra_order: int = 2) -> DrinfeldPolynomialSet:
    """Read ``P_j`` from the ``k+_j(z)`` eigenvalue on the highest weight line.

    Solves ``P(z) kappa(z) = q^{-d} P(q^2 z)`` for monic ``P`` of degree
    ``d = (alpha_j | lambda)`` using ``2d + 1 + extra_order`` coefficients
    of ``kappa`` and demands a unique solution.
    """
    q = M.zeta
    hw = highest_weight_line(M)
    v = hw.vector
    piv = min(v)
    out = {}
    for j in M.diagram.vertices:
        deg = hw.weight[j]
        if deg < 0:
            raise HighestWeightError("highest weight is not dominant")
        order = 2 * deg + 1 + extra_order
        kappa = []
        for m in range(order + 1):
            w = M.act(Gen(KP, j, m)).apply(v)
            c = w.get(piv, 0) / v[piv]
            if any(w.get(b, 0) != c * x for b, x in v.items()) or set(w) - set(v):
                raise HighestWeightError(f"highest weight vector is not a k+_{j},{m} eigenvector")
            kappa.append(c)
        out[j] = _solve_drinfeld(kappa, deg, q)
    return DrinfeldPolynomialSet(out)


def _solve_drinfeld(kappa, deg, q):
    # unknowns p_0..p_deg; equation for each power z^e, e = deg .. deg - len(kappa) + 1
    rows = []
    N = len(kappa)
    for e in range(deg, deg - N, -1):
        row = {}
        for t in range(deg + 1):
            idx = t - e
            if 0 <= idx < N:
                row[t] = row.get(t, 0) + kappa[idx]
        if 0 <= e <= deg:
            row[e] = row.get(e, 0) - q ** (-deg + 2 * e)
        row = {t: c for t, c in row.items() if c}
        rows.append(row)
    sols = nullspace(rows, deg + 1)
    sols = [s for s in sols if s.get(deg)]
    if len(sols) != 1 or len(nullspace(rows, deg + 1)) != 1:
        raise HighestWeightError("eigenvalue series does not match the Drinfeld polynomial ansatz")
    s = sols[0]
    lead = s[deg]
    return [s.get(t, 0) / lead for t in range(deg + 1)]


# ------------------------------------------------------------ JSON specs


def module_from_spec(spec: dict) -> ModuleRealization:
    """Build from ``{"diagram":..., "zeta":"2/1", "factors":[{"node":1,"alpha":"1/1","tau":2}], "coproduct":"circ"}``.

    A single evaluation module may be given with top-level ``node``/``alpha``.
    """
    d = diagram_from_json(spec["diagram"])
    zeta = rational_from_str(str(spec.get("zeta", "2/1")))
    check_zeta(zeta)
    factors = spec.get("factors")
    if factors is None:
        factors = [{"node": spec["node"], "alpha": spec.get("alpha", "1/1"), "tau": spec.get("tau", 0)}]
    coproduct = spec.get("coproduct", "circ")
    mods = []
    for f in factors:
        alpha = rational_from_str(str(f.get("alpha", "1/1")))
        tau = int(f.get("tau", 0))
        m = evaluation_module(d, int(f["node"]), alpha * zeta ** tau, zeta, check=False)
        m.spectral_params = (SpectralParam(int(f["node"]), alpha, tau),)
        mods.append(m)
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m, coproduct)
    return out
