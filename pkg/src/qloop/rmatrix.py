"""R-matrices: intertwiner solve, Yang-Baxter, braid symmetries, partial R_i.

The primary R-matrix is the unique (up to scale) solution of the linear
system ``R . Delta(g)|_{M1 (x) M2} = Delta(g)|_{M2 (x) M1} . R`` over the
Chevalley generators, normalized by ``R(v1 (x) v2) = v2 (x) v1`` on the top
vectors.  The rank-one series ``R_i = sum_l c_l T(f_i)^(l) (x) T(e_i)^(l)``
is an independent construction built from braid symmetries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import E, F, Gen, KKac, AlgebraElement, act_element, coproduct
from .linalg import SparseMatrix, inverse, is_invertible, nullspace
from .repmod import HighestWeightError, ModuleRealization, highest_weight_line, tensor
from .scalar import LaurentPoly, Q, RationalFunction, coerce, qfact, scalar_to_json


# ---------------------------------------------------------------- helpers


def flip_matrix(n1: int, n2: int, one=1) -> SparseMatrix:
    """``a (x) b -> b (x) a`` from ``M1 (x) M2`` to ``M2 (x) M1``."""
    return SparseMatrix(n1 * n2, n1 * n2, {b * n1 + a: {a * n2 + b: one} for a in range(n1) for b in range(n2)})


def _top_index(M: ModuleRealization) -> int:
    try:
        (a,) = highest_weight_line(M).vector
        return a
    except (HighestWeightError, ValueError):
        return 0


def _defect_json(diff: SparseMatrix):
    if diff.is_zero():
        return None
    # exact scalars have no ordering in the generic field; report the first entry
    i, j, v = next(diff.entries())
    return {"row": i, "col": j, "value": scalar_to_json(v)}


# ------------------------------------------------------------ intertwiner


@dataclass
class IntertwinerResult:
    matrix: Optional[SparseMatrix]
    solution_space_dim: int
    normalized: bool
    invertible: bool
    dims: Tuple[int, int] = (0, 0)
    basis: List[SparseMatrix] = field(default_factory=list, repr=False)

    def to_json(self):
        out = {
            "solution_space_dim": self.solution_space_dim,
            "normalized": self.normalized,
            "invertible": self.invertible,
            "dims": list(self.dims),
        }
        if self.matrix is not None:
            out["matrix"] = [[i, j, scalar_to_json(v)] for i, j, v in self.matrix.entries()]
        return out


def solve_intertwiner(M1: ModuleRealization, M2: ModuleRealization, coproduct_kind: str = "circ") -> IntertwinerResult:
    """All weight-preserving ``R : M1 (x) M2 -> M2 (x) M1`` commuting with the
    Chevalley generators, as one exact linear system."""
    if M1.diagram != M2.diagram or M1.zeta != M2.zeta:
        raise ValueError("intertwiner needs modules over the same diagram and zeta")
    A = tensor(M1, M2, coproduct_kind)
    B = tensor(M2, M1, coproduct_kind)
    n = A.dim
    # unknowns R[p, c] with equal weights
    by_weight: Dict[Tuple[int, ...], List[int]] = {}
    for p in range(n):
        by_weight.setdefault(B.weights[p].key(), []).append(p)
    var: Dict[Tuple[int, int], int] = {}
    for c in range(n):
        for p in by_weight.get(A.weights[c].key(), []):
            var[p, c] = len(var)
    rows = []
    for i in (0,) + A.diagram.vertices:
        for g in (E(i), F(i)):
            ga, gbT = A.act(g), B.act(g).T
            eqs: Dict[Tuple[int, int], Dict[int, object]] = {}
            for (p, m), x in var.items():
                # (R ga)[p, c] = sum_m R[p, m] ga[m, c]
                for c, v in ga.rows.get(m, {}).items():
                    eq = eqs.setdefault((p, c), {})
                    eq[x] = eq.get(x, 0) + v
                # (gb R)[p', c'] = sum_m gb[p', m] R[m, c'] with (m, c') = (p, m) here
                for p2, v in gbT.rows.get(p, {}).items():
                    eq = eqs.setdefault((p2, m), {})
                    eq[x] = eq.get(x, 0) - v
            rows.extend({k: v for k, v in eq.items() if v} for eq in eqs.values())
    sols = nullspace(rows, len(var))
    inv = {x: pc for pc, x in var.items()}
    mats = []
    for s in sols:
        ents: Dict[int, Dict[int, object]] = {}
        for x, v in s.items():
            p, c = inv[x]
            ents.setdefault(p, {})[c] = v
        mats.append(SparseMatrix(n, n, ents))
    dims = (M1.dim, M2.dim)
    if len(mats) != 1:
        return IntertwinerResult(None, len(mats), False, False, dims, mats)
    R = mats[0]
    a1, a2 = _top_index(M1), _top_index(M2)
    src, dst = a1 * M2.dim + a2, a2 * M1.dim + a1
    anchor = R[dst, src]
    normalized = bool(anchor)
    if normalized:
        R = R.scale(1 / anchor)
    return IntertwinerResult(R, 1, normalized, is_invertible(R), dims, mats)


@dataclass
class YBEResult:
    ok: Optional[bool]
    reason: str = ""
    witness: Optional[dict] = None

    def __bool__(self):
        return self.ok is True

    def to_json(self):
        out = {"ybe": self.ok, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _on_first(R: SparseMatrix, n3: int) -> SparseMatrix:
    return R.kron(SparseMatrix.identity(n3))


def _on_last(n1: int, R: SparseMatrix) -> SparseMatrix:
    return SparseMatrix.identity(n1).kron(R)


def yang_baxter_check(M1, M2, M3) -> YBEResult:
    """``R23 R13 R12 = R12 R13 R23`` as maps ``M1 M2 M3 -> M3 M2 M1``."""
    pairs = {}
    for a, b in ((M1, M2), (M1, M3), (M2, M3)):
        res = solve_intertwiner(a, b)
        if res.solution_space_dim != 1 or not res.normalized:
            return YBEResult(None, f"intertwiner {a.name} -> {b.name} not unique (dim {res.solution_space_dim})")
        pairs[a.name, b.name, id(a), id(b)] = res.matrix
    R12 = pairs[M1.name, M2.name, id(M1), id(M2)]
    R13 = pairs[M1.name, M3.name, id(M1), id(M3)]
    R23 = pairs[M2.name, M3.name, id(M2), id(M3)]
    n1, n2, n3 = M1.dim, M2.dim, M3.dim
    lhs = _on_first(R23, n1) @ _on_last(n2, R13) @ _on_first(R12, n3)
    rhs = _on_last(n3, R12) @ _on_first(R13, n2) @ _on_last(n1, R23)
    diff = lhs - rhs
    return YBEResult(diff.is_zero(), "", _defect_json(diff))


# -------------------------------------------------------- braid symmetries


def divided_power(m: SparseMatrix, n: int, zeta) -> SparseMatrix:
    return (m ** n).scale(1 / coerce(qfact(n), zeta))


def _dp_element(g: Gen, n: int) -> AlgebraElement:
    return AlgebraElement({(g,) * n: RationalFunction(1) / RationalFunction(qfact(n))})


BRAID_CONVENTIONS = (("''", 1), ("''", -1), ("'", 1), ("'", -1))


def braid_images(d, i: int, conv=("''", 1)) -> Dict[Gen, AlgebraElement]:
    """Images of the Chevalley generators under the braid automorphism.

    ``T''_{i,e}``: ``e_i -> -f_i k_i^{e}``, ``f_i -> -k_i^{-e} e_i``,
    ``e_j -> sum_{r+s=-a_ij} (-1)^r q^{-er} e_i^(s) e_j e_i^(r)``,
    ``f_j -> sum (-1)^r q^{er} f_i^(r) f_j f_i^(s)``.
    ``T'_{i,e}``: ``e_i -> -k_i^{e} f_i``, ``f_i -> -e_i k_i^{-e}``,
    ``e_j -> sum (-1)^r q^{er} e_i^(r) e_j e_i^(s)``,
    ``f_j -> sum (-1)^r q^{-er} f_i^(s) f_j f_i^(r)``.
    ``k_j -> k_j k_i^{-a_ij}`` in both.
    """
    kind, e = conv
    out: Dict[Gen, AlgebraElement] = {}
    qe = lambda n: RationalFunction(LaurentPoly.monomial(n))
    if kind == "''":
        out[E(i)] = AlgebraElement.word(F(i), KKac(i, e), c=-1)
        out[F(i)] = AlgebraElement.word(KKac(i, -e), E(i), c=-1)
    else:
        out[E(i)] = AlgebraElement.word(KKac(i, e), F(i), c=-1)
        out[F(i)] = AlgebraElement.word(E(i), KKac(i, -e), c=-1)
    for j in d.vertices:
        a = d.a(i, j)
        kw = [KKac(j)] + [KKac(i, -1 if a > 0 else 1)] * abs(a)
        out[KKac(j)] = AlgebraElement.word(*kw)
        out[KKac(j, -1)] = AlgebraElement.word(*[Gen(g.kind, g.i, -g.r) for g in kw])
        if j == i:
            continue
        m = -a
        ej, fj = AlgebraElement.gen(E(j)), AlgebraElement.gen(F(j))
        se, sf = AlgebraElement(), AlgebraElement()
        for r in range(m + 1):
            s = m - r
            sgn = (-1) ** r
            if kind == "''":
                se = se + _dp_element(E(i), s) * ej * _dp_element(E(i), r) * (qe(-e * r) * sgn)
                sf = sf + _dp_element(F(i), r) * fj * _dp_element(F(i), s) * (qe(e * r) * sgn)
            else:
                se = se + _dp_element(E(i), r) * ej * _dp_element(E(i), s) * (qe(e * r) * sgn)
                sf = sf + _dp_element(F(i), s) * fj * _dp_element(F(i), r) * (qe(-e * r) * sgn)
        out[E(j)] = se
        out[F(j)] = sf
    return out


def _braid_module_operator(M: ModuleRealization, i: int, conv) -> SparseMatrix:
    """Divided-power triple products on each weight space.

    ``T''_{i,e} v = sum_{-a+b-c=n} (-1)^b q^{e(b-ac)} e^(a) f^(b) e^(c) v``,
    ``T'_{i,e} v  = sum_{a-b+c=n}  (-1)^b q^{e(b-ac)} f^(a) e^(b) f^(c) v``,
    ``n = <alpha_i^vee, wt v>``.
    """
    kind, e = conv
    q = M.zeta
    ei, fi = M.act(E(i)), M.act(F(i))
    x, y = (ei, fi) if kind == "''" else (fi, ei)
    # e_i is nilpotent; its nilpotency index bounds every divided power used
    bound = 0
    p = SparseMatrix.identity(M.dim)
    while not p.is_zero():
        p = p @ ei
        bound += 1
    dx = [divided_power(x, k, q) for k in range(bound + 1)]
    dy = [divided_power(y, k, q) for k in range(bound + 1)]
    rows: Dict[int, Dict[int, object]] = {}
    for col in range(M.dim):
        n = M.weights[col][i]
        v = {col: 1}
        acc: Dict[int, object] = {}
        for a in range(bound + 1):
            for c in range(bound + 1):
                b = n + a + c if kind == "''" else a + c - n
                if b < 0 or b > bound:
                    continue
                coef = (-1) ** b * q ** (e * (b - a * c))
                w = dx[a].apply(dy[b].apply(dx[c].apply(v)))
                for k, val in w.items():
                    acc[k] = acc.get(k, 0) + coef * val
        for k, val in acc.items():
            if val:
                rows.setdefault(k, {})[col] = val
    return SparseMatrix(M.dim, M.dim, rows)


class BraidError(RuntimeError):
    pass


@dataclass
class BraidOperator:
    i: int
    convention: Tuple[str, int]
    matrix: SparseMatrix
    inverse: SparseMatrix
    images: Dict[Gen, AlgebraElement]

    def image_action(self, M: ModuleRealization, g: Gen) -> SparseMatrix:
        return act_element(M, self.images[g])


def braid_T_si(M: ModuleRealization, i: int, conv=None) -> BraidOperator:
    """Braid symmetry ``T_{s_i}`` on ``M`` with conjugation self-check.

    The convention defaults to :data:`DEFAULT_BRAID`; the constructor
    verifies ``T act(g) T^{-1} = act(T(g))`` for every Chevalley generator
    of the finite part and raises :class:`BraidError` otherwise.
    """
    conv = conv or DEFAULT_BRAID
    if i not in M.diagram.vertices:
        raise ValueError(f"node {i} is not a finite node")
    T = _braid_module_operator(M, i, conv)
    try:
        Ti = inverse(T)
    except ZeroDivisionError:
        raise BraidError(f"braid operator for node {i} is singular; the action is not integrable") from None
    images = braid_images(M.diagram, i, conv)
    for g, img in images.items():
        if T @ M.act(g) @ Ti != act_element(M, img):
            raise BraidError(f"braid convention {conv} fails conjugation on {g!r}")
    return BraidOperator(i, conv, T, Ti, images)


DEFAULT_BRAID = ("''", 1)


# -------------------------------------------------------- partial R-matrix


def c_coeff(l: int) -> RationalFunction:
    """``c_l = (-1)^l q^{-l(l-1)/2} (q - q^{-1})^l [l]!``."""
    qq = Q - 1 / Q
    return RationalFunction((-1) ** l) * Q ** (-l * (l - 1) // 2) * qq ** l * RationalFunction(qfact(l))


def cbar_coeff(l: int) -> RationalFunction:
    """``cbar_l = q^{l(l-1)/2} (q - q^{-1})^l [l]!``."""
    qq = Q - 1 / Q
    return Q ** (l * (l - 1) // 2) * qq ** l * RationalFunction(qfact(l))


def _partial_series(M1, M2, i, coeff, conv=None) -> SparseMatrix:
    q = M1.zeta
    A = braid_T_si(M1, i, conv).image_action(M1, F(i))
    B = braid_T_si(M2, i, conv).image_action(M2, E(i))
    out = SparseMatrix.identity(M1.dim * M2.dim)
    l = 1
    while True:
        Al = divided_power(A, l, q)
        Bl = divided_power(B, l, q)
        if Al.is_zero() or Bl.is_zero():
            return out
        out = out + Al.kron(Bl).scale(coerce(coeff(l), q))
        l += 1


def partial_R_i(M1, M2, i: int, conv=None) -> SparseMatrix:
    """``sum_l c_l T(f_i)^(l) (x) T(e_i)^(l)`` on ``M1 (x) M2`` (finite sum)."""
    return _partial_series(M1, M2, i, c_coeff, conv)


def partial_R_i_inverse(M1, M2, i: int, conv=None) -> SparseMatrix:
    return _partial_series(M1, M2, i, cbar_coeff, conv)


def partial_R_terms(M1, M2, i: int, conv=None) -> int:
    """Largest ``l`` whose term in the partial R series is nonzero."""
    A = braid_T_si(M1, i, conv).image_action(M1, F(i))
    B = braid_T_si(M2, i, conv).image_action(M2, E(i))
    l = 1
    while not (A ** l).is_zero() and not (B ** l).is_zero():
        l += 1
    return l - 1


def twisted_coproduct_check(M1, M2, i: int, conv=None) -> bool:
    """``R_i Delta(T(y)) R_i^{-1} = T^[2] Delta(y) T^[2]^{-1}`` for every
    Chevalley generator ``y`` of the finite part."""
    T1, T2 = braid_T_si(M1, i, conv), braid_T_si(M2, i, conv)
    T = T1.matrix.kron(T2.matrix)
    Tinv = T1.inverse.kron(T2.inverse)
    R = partial_R_i(M1, M2, i, conv)
    Rinv = partial_R_i_inverse(M1, M2, i, conv)
    Mt = tensor(M1, M2, "circ")
    for y, img in T1.images.items():
        lhs = R @ _act_coproduct(M1, M2, img) @ Rinv
        rhs = T @ Mt.act(y) @ Tinv
        if lhs != rhs:
            return False
    return True


def _act_coproduct(M1, M2, a: AlgebraElement) -> SparseMatrix:
    from .algebra import act_tensor

    return act_tensor(M1, M2, coproduct(a, "circ"))


def partial_R_word(M1, M2, word: Sequence[int], conv=None) -> SparseMatrix:
    """``R_w`` for ``w = s_{i_1} ... s_{i_r}`` by the product law
    ``R_w = T^[2]_{i_1..i_{r-1}}(R_{i_r}) ... T^[2]_{i_1}(R_{i_2}) R_{i_1}``."""
    n = M1.dim * M2.dim
    out = SparseMatrix.identity(n)
    conj = SparseMatrix.identity(n)
    conj_inv = SparseMatrix.identity(n)
    for i in word:
        Ri = partial_R_i(M1, M2, i, conv)
        out = conj @ Ri @ conj_inv @ out
        T1, T2 = braid_T_si(M1, i, conv), braid_T_si(M2, i, conv)
        conj = conj @ T1.matrix.kron(T2.matrix)
        conj_inv = T1.inverse.kron(T2.inverse) @ conj_inv
    return out


# -------------------------------------------------------------- unipotence


@dataclass
class UnipotenceResult:
    ok: bool
    weight_preserving: bool
    strictly_lowering: bool
    nilpotent: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.ok

    def to_json(self):
        out = {
            "unipotent": self.ok,
            "weight_preserving": self.weight_preserving,
            "strictly_lowering": self.strictly_lowering,
            "nilpotent": self.nilpotent,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _height(M: ModuleRealization, b: int) -> Tuple[int, ...]:
    return M.weights[b].key()


def unipotence_check(M1, M2, R: IntertwinerResult) -> UnipotenceResult:
    """``Rhat = flip o R`` on ``M1 (x) M2``: weight preserving and ``Rhat - 1``
    strictly lowering the first-factor weight."""
    if R.matrix is None or not R.invertible:
        raise ValueError("unipotence needs an invertible intertwiner")
    n1, n2 = M1.dim, M2.dim
    Rhat = flip_matrix(n2, n1) @ R.matrix
    N = Rhat - SparseMatrix.identity(n1 * n2)
    total = [M1.weights[a] + M2.weights[b] for a in range(n1) for b in range(n2)]
    d = M1.diagram
    wp = all(total[i] == total[j] for i, j, _ in Rhat.entries())
    witness = None
    lowering = True
    for i, j, v in N.entries():
        diff = M1.weights[j // n2] - M1.weights[i // n2]
        # diff is a weight; lowering means it is a nonzero sum of positive roots
        if not _is_positive_root_combination(d, diff):
            lowering = False
            witness = {"row": i, "col": j, "value": scalar_to_json(v)}
            break
    P = SparseMatrix.identity(n1 * n2)
    for _ in range(n1 * n2 + 1):
        P = P @ N
    nilp = P.is_zero()
    return UnipotenceResult(wp and lowering and nilp, wp, lowering, nilp, witness)


def _is_positive_root_combination(d, w) -> bool:
    """``w`` (omega basis) is a nonzero element of the positive root cone."""
    from fractions import Fraction

    from .root_data import cartan_matrix

    # solve C^T x = w for root coordinates x
    C = cartan_matrix(d)
    n = d.rank
    a = [[Fraction(C[j][i]) for j in range(n)] + [Fraction(w[d.vertices[i]])] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    x = [a[r][n] / a[r][r] for r in range(n)]
    return all(v >= 0 for v in x) and any(v > 0 for v in x)
