"""Kashiwara operators and crystal graph generation.

Every vector ``v`` of weight beta decomposes uniquely as
``v = sum_k f_i^(k) v_k`` with ``v_k`` killed by the raising operator
(e_i on V(lambda), e'_i on U^-).  Then ``e~_i v = sum f_i^(k-1) v_k`` and
``f~_i v = sum f_i^(k+1) v_k``.  With a fixed kernel basis per weight the
decomposition is a square matrix, so both operators become matrices.

The crystal lattice L is the A_0-span (A_0 = rational functions regular at
q = 0) of all f~-words applied to the seed.  It is generated weight by
weight; nodes of the crystal are the nonzero classes mod qL.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .crystal import AbstractCrystal
from .graded import TruncationEscape, WordRep, add_beta, height
from .linalg import QQq
from .scalars import ONE, ZERO


class LatticeViolation(ArithmeticError):
    """An expansion coefficient over the lattice basis has a pole at q = 0."""


class KashiwaraOps:
    """String decompositions and Kashiwara operator matrices for one model."""

    def __init__(self, rep: WordRep):
        self.rep = rep
        self._kernels: dict = {}
        self._decomp: dict = {}
        self._ops: dict = {}

    def kernel(self, i: int, beta) -> list:
        """Fixed basis (list of coordinate vectors) of ker(raise_i) on the beta space."""
        key = (i, beta)
        if key not in self._kernels:
            rep = self.rep
            d = rep.dim(beta)
            below = add_beta(beta, i, -1)
            if d == 0:
                basis = []
            elif min(below) < 0 or rep.dim(below) == 0:
                basis = linalg.identity(d, QQq)
            else:
                basis = linalg.nullspace(rep.raise_(i, beta), d, QQq)
            self._kernels[key] = basis
        return self._kernels[key]

    def decomposition(self, i: int, beta):
        """``(M, M^-1, blocks)`` where the columns of M are f_i^(k) applied to the
        kernel basis at beta - k alpha_i, grouped in ``blocks = [(k, start, size)]``."""
        beta = tuple(beta)
        key = (i, beta)
        if key in self._decomp:
            return self._decomp[key]
        rep = self.rep
        d = rep.dim(beta)
        cols, blocks = [], []
        k = 0
        while beta[i] - k >= 0:
            src = add_beta(beta, i, -k)
            kern = self.kernel(i, src)
            if kern:
                fk = rep.lower_power(i, src, k) if k else None
                images = [linalg.matvec(fk, v, QQq) if k else list(v) for v in kern]
                # f_i^(k) is injective on the kernel within the string, zero past its end
                live = [any(v) for v in images]
                if all(live):
                    blocks.append((k, len(cols), len(kern)))
                    cols.extend(images)
                elif any(live):
                    raise ArithmeticError(f"f_{i + 1}^({k}) neither injective nor zero on ker at {src}")
            k += 1
        if len(cols) != d:
            raise ArithmeticError(f"string decomposition at {beta} for i={i + 1} has {len(cols)} terms, expected {d}")
        M = linalg.columns_to_matrix(cols, d, QQq)
        try:
            Minv = linalg.inverse(M, QQq) if d else []
        except ZeroDivisionError:
            raise ArithmeticError(f"string decomposition at {beta} for i={i + 1} is not unique") from None
        self._decomp[key] = (M, Minv, blocks)
        return self._decomp[key]

    def string_decompose(self, i: int, beta, v) -> list:
        """``[(k, v_k)]`` with v_k in coordinates of weight beta - k alpha_i; zero terms dropped."""
        beta = tuple(beta)
        if not any(v):
            return []
        _, Minv, blocks = self.decomposition(i, beta)
        c = linalg.matvec(Minv, v, QQq)
        out = []
        for k, start, size in blocks:
            part = c[start : start + size]
            if any(part):
                kern = self.kernel(i, add_beta(beta, i, -k))
                vk = [ZERO] * len(kern[0])
                for a, w in zip(part, kern):
                    if a:
                        vk = [x + a * y for x, y in zip(vk, w)]
                out.append((k, vk))
        return out

    def operator(self, i: int, beta, direction: str) -> list:
        """Matrix of f~_i (``"lower"``) or e~_i (``"raise"``) on the beta space."""
        beta = tuple(beta)
        key = (i, beta, direction)
        if key in self._ops:
            return self._ops[key]
        rep = self.rep
        d = rep.dim(beta)
        if direction == "lower":
            if height(beta) >= rep.depth:
                raise TruncationEscape(f"f~_{i + 1} from {beta} leaves depth {rep.depth}")
            target, step = add_beta(beta, i), 1
        elif direction == "raise":
            target, step = add_beta(beta, i, -1), -1
        else:
            raise ValueError(direction)
        dt = rep.dim(target) if min(target) >= 0 else 0
        if d == 0 or dt == 0:
            mat = linalg.zeros(dt, d, QQq)
        else:
            _, Minv, blocks = self.decomposition(i, beta)
            Mt, _, tblocks = self.decomposition(i, target)
            tstart = {k: (s, n) for k, s, n in tblocks}
            # S sends block k of beta to block k + step of target
            S = linalg.zeros(dt, d, QQq)
            for k, start, size in blocks:
                if k + step not in tstart:
                    continue
                s, n = tstart[k + step]
                if n != size:
                    raise ArithmeticError("kernel blocks do not line up")
                for r in range(size):
                    S[s + r][start + r] = ONE
            mat = linalg.matmul(linalg.matmul(Mt, S, QQq), Minv, QQq)
        self._ops[key] = mat
        return mat

    def f_tilde(self, i: int, beta, v) -> list:
        return linalg.matvec(self.operator(i, beta, "lower"), v, QQq)

    def e_tilde(self, i: int, beta, v) -> list:
        return linalg.matvec(self.operator(i, beta, "raise"), v, QQq)


def string_decompose(rep: WordRep, i: int, beta, v) -> list:
    return KashiwaraOps(rep).string_decompose(i, beta, v)


def kashiwara(rep: WordRep, i: int, beta, v, direction: str) -> list:
    """Apply e~_i (direction ``"raise"``) or f~_i (``"lower"``) to ``v`` in V_beta."""
    ops = KashiwaraOps(rep)
    return ops.e_tilde(i, beta, v) if direction == "raise" else ops.f_tilde(i, beta, v)


# ----------------------------------------------------------------------------


def lattice_basis(vectors: list) -> list:
    """A_0-basis of the A_0-module spanned by ``vectors`` (vectors over Q(q)).

    Elimination over the valuation ring: the pivot is an entry of least
    q-adic valuation, so every multiplier used is regular at q = 0.
    """
    gens = [list(v) for v in vectors if any(v)]
    basis = []
    used_rows: set = set()
    while gens:
        best = None
        for g, vec in enumerate(gens):
            for r, x in enumerate(vec):
                if r in used_rows or not x:
                    continue
                key = (x.valuation(), g, r)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, g, r = best
        piv = gens.pop(g)
        p = piv[r]
        rest = []
        for vec in gens:
            x = vec[r]
            if x:
                m = x / p
                vec = [a - m * b for a, b in zip(vec, piv)]
            if any(vec):
                rest.append(vec)
        gens = rest
        used_rows.add(r)
        basis.append(piv)
    return basis


def residue(coeffs) -> tuple:
    """Coordinatewise value at q = 0; LatticeViolation on a pole."""
    out = []
    for c in coeffs:
        if not c.is_regular_at_zero():
            raise LatticeViolation(f"coefficient {c} has a pole at q=0")
        out.append(c.eval_at_zero())
    return tuple(out)


@dataclass
class LatticeState:
    """Per weight: node representatives forming an A_0-basis of L_beta."""

    rep: WordRep
    ops: KashiwaraOps
    nodes_at: dict = field(default_factory=dict)  # beta -> [node ids]
    reps: dict = field(default_factory=dict)  # beta -> list of vectors (columns)
    inv: dict = field(default_factory=dict)  # beta -> inverse of the rep matrix
    node_beta: dict = field(default_factory=dict)
    node_vec: dict = field(default_factory=dict)

    def expand(self, beta, v) -> list:
        """Coordinates of v over the node representatives at beta."""
        return linalg.matvec(self.inv[tuple(beta)], v, QQq)

    def residue_of(self, beta, v) -> tuple:
        return residue(self.expand(beta, v))

    def node_of(self, beta, v):
        """Node congruent to v mod qL, None for v in qL; ValueError otherwise."""
        res = self.residue_of(beta, v)
        nz = [k for k, x in enumerate(res) if x]
        if not nz:
            return None
        if len(nz) == 1 and res[nz[0]] == 1:
            return self.nodes_at[tuple(beta)][nz[0]]
        raise ValueError(f"vector is not congruent to a crystal node mod qL (residue {res})")

    def in_lattice(self, beta, v) -> bool:
        return all(c.is_regular_at_zero() for c in self.expand(beta, v))


def generate_crystal(rep: WordRep):
    """Crystal graph B(lambda) (module model) or B(infinity) (half algebra model).

    Returns ``(crystal, lattice)``.  Nodes are numbered in creation order:
    by height, then weight, then first discovery.
    """
    datum = rep.datum
    n = datum.n
    ops = KashiwaraOps(rep)
    st = LatticeState(rep, ops)
    zero = rep.zero_beta()
    nodes, wt = [], {}
    f_edges = {i: {} for i in range(n)}
    e_edges = {i: {} for i in range(n)}

    def add_node(beta, vec):
        b = len(nodes)
        nodes.append(b)
        wt[b] = rep.weight_of(beta)
        st.node_beta[b] = beta
        st.node_vec[b] = vec
        st.nodes_at.setdefault(beta, []).append(b)
        return b

    add_node(zero, rep.top_vector())
    st.reps[zero] = [rep.top_vector()]
    st.inv[zero] = [[ONE]]

    for beta in rep.betas():
        if beta == zero:
            continue
        d = rep.dim(beta)
        gens = []
        for i in range(n):
            src = add_beta(beta, i, -1)
            if min(src) < 0 or src not in st.nodes_at:
                continue
            for b in st.nodes_at[src]:
                gens.append((i, b, ops.f_tilde(i, src, st.node_vec[b])))
        basis = lattice_basis([g for _, _, g in gens])
        if len(basis) != d:
            raise LatticeViolation(f"f~-words span rank {len(basis)} at {beta}, expected {d}")
        binv = linalg.inverse(linalg.columns_to_matrix(basis, d, QQq), QQq)
        found: dict = {}
        order = []
        targets = []
        for i, b, g in gens:
            res = residue(linalg.matvec(binv, g, QQq))
            if any(res):
                if res not in found:
                    found[res] = g
                    order.append(res)
            targets.append(res)
        if len(order) != d or linalg.rank([list(r) for r in order], linalg.QQ) != d:
            raise LatticeViolation(f"residues at {beta} do not form a basis of L/qL ({len(order)} classes, dim {d})")
        ids = {res: add_node(beta, found[res]) for res in order}
        st.reps[beta] = [found[res] for res in order]
        st.inv[beta] = linalg.inverse(linalg.columns_to_matrix(st.reps[beta], d, QQq), QQq)
        for (i, b, _), res in zip(gens, targets):
            if any(res):
                t = ids[res]
                f_edges[i][b] = t
                e_edges[i][t] = b

    # e~ computed independently must agree with the inverse of the f~ edges
    for b in nodes:
        beta = st.node_beta[b]
        for i in range(n):
            up = add_beta(beta, i, -1)
            if min(up) < 0 or up not in st.nodes_at:
                continue
            v = ops.e_tilde(i, beta, st.node_vec[b])
            if not st.in_lattice(up, v):
                raise LatticeViolation(f"e~_{i + 1} of node {b} leaves the lattice")
            try:
                t = st.node_of(up, v)
            except ValueError as exc:
                raise LatticeViolation(str(exc)) from None
            if t != e_edges[i].get(b):
                raise LatticeViolation(f"e~_{i + 1} of node {b} disagrees with the f~ edges")

    open_f = set()
    for b in nodes:
        if rep.is_frontier(st.node_beta[b]):
            open_f.update((i, b) for i in range(n))

    eps = {}
    for b in nodes:
        row = []
        for i in range(n):
            if datum.is_real(i):
                k, c = 0, b
                while c in e_edges[i]:
                    c = e_edges[i][c]
                    k += 1
                row.append(k)
            else:
                row.append(0)
        eps[b] = tuple(row)
    C = AbstractCrystal(datum, nodes, wt, eps, None, f_edges, e_edges, open_f)
    for b in nodes:
        C.labels[b] = st.node_beta[b]
    return C, st


def crystal_of_module(datum, lam, depth: int):
    from .module import HWModule

    return generate_crystal(HWModule(datum, lam, depth))


def crystal_of_halfalgebra(datum, depth: int):
    from .halfalg import HalfAlgebra

    return generate_crystal(HalfAlgebra(datum, depth))
