"""Graded duals, perfect bases, and their correspondence with dual perfect bases.

On V^vee = sum_mu Hom(V_mu, k) the raising maps are the transposes of the
f_i: with V^vee_mu labelled by mu, ``e_i : V^vee_(mu - alpha_i) -> V^vee_mu``
has matrix F^T where F is the matrix of ``f_i : V_mu -> V_(mu - alpha_i)``.
A basis of V^vee is perfect when e_i(b) is, modulo ker e_i^(delta_i(b) - 1),
a nonzero multiple of a single basis element E_i(b), injectively;
``delta_i(v) = max{n : e_i^n v != 0}``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .dualperfect import BasisData, PreDualPerfectSpace, Refutation, make_basis, verify_dual_perfect
from .linalg import Echelon


class DualSpace:
    """Graded space with raising maps ``e[(i, mu)] : V_mu -> V_(mu + alpha_i)``."""

    def __init__(self, datum, weights, dims, e, field):
        self.datum = datum
        self.field = field
        self.weights = [tuple(w) for w in weights]
        self.dims = {tuple(w): int(d) for w, d in dims.items()}
        self.e = {(i, tuple(mu)): m for (i, mu), m in e.items()}
        self._kernels: dict = {}

    def dim(self, mu) -> int:
        return self.dims.get(tuple(mu), 0)

    def target(self, i, mu) -> tuple:
        return self.datum.shift(mu, i, 1)

    def e_matrix(self, i, mu) -> list:
        m = self.e.get((i, tuple(mu)))
        if m is None:
            return linalg.zeros(self.dim(self.target(i, mu)), self.dim(mu), self.field)
        return m

    def apply_e(self, i, mu, v) -> list:
        return linalg.matvec(self.e_matrix(i, mu), v, self.field)

    def delta(self, i, mu, v) -> int:
        """max{n : e_i^n v != 0} for v != 0."""
        if not any(v):
            raise ValueError("delta of the zero vector")
        n = 0
        while True:
            t = self.target(i, mu)
            if not self.dim(t):
                return n
            v = self.apply_e(i, mu, v)
            if not any(v):
                return n
            mu = t
            n += 1

    def power(self, i, mu, n) -> list:
        """Matrix of e_i^n out of mu (empty rows when the target vanishes)."""
        d = self.dim(mu)
        M = linalg.identity(d, self.field)
        cur = tuple(mu)
        for _ in range(n):
            t = self.target(i, cur)
            if not self.dim(t):
                return []
            M = linalg.matmul(self.e_matrix(i, cur), M, self.field)
            cur = t
        return M

    def kernel(self, i, mu, n) -> Echelon:
        """Echelon form of ker e_i^n in V_mu."""
        key = (i, tuple(mu), n)
        if key not in self._kernels:
            d = self.dim(mu)
            e = Echelon(d, self.field)
            if n > 0:
                M = self.power(i, mu, n)
                for v in linalg.nullspace(M, d, self.field) if M else linalg.identity(d, self.field):
                    e.add(v)
            self._kernels[key] = e
        return self._kernels[key]

    def image(self, i, mu) -> Echelon:
        """e_i V intersected with V_mu."""
        src = self.datum.shift(mu, i, -1)
        e = Echelon(self.dim(mu), self.field)
        if self.dim(src):
            for c in linalg.transpose(self.e_matrix(i, src), self.dim(src)):
                e.add(c)
        return e


def transpose_space(V: PreDualPerfectSpace) -> DualSpace:
    e = {}
    for (i, mu), m in V.f.items():
        src = V.target(i, mu)
        e[(i, src)] = linalg.transpose(m, V.dim(src))
    return DualSpace(V.datum, V.weights, V.dims, e, V.field)


def transpose_back(D: DualSpace, frontier=()) -> PreDualPerfectSpace:
    f = {}
    for (i, mu), m in D.e.items():
        tgt = D.target(i, mu)
        f[(i, tgt)] = linalg.transpose(m, D.dim(mu))
    return PreDualPerfectSpace(D.datum, D.weights, D.dims, f, D.field, frontier)


def pairing_report(V: PreDualPerfectSpace, D: DualSpace) -> dict:
    """<f_i u, v> = <u, e_i v> on unit vectors, for every i and weight."""
    fails = []
    for (i, mu), F in V.f.items():
        nu = V.target(i, mu)
        E = D.e_matrix(i, nu)
        for a in range(V.dim(mu)):
            for c in range(V.dim(nu)):
                if F[c][a] != E[a][c]:
                    fails.append({"i": i + 1, "mu": list(mu)})
    return {"ok": not fails, "failures": fails[:20]}


def dual_basis(B: BasisData) -> dict:
    """mu -> matrix whose columns are the dual basis vectors (same order as B)."""
    fld = B.space.field
    out = {}
    for mu, P in B.matrices.items():
        d = len(P)
        out[mu] = linalg.transpose(linalg.inverse(P, fld), d) if d else []
    return out


@dataclass
class PerfectCertificate:
    space: DualSpace
    basis: BasisData
    delta: dict
    Emap: dict  # i -> {b: b' or None}
    coeff: dict

    def Fmap(self, i) -> dict:
        return {t: s for s, t in self.Emap[i].items() if t is not None}


@dataclass
class PerfectResult:
    ok: bool
    certificate: PerfectCertificate | None = None
    refutation: Refutation | None = None

    def to_json(self) -> dict:
        if self.ok:
            c = self.certificate
            n = c.space.datum.n
            return {
                "ok": True,
                "elements": [
                    {
                        "b": b,
                        "delta": [c.delta[(i, b)] for i in range(n)],
                        "E": [c.Emap[i].get(b) for i in range(n)],
                    }
                    for b in range(len(c.basis))
                ],
            }
        return {"ok": False, "refutation": self.refutation.to_json()}


def _basis_on(D: DualSpace, matrices) -> BasisData:
    # reuse the graded-basis validation; only dims/weights/field are consulted
    shell = PreDualPerfectSpace(D.datum, D.weights, D.dims, {}, D.field)
    B = make_basis(shell, matrices)
    return B


def kernel_quotient_failures(D: DualSpace, B: BasisData, delta: dict, i: int) -> list:
    out = []
    for mu in D.weights:
        d = D.dim(mu)
        if not d:
            continue
        levels = {delta[(i, b)] for b in B.at[mu]}
        for n in range(max(levels) + 2):
            sel = [B.vec[b] for b in B.at[mu] if delta[(i, b)] == n]
            low, high = D.kernel(i, mu, n), D.kernel(i, mu, n + 1)
            e = Echelon(d, D.field)
            for r in low.rows:
                e.add(r)
            ok = all(e.add(v) for v in sel) and len(sel) == len(high) - len(low)
            ok = ok and all(high.contains(v) for v in sel)
            if not ok:
                out.append({"mu": list(mu), "n": n, "selected": len(sel), "quotient_dim": len(high) - len(low)})
    return out


def verify_perfect(D: DualSpace, matrices=None) -> PerfectResult:
    B = matrices if isinstance(matrices, BasisData) else _basis_on(D, matrices)
    fld = D.field
    n_idx = D.datum.n
    delta = {(i, b): D.delta(i, B.wt[b], B.vec[b]) for i in range(n_idx) for b in range(len(B))}
    Emap = {i: {} for i in range(n_idx)}
    coeff = {}
    for i in range(n_idx):
        bad = kernel_quotient_failures(D, B, delta, i)
        if bad:
            mu = tuple(bad[0]["mu"])
            b = next((x for x in B.at[mu] if delta[(i, x)] == bad[0]["n"]), B.at[mu][0])
            return PerfectResult(False, refutation=Refutation(i, b, "level residues are not a basis of the kernel quotient", bad[0]))
        for b in range(len(B)):
            n = delta[(i, b)]
            if n == 0:
                Emap[i][b] = None
                continue
            mu = B.wt[b]
            nu = D.target(i, mu)
            w = D.apply_e(i, mu, B.vec[b])
            cands = [x for x in B.at[nu] if delta[(i, x)] == n - 1]
            base = D.kernel(i, nu, n - 1).rows
            cols = [B.vec[x] for x in cands] + list(base)
            sol = linalg.solve(linalg.columns_to_matrix(cols, D.dim(nu), fld), w, fld)
            if sol is None:
                return PerfectResult(False, refutation=Refutation(i, b, "e_i b does not lie in the expected kernel"))
            nz = [k for k, x in enumerate(sol[: len(cands)]) if x]
            if len(nz) != 1:
                return PerfectResult(
                    False,
                    refutation=Refutation(i, b, "e_i b has several leading terms", {"terms": [cands[k] for k in nz]}),
                )
            Emap[i][b] = cands[nz[0]]
            coeff[(i, b)] = sol[nz[0]]
        seen = {}
        for b, t in Emap[i].items():
            if t is None:
                continue
            if t in seen:
                return PerfectResult(False, refutation=Refutation(i, b, "E_i is not injective", {"other": seen[t]}))
            seen[t] = b
    return PerfectResult(True, PerfectCertificate(D, B, delta, Emap, coeff))


def kernel_filtration_suite(cert: PerfectCertificate) -> dict:
    D, B = cert.space, cert.basis
    fld = D.field
    res = {k: [] for k in ("kernel_span", "decrement", "image_criterion", "quotient_basis")}
    counts = {k: 0 for k in res}
    for i in D.datum.indices:
        for mu in D.weights:
            d = D.dim(mu)
            if not d:
                continue
            top = max(cert.delta[(i, b)] for b in B.at[mu])
            for n in range(top + 2):
                counts["kernel_span"] += 1
                sel = [B.vec[b] for b in B.at[mu] if cert.delta[(i, b)] < n]
                if not linalg.same_span(sel, D.kernel(i, mu, n).rows, d, fld):
                    res["kernel_span"].append({"i": i + 1, "mu": list(mu), "n": n})
        image_of_E = {t for t in cert.Emap[i].values() if t is not None}
        for b in range(len(B)):
            dl = cert.delta[(i, b)]
            t = cert.Emap[i].get(b)
            if dl > 0:
                counts["decrement"] += 1
                if t is None or cert.delta[(i, t)] != dl - 1:
                    res["decrement"].append({"i": i + 1, "b": b})
            # b in E_i B iff b in e_i V + ker e_i^delta(b)
            counts["image_criterion"] += 1
            mu = B.wt[b]
            e = Echelon(D.dim(mu), fld)
            for r in D.image(i, mu).rows:
                e.add(r)
            for r in D.kernel(i, mu, dl).rows:
                e.add(r)
            if e.contains(B.vec[b]) != (b in image_of_E):
                res["image_criterion"].append({"i": i + 1, "b": b})
        counts["quotient_basis"] += 1
        res["quotient_basis"].extend(dict(x, i=i + 1) for x in kernel_quotient_failures(D, B, cert.delta, i))
    return {
        "ok": all(not v for v in res.values()),
        "clauses": {k: {"ok": not v, "checked": counts[k], "failures": v[:20]} for k, v in res.items()},
    }


def check_duality_roundtrip(V: PreDualPerfectSpace, matrices=None) -> dict:
    """Run both verifiers on B and its dual basis and compare their data."""
    B = make_basis(V, matrices)
    D = transpose_space(V)
    dres = verify_dual_perfect(V, B)
    pres = verify_perfect(D, dual_basis(B))
    report = {
        "dual_perfect": dres.ok,
        "perfect": pres.ok,
        "agree": dres.ok == pres.ok,
        "pairing": pairing_report(V, D)["ok"],
    }
    if dres.ok and pres.ok:
        c, p = dres.certificate, pres.certificate
        ell_ok = all(c.ell[k] == p.delta[k] for k in c.ell)
        graph_ok = True
        for i in V.datum.indices:
            em = c.emap(i)
            for b in range(len(B)):
                if em.get(b) != p.Emap[i].get(b):
                    graph_ok = False
        report.update(ell_equals_delta=ell_ok, graph_correspondence=graph_ok, kernel_suite=kernel_filtration_suite(p))
        report["ok"] = report["agree"] and report["pairing"] and ell_ok and graph_ok and report["kernel_suite"]["ok"]
    else:
        report["ok"] = report["agree"] and report["pairing"]
        report["refutations"] = {
            "dual_perfect": dres.refutation.to_json() if dres.refutation else None,
            "perfect": pres.refutation.to_json() if pres.refutation else None,
        }
    return report


def module_raise_comparison(rep) -> dict:
    """e_i on V(lambda) against F^T under the contravariant form: G_up E = F^T G_low."""
    fld = linalg.QQq
    fails = []
    for beta in rep.betas():
        if rep.is_frontier(beta):
            continue
        for i in rep.datum.indices:
            nb = tuple(b + (1 if k == i else 0) for k, b in enumerate(beta))
            if not rep.has(nb):
                continue
            F = rep.lower(i, beta)
            E = rep.raise_(i, nb)
            sp_up, sp_low = rep.spaces[beta], rep.spaces[nb]
            g_up = [[sp_up.gram[a][c] for c in sp_up.basis] for a in sp_up.basis]
            g_low = [[sp_low.gram[a][c] for c in sp_low.basis] for a in sp_low.basis]
            lhs = linalg.matmul(g_up, E, fld)
            rhs = linalg.matmul(linalg.transpose(F, len(g_up)), g_low, fld)
            if lhs != rhs:
                fails.append({"i": i + 1, "beta": list(beta)})
    return {"ok": not fails, "failures": fails}
