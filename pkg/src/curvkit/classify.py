"""Deciding curvature-restricted structures with witnesses or refutations.

Every decision is generic: symbols are treated as independent, and any
division by an expression that might vanish is recorded on the verdict as an
assumption.  A verdict whose assumption list is empty is unconditional.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg
from .curvature import Curvature, cyclic_sum, divergence, kulkarni_nomizu, ricci_power
from .expr import ONE, ZERO, AssumptionSet, Scalar, as_scalar
from .geometry import Metric, Tensor, covariant_derivative, raise_lower
from .linalg import Inconsistent, LinearForm, PivotPolicy, SolutionSpace, solve_linear

HOLDS = "holds"
FAILS = "fails"
HOLDS_UNDER = "holds-under-assumptions"
VACUOUS = "vacuous"


@dataclass
class PropertyVerdict:
    name: str
    status: str
    witness: dict = field(default_factory=dict)
    assumptions: list = field(default_factory=list)
    certificate: Optional[tuple] = None  # (1-based index, nonzero residual)
    summary: str = ""

    @property
    def holds(self) -> bool:
        return self.status in (HOLDS, HOLDS_UNDER)

    def line(self) -> str:
        text = self.summary or self.status
        if self.assumptions:
            text += " [assuming " + ", ".join(f"{a} != 0" for a in self.assumptions) + "]"
        return f"{self.name}: {text}"


def _status(ok: bool, assumptions) -> str:
    if not ok:
        return FAILS
    return HOLDS_UNDER if assumptions else HOLDS


def zero_verdict(name: str, t: Tensor, assumptions: Optional[AssumptionSet] = None) -> PropertyVerdict:
    """holds iff every component of ``t`` is structurally zero after substitution."""
    if assumptions is not None:
        t = t.subs(assumptions)
    hit = t.first_nonzero()
    if hit is None:
        return PropertyVerdict(name, HOLDS)
    return PropertyVerdict(name, FAILS, certificate=hit, summary=f"fails ({_index(hit[0])} = {hit[1]})")


def _index(idx) -> str:
    return "[" + "][".join(str(i) for i in idx) + "]"


def _form(values) -> str:
    return "{" + ",".join(str(v) for v in values) + "}"


# ---------------------------------------------------------------------------
# the classifier


class Classifier:
    """All structure decisions for one metric under one assumption set.

    ``assumptions`` are applied to every tensor before a decision, on top of
    the substitutions already baked into the metric.
    """

    def __init__(self, metric: Metric, assumptions: Optional[AssumptionSet] = None,
                 curvature: Optional[Curvature] = None):
        self.metric = metric
        base = metric.assumptions
        extra = assumptions or AssumptionSet()
        self.assumptions = AssumptionSet(
            base.substitutions + extra.substitutions, base.nonzero + extra.nonzero
        )
        self.cv = curvature or Curvature(metric)
        self._cache: dict = {}

    # plumbing -------------------------------------------------------------

    def policy(self) -> PivotPolicy:
        return PivotPolicy(self.metric.nonzero_generators, self.assumptions.nonzero)

    def tensor(self, name: str) -> Tensor:
        key = ("t", name)
        if key not in self._cache:
            self._cache[key] = self.cv.tensor(name).subs(self.assumptions)
        return self._cache[key]

    def nabla(self, name: str) -> Tensor:
        key = ("n", name)
        if key not in self._cache:
            self._cache[key] = self.cv.nabla(name).subs(self.assumptions)
        return self._cache[key]

    def dot(self, D: str, H: str) -> Tensor:
        key = ("dot", D, H)
        if key not in self._cache:
            self._cache[key] = self.cv.dot(D, H).subs(self.assumptions)
        return self._cache[key]

    def q(self, A: str, H: str) -> Tensor:
        key = ("q", A, H)
        if key not in self._cache:
            self._cache[key] = self.cv.q(A, H).subs(self.assumptions)
        return self._cache[key]

    def _solve(self, unknowns, equations):
        policy = self.policy()
        return solve_linear(unknowns, equations, policy)

    def _solution_verdict(self, name, sol, describe=None, vacuous=False,
                          nonzero=False) -> PropertyVerdict:
        if vacuous:
            return PropertyVerdict(name, VACUOUS, summary="vacuous (tensor is zero)")
        if isinstance(sol, Inconsistent):
            return PropertyVerdict(
                name, FAILS, certificate=("equation", sol.residual),
                summary=f"fails (reduced equation 0 = {sol.residual})",
                assumptions=[],
            )
        if nonzero and not sol.has_nonzero_member():
            return PropertyVerdict(name, FAILS, certificate=("trivial", sol),
                                   summary="fails (only the zero 1-form)")
        witness = {"solution": sol}
        summary = describe(sol) if describe else _status(True, sol.assumptions)
        return PropertyVerdict(name, _status(True, sol.assumptions), witness, list(sol.assumptions), summary=summary)

    # Def: parallel, Codazzi, cyclic parallel, recurrent ------------------------

    def derivative_class(self, name: str = "S", label: Optional[str] = None) -> dict:
        """Verdicts {parallel, codazzi, cyclic_parallel, recurrent} for a (0,2) tensor."""
        label = label or name
        Z = self.tensor(name)
        nZ = self.nabla(name)
        n = self.metric.dim
        d = nZ.data
        cod = np.empty((n, n, n), dtype=object)
        cyc = np.empty((n, n, n), dtype=object)
        for i, j, k in itertools.product(range(n), repeat=3):
            # Codazzi: (nabla_i Z)(j,k) - (nabla_j Z)(i,k)
            cod[i, j, k] = d[j, k, i] - d[i, k, j]
            cyc[i, j, k] = d[j, k, i] + d[k, i, j] + d[i, j, k]
        out = {
            "parallel": zero_verdict(f"{label}_parallel", nZ),
            "codazzi": zero_verdict(f"{label}_codazzi", Tensor(cod, "ddd", nZ.chart)),
            "cyclic_parallel": zero_verdict(f"{label}_cyclic_parallel", Tensor(cyc, "ddd", nZ.chart)),
            "recurrent": self.recurrence_of(name, f"{label}_recurrent"),
        }
        return out

    # semisymmetry and pseudosymmetry ------------------------------------------

    def semisymmetry_check(self, D: str, H: str, name: Optional[str] = None) -> PropertyVerdict:
        return zero_verdict(name or f"{D}.{H}", self.dot(D, H))

    def find_linear_relation(self, tensors: Sequence[Tensor], name: str = "relation",
                             labels: Optional[Sequence[str]] = None) -> PropertyVerdict:
        """Scalars c with sum c_i t_i = 0, as a solution space over the function field."""
        if len(tensors) < 2:
            raise ValueError("need at least two tensors")
        shape = tensors[0].data.shape
        if any(t.data.shape != shape or t.valence != tensors[0].valence for t in tensors):
            raise ValueError("tensors must share one shape")
        labels = list(labels or [f"c{i + 1}" for i in range(len(tensors))])
        if all(t.is_zero() for t in tensors):
            return PropertyVerdict(name, VACUOUS, summary="vacuous (all tensors zero)")
        eqs = []
        for idx in np.ndindex(*shape):
            lf = LinearForm()
            for i, t in enumerate(tensors):
                lf.add(i, t.data[idx])
            if lf.coeffs:
                eqs.append(lf)
        sol = self._solve(labels, eqs)
        if not sol.basis:
            return PropertyVerdict(name, FAILS, summary="fails (no nonzero relation)")
        rels = [_normalize(vec, labels) for vec in sol.basis]
        constant = any(all(v.is_number for v in r.values()) for r in rels)
        witness = {"relations": rels, "constant_coefficients": constant, "solution": sol}
        shown = "; ".join("(" + ", ".join(str(r[k]) for k in labels) + ")" for r in rels)
        return PropertyVerdict(name, _status(True, sol.assumptions), witness,
                               list(sol.assumptions), summary=f"holds {shown}")

    def pseudosymmetry(self, lhs: Tensor, rhs: Tensor, name: str) -> PropertyVerdict:
        """Relation lhs = c * rhs with both sides nonzero; witness c."""
        if lhs.is_zero() or rhs.is_zero():
            v = PropertyVerdict(name, VACUOUS, summary="vacuous (a side is zero)")
            return v
        v = self.find_linear_relation([lhs, rhs], name, ["lhs", "rhs"])
        if not v.holds:
            return v
        rel = v.witness["relations"][0]
        c = -rel["rhs"] / rel["lhs"]
        v.witness["factor"] = c
        v.summary = f"holds (factor {c})"
        return v

    # quasi-Einstein and Ein(k) -------------------------------------------------

    def quasi_einstein_level(self) -> PropertyVerdict:
        """Minimal generic rank of S - alpha g over candidate alphas."""
        S = self.tensor("S").data
        g = self.metric.g.data
        n = self.metric.dim
        candidates = [ZERO]
        for i in range(n):
            for j in range(i, n):
                if g[i, j]:
                    candidates.append(S[i, j] / g[i, j])
        for (i, j), (k, l) in itertools.product(itertools.combinations(range(n), 2), repeat=2):
            a2 = g[i, k] * g[j, l] - g[i, l] * g[j, k]
            if a2:
                continue
            a1 = -(S[i, k] * g[j, l] + g[i, k] * S[j, l]) + (S[i, l] * g[j, k] + g[i, l] * S[j, k])
            a0 = S[i, k] * S[j, l] - S[i, l] * S[j, k]
            if a1:
                candidates.append(-a0 / a1)
        seen, best = set(), None
        for alpha in candidates:
            if alpha in seen:
                continue
            seen.add(alpha)
            policy = self.policy()
            m = [[S[i, j] - alpha * g[i, j] for j in range(n)] for i in range(n)]
            r = linalg.rank(m, policy)
            if best is None or r < best[0] or (r == best[0] and alpha.size < best[1].size):
                best = (r, alpha, list(policy.used))
        level, alpha, used = best
        witness = {"level": level, "alpha": alpha, "rank": level}
        return PropertyVerdict("quasi_einstein_level", _status(True, used), witness, used,
                               summary=f"{level} (alpha = {alpha})")

    def ricci_simple(self) -> PropertyVerdict:
        """S = beta eta⊗eta: rank(S) = 1, with the factorization as witness."""
        S = self.tensor("S")
        if S.is_zero():
            return PropertyVerdict("ricci_simple", FAILS, summary="fails (Ricci flat)")
        fac = rank_one_factor(S)
        if fac is None:
            return PropertyVerdict("ricci_simple", FAILS, summary="fails (rank of S exceeds 1)")
        beta, eta = fac
        norm = self.covector_norm(eta)
        w = {"beta": beta, "eta": eta, "eta_norm": norm}
        return PropertyVerdict("ricci_simple", HOLDS, w,
                               summary=f"holds (beta = {beta}, eta = {_form(eta)}, ||eta|| = {norm})")

    def ein_level(self) -> PropertyVerdict:
        """Degree of the minimal polynomial of the Ricci endomorphism and its coefficients."""
        S = self.tensor("S").data.tolist()
        ginv = self.metric.inverse.data.tolist()
        endo = linalg.matmul(ginv, S)
        policy = self.policy()
        coeffs = linalg.minimal_polynomial(endo, policy)
        k = len(coeffs)
        witness = {"degree": k, "coefficients": coeffs, "level": k}
        summary = f"{k}"
        if k == 1:
            summary += " (Einstein)"
        elif k > 1:
            # state the neighbouring level too, so a claimed Ein(k-1) is visibly refuted
            summary += f" (Ein({k}); not Ein({k - 1}))"
        return PropertyVerdict("ein_level", _status(True, policy.used), witness,
                               list(policy.used), summary=summary)

    # recurrence ------------------------------------------------------------------

    def recurrence_of(self, name: str, label: Optional[str] = None) -> PropertyVerdict:
        """nabla Z = Pi ⊗ Z for a 1-form Pi."""
        label = label or f"{name}_recurrent"
        Z, nZ = self.tensor(name), self.nabla(name)
        if Z.is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (tensor is zero)")
        unknowns = _one_forms("Pi")
        eqs = []
        for idx in np.ndindex(*nZ.data.shape):
            base, k = idx[:-1], idx[-1]
            lf = LinearForm(const=nZ.data[idx])
            lf.add(k, -Z.data[base])
            eqs.append(lf)
        return self._solution_verdict(label, self._solve(unknowns, eqs), _describe_forms(("Pi",)))

    def ricci_one_forms(self, name: str = "S", label: str = "ricci_1forms_recurrent") -> PropertyVerdict:
        """(nabla_i Z)(j,x) - (nabla_j Z)(i,x) = Pi_i Z(j,x) - Pi_j Z(i,x)."""
        Z, nZ = self.tensor(name), self.nabla(name)
        if Z.is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (tensor is zero)")
        n = self.metric.dim
        eqs = []
        for i, j, x in itertools.product(range(n), repeat=3):
            lf = LinearForm(const=nZ.data[j, x, i] - nZ.data[i, x, j])
            lf.add(i, -Z.data[j, x])
            lf.add(j, Z.data[i, x])
            eqs.append(lf)
        return self._solution_verdict(label, self._solve(_one_forms("Pi"), eqs), _describe_forms(("Pi",)))

    def two_forms(self, name: str, label: str) -> PropertyVerdict:
        """Cyclic nabla-D over the first three positions equals the Pi-weighted cyclic sum."""
        D, nD = self.tensor(name), self.nabla(name)
        if D.is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (tensor is zero)")
        n = self.metric.dim
        d, dd = nD.data, D.data
        eqs = []
        for a, b, c, x, y in itertools.product(range(n), repeat=5):
            const = d[b, c, x, y, a] + d[c, a, x, y, b] + d[a, b, x, y, c]
            lf = LinearForm(const=const)
            lf.add(a, -dd[b, c, x, y])
            lf.add(b, -dd[c, a, x, y])
            lf.add(c, -dd[a, b, x, y])
            eqs.append(lf)
        # the left side vanishes by the Bianchi identity, so only a nonzero Pi means anything
        return self._solution_verdict(label, self._solve(_one_forms("Pi"), eqs),
                                      _describe_forms(("Pi",)), nonzero=True)

    def super_generalized_recurrent(self) -> PropertyVerdict:
        """nabla R = Pi⊗R + Omega⊗(S∧S) + Theta⊗(g∧S) + omega⊗(g∧g)."""
        R, nR = self.tensor("R"), self.nabla("R")
        g, S = self.metric.g, self.tensor("S")
        parts = [R, kulkarni_nomizu(S, S), kulkarni_nomizu(g, S), kulkarni_nomizu(g, g)]
        names = ("Pi", "Omega", "Theta", "omega")
        label = "super_generalized_recurrent"
        if R.is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (R is zero)")
        n = self.metric.dim
        eqs = []
        for idx in np.ndindex(*nR.data.shape):
            base, k = idx[:-1], idx[-1]
            lf = LinearForm(const=nR.data[idx])
            for f, t in enumerate(parts):
                lf.add(f * n + k, -t.data[base])
            eqs.append(lf)
        unknowns = [u for nm in names for u in _one_forms(nm)]
        return self._solution_verdict(label, self._solve(unknowns, eqs), _describe_forms(names))

    def solve_recurrence(self, target: str) -> PropertyVerdict:
        if target in ("R", "S", "C", "T", "P", "W", "K"):
            return self.recurrence_of(target)
        if target == "ricci-1-forms":
            return self.ricci_one_forms()
        if target == "curvature-2-forms":
            return self.two_forms("R", "curvature_2forms_recurrent")
        if target == "conformal-2-forms":
            return self.two_forms("C", "conformal_2forms_recurrent")
        if target == "super-generalized":
            return self.super_generalized_recurrent()
        raise ValueError(f"unknown recurrence target {target!r}")

    # weak symmetry --------------------------------------------------------------

    def weak_symmetry(self, target: str) -> PropertyVerdict:
        """Weak Z-, D- or cyclic Ricci symmetry, with Chaki and recurrence shapes checked."""
        if target == "cyclic-ricci":
            return self._weak_two("S", cyclic=True, label="weakly_cyclic_ricci_symmetric")
        t = self.tensor(target)
        if t.valence == "dd":
            label = "weakly_ricci_symmetric" if target == "S" else f"weakly_{target}_symmetric"
            return self._weak_two(target, cyclic=False, label=label)
        return self._weak_four(target, f"weakly_symmetric_{target}")

    def _weak_two(self, name: str, cyclic: bool, label: str) -> PropertyVerdict:
        Z, nZ = self.tensor(name), self.nabla(name)
        if Z.is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (tensor is zero)")
        n = self.metric.dim
        z, d = Z.data, nZ.data
        forms = ("Pi", "Omega", "Theta")
        eqs = []
        for i, j, k in itertools.product(range(n), repeat=3):
            # X = k, X1 = i, X2 = j
            const = d[i, j, k]
            if cyclic:
                const = const + d[k, j, i] + d[i, k, j]
            lf = LinearForm(const=const)
            lf.add(0 * n + k, -z[i, j])
            lf.add(1 * n + i, -z[k, j])
            lf.add(2 * n + j, -z[i, k])
            eqs.append(lf)
        return self._weak_verdict(label, forms, eqs, chaki=(2, 1, 1))

    def _weak_four(self, name: str, label: str) -> PropertyVerdict:
        D, nD = self.tensor(name), self.nabla(name)
        if D.is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (tensor is zero)")
        n = self.metric.dim
        dd, d = D.data, nD.data
        forms = ("Pi", "Omega", "Omegabar", "Theta", "Thetabar")
        eqs = []
        for a, b, c, e, x in itertools.product(range(n), repeat=5):
            lf = LinearForm(const=d[a, b, c, e, x])
            lf.add(0 * n + x, -dd[a, b, c, e])
            lf.add(1 * n + a, -dd[x, b, c, e])
            lf.add(2 * n + b, -dd[a, x, c, e])
            lf.add(3 * n + c, -dd[a, b, x, e])
            lf.add(4 * n + e, -dd[a, b, c, x])
            eqs.append(lf)
        return self._weak_verdict(label, forms, eqs, chaki=(2, 1, 1, 1, 1))

    def _weak_verdict(self, label, forms, eqs, chaki) -> PropertyVerdict:
        n = self.metric.dim
        unknowns = [u for nm in forms for u in _one_forms(nm, n)]
        sol = self._solve(unknowns, eqs)
        v = self._solution_verdict(label, sol, _describe_forms(forms))
        if not v.holds:
            return v
        # Chaki shape (2Pi, Pi, ...): unknown block f equals chaki[f]/2 times block 0
        extra = []
        for f in range(1, len(forms)):
            for k in range(n):
                lf = LinearForm()
                lf.add(f * n + k, Scalar(2))
                lf.add(k, Scalar(-chaki[f]))
                extra.append(lf)
        csol = self._solve(unknowns, list(eqs) + extra)
        v.witness["chaki"] = isinstance(csol, SolutionSpace) and _nonzero_member(csol)
        rec = []
        for f in range(1, len(forms)):
            for k in range(n):
                lf = LinearForm()
                lf.add(f * n + k, ONE)
                rec.append(lf)
        rsol = self._solve(unknowns, list(eqs) + rec)
        v.witness["recurrent_shape"] = isinstance(rsol, SolutionSpace)
        if v.witness["chaki"]:
            v.summary += "; admits the Chaki shape"
        return v

    # compatibility and Venzi ---------------------------------------------------

    def compatibility(self, name: str, symmetric: bool = False) -> PropertyVerdict:
        """(0,2) tensors E whose endomorphism 𝓔 satisfies the cyclic condition
        D(X2,X3,X,𝓔X1) + D(X3,X1,X,𝓔X2) + D(X1,X2,X,𝓔X3) = 0.

        For tensors with pair symmetry this is the same as placing 𝓔X1 first.
        By default E is a general (0,2) tensor; ``symmetric=True`` restricts to
        symmetric E.  The witness reports whether S and g are members.
        """
        label = f"compatible_{name}"
        D = self.tensor(name)
        if D.is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (tensor is zero)")
        n = self.metric.dim
        up = self._compat_up(D)
        if symmetric:
            pairs = [(i, j) for i in range(n) for j in range(i, n)]
            slot = {}
            for u, (i, j) in enumerate(pairs):
                slot[i, j] = slot[j, i] = u
            unknowns = [f"E{i + 1}{j + 1}" for i, j in pairs]
        else:
            slot = {(i, j): i * n + j for i in range(n) for j in range(n)}
            unknowns = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
        eqs = []
        for i, x, j, k in itertools.product(range(n), repeat=4):
            lf = LinearForm()
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for l in range(n):
                    lf.add(slot[a, l], up[l, x, b, c])
            if lf.coeffs:
                eqs.append(lf)
        sol = self._solve(unknowns, eqs)
        S = self.tensor("S")
        g = self.metric.g
        as_cand = lambda t: {unknowns[slot[i, j]]: t.data[i, j] for i in range(n) for j in range(n)}
        witness = {
            "solution": sol,
            "slot": slot,
            "ricci_member": sol.contains(as_cand(S)),
            "metric_member": sol.contains(as_cand(g)),
        }
        status = _status(True, sol.assumptions)
        summary = f"{sol.dimension}-parameter family; S is {'a' if witness['ricci_member'] else 'not a'} member"
        return PropertyVerdict(label, status, witness, list(sol.assumptions), summary=summary)

    def _compat_up(self, D: Tensor) -> np.ndarray:
        # up[l, x, j, k] = sum_m g^{ml} D[j, k, x, m]
        n = self.metric.dim
        ginv = self.metric.inverse.data
        up = np.empty((n,) * 4, dtype=object)
        for l, x, j, k in itertools.product(range(n), repeat=4):
            up[l, x, j, k] = Scalar.sum(
                ginv[m, l] * D.data[j, k, x, m] for m in range(n) if ginv[m, l] and D.data[j, k, x, m]
            )
        return up

    def compatibility_residual(self, name: str, E: Tensor) -> Tensor:
        """The cyclic compatibility sum for one given (0,2) tensor E, indexed (X1, X, X2, X3)."""
        n = self.metric.dim
        up = self._compat_up(self.tensor(name))
        e = E.data
        out = np.empty((n,) * 4, dtype=object)
        for i, x, j, k in itertools.product(range(n), repeat=4):
            out[i, x, j, k] = Scalar.sum(
                e[a, l] * up[l, x, b, c]
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j))
                for l in range(n)
                if e[a, l] and up[l, x, b, c]
            )
        return Tensor(out, "dddd", self.metric.chart)

    def venzi(self, name: str) -> PropertyVerdict:
        """1-forms Theta with the cyclic Theta-weighting of D vanishing."""
        label = f"venzi_{name}"
        D = self.tensor(name)
        if D.is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (tensor is zero)")
        n = self.metric.dim
        dd = D.data
        eqs = []
        for a, b, c, x, y in itertools.product(range(n), repeat=5):
            lf = LinearForm()
            lf.add(a, dd[b, c, x, y])
            lf.add(b, dd[c, a, x, y])
            lf.add(c, dd[a, b, x, y])
            if lf.coeffs:
                eqs.append(lf)
        sol = self._solve(_one_forms("Theta"), eqs)
        if not sol.basis:
            return PropertyVerdict(label, FAILS, {"solution": sol}, summary="fails (only the zero 1-form)")
        span = ", ".join(_form(_normalize(b, sol.unknowns).values()) for b in sol.basis)
        return PropertyVerdict(label, _status(True, sol.assumptions), {"solution": sol, "dimension": sol.dimension},
                               list(sol.assumptions), summary=f"holds (span {span})")

    # stress-energy ------------------------------------------------------------------

    def covector_norm(self, xi) -> Scalar:
        ginv = self.metric.inverse.data
        n = self.metric.dim
        return Scalar.sum(ginv[i, j] * xi[i] * xi[j] for i in range(n) for j in range(n)
                          if ginv[i, j] and xi[i] and xi[j])

    def classify_stress_energy(self) -> PropertyVerdict:
        T = self.tensor("T")
        name = "stress_energy"
        if T.is_zero():
            return PropertyVerdict(name, HOLDS, {"kind": "vacuum"}, summary="vacuum")
        fac = rank_one_factor(T)
        if fac is not None:
            rho, eta = fac
            norm = self.covector_norm(eta)
            if not norm:
                return PropertyVerdict(name, HOLDS, {"kind": "pure_radiation", "rho": rho, "eta": eta},
                                       summary=f"pure_radiation (rho = {rho}, eta = {_form(eta)})")
        g = self.metric.g
        for p in self._fluid_candidates(T):
            rest = T - g * p
            fac = rank_one_factor(rest)
            if fac is not None and not rest.is_zero():
                sigma, eta = fac
                w = {"kind": "perfect_fluid", "pressure": p, "alpha": p, "sigma": sigma, "eta": eta,
                     "eta_norm": self.covector_norm(eta)}
                return PropertyVerdict(name, HOLDS, w, summary=(
                    f"perfect_fluid (T = ({p})*g + ({sigma})*eta⊗eta, eta = {_form(eta)})"))
        dec = frame_decomposition(T, g)
        if dec is not None:
            return PropertyVerdict(name, HOLDS, {"kind": "frame", **dec},
                                   summary=f"general (alpha = {dec['alpha']})")
        return PropertyVerdict(name, HOLDS, {"kind": "general"}, summary="general")

    def _fluid_candidates(self, T: Tensor):
        n = self.metric.dim
        g = self.metric.g.data
        seen = []
        for i in range(n):
            for j in range(i, n):
                if g[i, j]:
                    c = T.data[i, j] / g[i, j]
                    if c not in seen:
                        seen.append(c)
        return seen

    def constant_null_covector_check(self, candidates=None) -> PropertyVerdict:
        """Is some candidate covector null and parallel?"""
        n = self.metric.dim
        if candidates is None:
            candidates = {}
            for k in range(n):
                candidates[f"d{self.metric.chart.names[k]}"] = [ONE if i == k else ZERO for i in range(n)]
            for k in range(n):
                candidates[f"g(d/d{self.metric.chart.names[k]})"] = [self.metric.g.data[k, i] for i in range(n)]
        report = {}
        found = None
        for label, xi in candidates.items():
            xi = [self.assumptions.apply(as_scalar(v)) for v in xi]
            t = Tensor(np.array(xi, dtype=object), "d", self.metric.chart)
            nxi = covariant_derivative(t, self.metric).subs(self.assumptions)
            norm = self.covector_norm(xi)
            parallel = nxi.is_zero()
            report[label] = {"covector": xi, "norm": norm, "parallel": parallel,
                             "nabla": dict(nxi.items())}
            if not norm and parallel and any(xi) and found is None:
                found = label
        w = {"candidates": report, "found": found}
        if found:
            return PropertyVerdict("null_parallel_covector", HOLDS, w, summary=f"holds ({found})")
        return PropertyVerdict("null_parallel_covector", FAILS, w, summary="fails")

    # report -------------------------------------------------------------------

    def battery(self, properties: Optional[Iterable[str]] = None) -> "ClassificationReport":
        names = list(properties) if properties else list(PROPERTIES)
        unknown = [p for p in names if p not in PROPERTIES]
        if unknown:
            raise KeyError(f"unknown properties: {', '.join(unknown)}")
        report = ClassificationReport(self.metric.name, self.assumptions)
        for p in names:
            t0 = time.perf_counter()
            v = PROPERTIES[p](self)
            v.name = p
            report.add(v, time.perf_counter() - t0)
        report.apply_implications()
        return report


def _one_forms(name: str, n: int = 4) -> list:
    return [f"{name}{k + 1}" for k in range(n)]


def _normalize(vec: dict, keys) -> dict:
    """Scale so the first nonzero entry is 1."""
    lead = next((vec[k] for k in keys if vec[k]), ONE)
    return {k: vec[k] / lead for k in keys}


def _nonzero_member(sol: SolutionSpace) -> bool:
    return sol.has_nonzero_member()


def _describe_forms(forms):
    def describe(sol: SolutionSpace):
        n = len(sol.unknowns) // len(forms)
        status = HOLDS_UNDER if sol.assumptions else HOLDS
        if len(forms) == 1 and sol.is_homogeneous() and sol.basis:
            # a cone of 1-forms: show its generators instead of the zero member
            span = ", ".join(_form(_normalize(b, sol.unknowns).values()) for b in sol.basis)
            return f"{status} ({forms[0]} in span {span})"
        parts = []
        for f, nm in enumerate(forms):
            vals = [sol.particular[u] for u in sol.unknowns[f * n:(f + 1) * n]]
            parts.append(f"{nm} = {_form(vals)}")
        extra = f", {sol.dimension} free" if sol.dimension else ""
        return f"{status} ({'; '.join(parts)}{extra})"

    return describe


def rank_one_factor(A: Tensor):
    """Write a symmetric (0,2) tensor as beta * eta⊗eta with eta normalized, or None."""
    n = A.dim
    a = A.data
    piv = next((i for i in range(n) if a[i, i]), None)
    if piv is None:
        return None
    beta = a[piv, piv]
    eta = [a[piv, j] / beta for j in range(n)]
    for i in range(n):
        for j in range(n):
            if a[i, j] != beta * eta[i] * eta[j]:
                return None
    return beta, eta


def frame_decomposition(T: Tensor, g: Tensor, frame: Sequence[int] = (1, 3, 4)):
    """T = alpha g + sum over frame pairs of coefficients times e_i⊗e_j (symmetrized).

    alpha is read from the rows outside the frame; returns None if those rows
    are not proportional to g.
    """
    n = T.dim
    frame0 = [f - 1 for f in frame]
    outside = [i for i in range(n) if i not in frame0]
    alpha = None
    for i in outside:
        for j in range(n):
            if g.data[i, j]:
                c = T.data[i, j] / g.data[i, j]
                if alpha is None:
                    alpha = c
                elif c != alpha:
                    return None
    if alpha is None:
        return None
    for i in outside:
        for j in range(n):
            if T.data[i, j] != alpha * g.data[i, j]:
                return None
    coeffs = {}
    for i in frame0:
        for j in frame0:
            if i <= j:
                v = T.data[i, j] - alpha * g.data[i, j]
                if v:
                    coeffs[(i + 1, j + 1)] = v
    return {"alpha": alpha, "coefficients": coeffs}


# ---------------------------------------------------------------------------
# the battery


def _venzi(name):
    return lambda c: c.venzi(name)


def _semi(D, H):
    return lambda c: c.semisymmetry_check(D, H)


def _nonzero(label, getter):
    def run(c):
        t = getter(c)
        hit = t.first_nonzero()
        if hit is None:
            return PropertyVerdict(label, FAILS, summary="fails (tensor vanishes)")
        return PropertyVerdict(label, HOLDS, certificate=hit, summary=f"holds ({_index(hit[0])} = {hit[1]})")
    return run


def _scalar_zero(c):
    k = c.assumptions.apply(c.metric.scalar)
    return PropertyVerdict("scalar_curvature_zero", HOLDS if not k else FAILS,
                           {"kappa": k}, summary="holds" if not k else f"fails (kappa = {k})")


def _einstein(c):
    v = c.quasi_einstein_level()
    ok = v.witness["level"] == 0
    return PropertyVerdict("einstein", _status(ok, v.assumptions if ok else []), v.witness,
                           v.assumptions if ok else [])


def _level(c, k, label):
    v = c.quasi_einstein_level()
    ok = v.witness["level"] <= k
    return PropertyVerdict(label, _status(ok, v.assumptions if ok else []), v.witness,
                           v.assumptions if ok else [], summary=("holds" if ok else "fails") + f" (level {v.witness['level']})")


def _pseudo(D1, H, A, label):
    return lambda c: c.pseudosymmetry(c.dot(D1, H), c.q(A, H), label)


def _T_classes(key):
    def run(c):
        return c.derivative_class("T")[key]
    return run


def _S_classes(key):
    def run(c):
        return c.derivative_class("S")[key]
    return run


def _compatible_member(name):
    def run(c):
        label = f"ricci_compatible_{name}"
        if c.tensor(name).is_zero():
            return PropertyVerdict(label, VACUOUS, summary="vacuous (tensor is zero)")
        return zero_verdict(label, c.compatibility_residual(name, c.tensor("S")))
    return run


def _weak(target):
    return lambda c: c.weak_symmetry(target)


def _div(name):
    def run(c):
        n = c.tensor(name)
        return zero_verdict(f"div_{name}_zero", divergence(n, 1, c.metric))
    return run


def _pp_rup(c):
    t = c.dot("P", "Rup")
    hit = t.first_nonzero()
    return PropertyVerdict("P.Rup", HOLDS if hit is None else FAILS, certificate=hit,
                           summary="holds" if hit is None else f"fails ({_index(hit[0])} = {hit[1]})")


PROPERTIES = {
    "scalar_curvature_zero": _scalar_zero,
    "einstein": _einstein,
    "ricci_simple": lambda c: c.ricci_simple(),
    "quasi_einstein_level": lambda c: c.quasi_einstein_level(),
    "ein_level": lambda c: c.ein_level(),
    "locally_symmetric": lambda c: zero_verdict("locally_symmetric", c.nabla("R")),
    "ricci_symmetric": lambda c: zero_verdict("ricci_symmetric", c.nabla("S")),
    "conformally_symmetric": lambda c: zero_verdict("conformally_symmetric", c.nabla("C")),
    "ricci_codazzi": _S_classes("codazzi"),
    "ricci_cyclic_parallel": _S_classes("cyclic_parallel"),
    "semisymmetric": _semi("R", "R"),
    "ricci_semisymmetric": _semi("R", "S"),
    "R.C": _semi("R", "C"),
    "R.P": _semi("R", "P"),
    "R.T": _semi("R", "T"),
    "C.R": _semi("C", "R"),
    "C.S": _semi("C", "S"),
    "C.C": _semi("C", "C"),
    "C.P": _semi("C", "P"),
    "P.S": _semi("P", "S"),
    "P.R": _semi("P", "R"),
    "P.C": _semi("P", "C"),
    "P.Rup": _pp_rup,
    "P.Sup": _semi("P", "Sup"),
    "Q(S,R)": lambda c: zero_verdict("Q(S,R)", c.q("S", "R")),
    "Q(S,C)": lambda c: zero_verdict("Q(S,C)", c.q("S", "C")),
    "P.P=cQ(S,P)": _pseudo("P", "P", "S", "P.P=cQ(S,P)"),
    "R.R=cQ(S,R)": _pseudo("R", "R", "S", "R.R=cQ(S,R)"),
    "R.R=cQ(g,R)": _pseudo("R", "R", "G", "R.R=cQ(g,R)"),
    "venzi_R": _venzi("R"),
    "venzi_C": _venzi("C"),
    "venzi_P": _venzi("P"),
    "recurrent": lambda c: c.recurrence_of("R", "recurrent"),
    "ricci_recurrent": lambda c: c.recurrence_of("S", "ricci_recurrent"),
    "conformally_recurrent": lambda c: c.recurrence_of("C", "conformally_recurrent"),
    "ricci_1forms_recurrent": lambda c: c.solve_recurrence("ricci-1-forms"),
    "curvature_2forms_recurrent": lambda c: c.solve_recurrence("curvature-2-forms"),
    "conformal_2forms_recurrent": lambda c: c.solve_recurrence("conformal-2-forms"),
    "super_generalized_recurrent": lambda c: c.solve_recurrence("super-generalized"),
    "ricci_compatible_R": _compatible_member("R"),
    "ricci_compatible_C": _compatible_member("C"),
    "ricci_compatible_P": _compatible_member("P"),
    "weakly_ricci_symmetric": _weak("S"),
    "weakly_cyclic_ricci_symmetric": _weak("cyclic-ricci"),
    "weakly_symmetric_R": _weak("R"),
    "weakly_symmetric_C": _weak("C"),
    "weakly_symmetric_P": _weak("P"),
    "weakly_symmetric_W": _weak("W"),
    "weakly_symmetric_K": _weak("K"),
    "stress_energy": lambda c: c.classify_stress_energy(),
    "T_codazzi": _T_classes("codazzi"),
    "T_cyclic_parallel": _T_classes("cyclic_parallel"),
    "T_parallel": _T_classes("parallel"),
    "null_parallel_covector": lambda c: c.constant_null_covector_check(),
    "div_R_zero": _div("R"),
    "div_C_zero": _div("C"),
    "div_P_zero": _div("P"),
}

# (premise, consequence) pairs that hold by linearity or by definition
IMPLICATIONS = [
    ("semisymmetric", "ricci_semisymmetric"),
    ("semisymmetric", "R.C"),
    ("semisymmetric", "R.P"),
    ("semisymmetric", "R.T"),
    ("locally_symmetric", "semisymmetric"),
    ("C.R", "C.S"),
    ("C.R", "C.C"),
    ("C.R", "C.P"),
    ("weakly_ricci_symmetric", "weakly_cyclic_ricci_symmetric"),
    ("curvature_2forms_recurrent", "venzi_R"),
    ("venzi_R", "curvature_2forms_recurrent"),
]


@dataclass
class ClassificationReport:
    metric: str
    assumptions: AssumptionSet
    verdicts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    implications: list = field(default_factory=list)

    def add(self, v: PropertyVerdict, seconds: float = 0.0):
        if v.name in self.verdicts:
            raise ValueError(f"property {v.name!r} evaluated twice")
        self.verdicts[v.name] = v
        self.timings[v.name] = seconds

    def apply_implications(self):
        """Record which implications were observed; computed verdicts are never replaced."""
        for a, b in IMPLICATIONS:
            va, vb = self.verdicts.get(a), self.verdicts.get(b)
            if va is None or not va.holds:
                continue
            if vb is None:
                self.implications.append((a, b, "not evaluated"))
            else:
                self.implications.append((a, b, "consistent" if vb.holds else "VIOLATED"))

    def __getitem__(self, name: str) -> PropertyVerdict:
        return self.verdicts[name]

    def lines(self):
        return [v.line() for v in self.verdicts.values()]


def compare(a: Classifier, b: Classifier, properties: Optional[Iterable[str]] = None):
    """Side-by-side verdicts; returns (similar, dissimilar) lists of (property, va, vb)."""
    names = list(properties) if properties else COMPARISON_PROPERTIES
    ra, rb = a.battery(names), b.battery(names)
    similar, dissimilar = [], []
    for p in names:
        va, vb = ra[p], rb[p]
        (similar if va.holds == vb.holds else dissimilar).append((p, va, vb))
    return similar, dissimilar


COMPARISON_PROPERTIES = [
    "scalar_curvature_zero",
    "venzi_R",
    "venzi_C",
    "semisymmetric",
    "C.R",
    "Q(S,R)",
    "Q(S,C)",
    "ricci_simple",
    "ricci_compatible_R",
    "ricci_compatible_C",
    "ricci_1forms_recurrent",
    "conformal_2forms_recurrent",
    "P.R",
    "P.Rup",
    "weakly_ricci_symmetric",
    "weakly_cyclic_ricci_symmetric",
    "P.P=cQ(S,P)",
    "R.T",
    "ricci_recurrent",
    "null_parallel_covector",
    "T_cyclic_parallel",
    "T_parallel",
]


# functional forms taking the metric directly ----------------------------------


def derivative_class(Z: str, metric: Metric, assumptions=None) -> dict:
    return Classifier(metric, assumptions).derivative_class(Z)


def semisymmetry_check(D: str, H: str, metric: Metric, assumptions=None) -> PropertyVerdict:
    return Classifier(metric, assumptions).semisymmetry_check(D, H)


def quasi_einstein_level(metric: Metric, assumptions=None) -> PropertyVerdict:
    return Classifier(metric, assumptions).quasi_einstein_level()


def ein_level(metric: Metric, assumptions=None) -> PropertyVerdict:
    return Classifier(metric, assumptions).ein_level()


def solve_recurrence(target: str, metric: Metric, assumptions=None) -> PropertyVerdict:
    return Classifier(metric, assumptions).solve_recurrence(target)


def solve_weak_symmetry(target: str, metric: Metric, assumptions=None) -> PropertyVerdict:
    return Classifier(metric, assumptions).weak_symmetry(target)


def solve_compatibility(D: str, metric: Metric, assumptions=None, symmetric: bool = False) -> PropertyVerdict:
    return Classifier(metric, assumptions).compatibility(D, symmetric)


def solve_venzi(D: str, metric: Metric, assumptions=None) -> PropertyVerdict:
    return Classifier(metric, assumptions).venzi(D)


def classify_stress_energy(metric: Metric, assumptions=None) -> PropertyVerdict:
    return Classifier(metric, assumptions).classify_stress_energy()


def constant_null_covector_check(metric: Metric, candidates=None, assumptions=None) -> PropertyVerdict:
    return Classifier(metric, assumptions).constant_null_covector_check(candidates)
