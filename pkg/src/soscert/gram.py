"""Gram matrices for p modulo a radical zero-dimensional ideal.

The pipeline: assemble a positive definite real Gram matrix from the
variety data (real roots contribute p(xi) u_xi^2; conjugate pairs are
combined into two real squares through the lambda-window identity), round
it to dyadic rationals, project exactly onto the affine variety of Gram
matrices of p, and factor the result by fraction-free LDL^t into an exact
weighted sum of squares.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

from . import exactla
from .errors import (InfeasibleVariety, NonPositiveAtRealRoot, NotPD,
                     PrecisionExceeded, ZeroPivot)
from .polyring import Polynomial, evaluate, round_binary

DEFAULT_MAX_BITS = 4096


def precision_ceiling():
    return int(os.environ.get("SOS_CERT_MAX_BITS", DEFAULT_MAX_BITS))


class SymmetricMatrix:
    """Symmetric matrix with integer entries over a common denominator."""

    def __init__(self, mat, nu=1):
        self.mat = [[int(x) for x in row] for row in mat]
        self.nu = int(nu)
        self.D = len(mat)

    @classmethod
    def from_rational(cls, rows):
        nu = 1
        for row in rows:
            for x in row:
                nu = nu * x.denominator // math.gcd(nu, x.denominator)
        return cls([[int(x * nu) for x in row] for row in rows], nu)

    def entry(self, i, j):
        return Fraction(self.mat[i][j], self.nu)

    def rational(self):
        return [[Fraction(x, self.nu) for x in row] for row in self.mat]

    def __repr__(self):
        return f"SymmetricMatrix({self.mat}, nu={self.nu})"


# -- real Gram construction ------------------------------------------------


def _dyadic_lambda(mag):
    """A dyadic rational in the open window (mag+1, mag+2)."""
    return math.floor((mag + 1.5) * 256) / 256.0


def theta_columns(ring, var, p, distinguished=False):
    """Real coefficient vectors theta (over B) with sum theta^2 = p mod I.

    With `distinguished`, the last column is nonvanishing at every point of
    the variety (needed as the seed of a Hensel lift); this uses the mixing
    construction with a small epsilon instead of the plain idempotents.
    """
    pf = p.to_float()
    u = var.idempotents
    if u is None:
        raise NonPositiveAtRealRoot("variety is not radical; no idempotents")
    reals = [(i, [z.real for z in pt.coordinates])
             for i, pt in enumerate(var.points) if pt.kind == "real"]
    pairs = [(i, pt.partner) for i, pt in enumerate(var.points)
             if pt.kind == "complex" and pt.partner is not None and i < pt.partner]
    vals_real = {i: evaluate(pf, coords) for i, coords in reals}
    bad = [v for v in vals_real.values() if v <= 0]
    if bad:
        exc = NonPositiveAtRealRoot(f"p = {min(vals_real.values()):.3e} at a real root")
        exc.value = min(vals_real.values())
        raise exc

    cols = []
    if not distinguished:
        for i, _ in reals:
            cols.append(math.sqrt(vals_real[i]) * u[:, i].real)
        for i, _ in pairs:
            val = complex(evaluate(pf, var.points[i].coordinates))
            cols.extend(_pair_columns(u[:, i], val, 0.0))
        return cols

    if reals:
        # mix the first real root's idempotent across the whole variety
        i0 = reals[0][0]
        f0 = vals_real[i0]
        eps = 0.5
        others = [i for i, _ in reals[1:]]
        while others and any(vals_real[i] - eps * eps * f0 <= 0 for i in others):
            eps *= 0.5
        v0 = u[:, i0].real + eps * sum((u[:, i].real for i in others), np.zeros(ring.D))
        for i, j in pairs:
            v0 = v0 + (u[:, i] + u[:, j]).real
        cols = []
        for i in others:
            cols.append(math.sqrt(vals_real[i] - eps * eps * f0) * u[:, i].real)
        for i, _ in pairs:
            val = complex(evaluate(pf, var.points[i].coordinates)) - f0
            cols.extend(_pair_columns(u[:, i], val, 0.0))
        cols.append(math.sqrt(f0) * v0)
        return cols

    # V_R empty: mix one conjugate pair (Lemma-2.3-style construction)
    if not pairs:
        return []
    (i0, j0) = pairs[0]
    f_z0 = complex(evaluate(pf, var.points[i0].coordinates))
    lam0 = 2.0 * abs(f_z0) + 2.0
    eps = 0.5
    while True:
        a_ib = (f_z0 - eps * eps * f_z0.conjugate()) / (1 - eps ** 4) - eps * lam0
        if (1 + eps * eps) * lam0 > 2 * abs(a_ib):
            break
        eps *= 0.5
    v0 = u[:, i0] + eps * u[:, j0]
    rho = {}
    for i, _ in pairs[1:]:
        f_z = complex(evaluate(pf, var.points[i].coordinates))
        rho[i] = f_z - (2 * f_z0.real / (1 + eps * eps) + (1 - eps) ** 2 * lam0)
        v0 = v0 + u[:, i] + u[:, var.points[i].partner]
    lam_eff = (1 + eps * eps) * lam0 / 2.0
    cols = []
    for i, _ in pairs[1:]:
        cols.extend(_pair_columns(u[:, i], rho[i], 0.0))
    # the first column of the pair is nonvanishing on the variety; put it last
    cols.extend(reversed(_pair_columns(v0, a_ib, 0.0, lam_override=lam_eff)))
    return cols


def _pair_columns(u_col, a_ib, shift, lam_override=None):
    """Two real columns for a conjugate pair via the identity
    (a+ib)(u+iv)^2 + (a-ib)(u-iv)^2 + 2 lam (u^2+v^2)
      = 2(lam+a)(u - b/(lam+a) v)^2 + 2 (lam^2-|a+ib|^2)/(lam+a) v^2."""
    a = a_ib.real - shift
    b = a_ib.imag
    lam = _dyadic_lambda(abs(complex(a, b))) if lam_override is None else lam_override
    ur = np.asarray(u_col).real
    ui = np.asarray(u_col).imag
    w1 = 2.0 * (lam + a)
    w2 = 2.0 * (lam * lam - (a * a + b * b)) / (lam + a)
    c1 = math.sqrt(w1) * (ur - (b / (lam + a)) * ui)
    c2 = math.sqrt(w2) * ui
    return [c1, c2]


def build_gram_real(ring, var, p, distinguished=False):
    """Q~ = Theta Theta^t with B Q~ B^t = p mod I (numerically), PD.

    Returns (Q~, lambda_min estimate)."""
    cols = theta_columns(ring, var, p, distinguished)
    theta = np.column_stack(cols) if cols else np.zeros((ring.D, 0))
    q = theta @ theta.T
    lam_min = float(np.min(np.linalg.eigvalsh(q))) if ring.D else 0.0
    return q, lam_min


# -- affine Gram variety ---------------------------------------------------


class GramVariety:
    """Integer constraint system A y = b over the upper-triangle unknowns of
    {Y : sum_ij Y_ij c_i c_j = p mod I}, rank-reduced; off-diagonal unknowns
    carry Frobenius weight 2."""

    def __init__(self, ring, p, span_polys=None):
        self.ring = ring
        D = ring.D if span_polys is None else len(span_polys)
        self.D = D
        self.pairs = [(i, j) for i in range(D) for j in range(i, D)]
        self.weights = [Fraction(1) if i == j else Fraction(2) for i, j in self.pairs]
        if span_polys is None:
            span_polys = [Polynomial({m: Fraction(1)}, ring.nvars) for m in ring.basis]
        cols = []
        for i, j in self.pairs:
            prod = ring.nf_vector(span_polys[i] * span_polys[j])
            mult = Fraction(1) if i == j else Fraction(2)
            cols.append([mult * x for x in prod])
        rows = exactla.transpose(cols)
        rhs = ring.nf_vector(ring.normal_form(p))
        # rank-reduce, keeping consistency information
        aug = [row + [r] for row, r in zip(rows, rhs)]
        red, pivots = exactla.rref(aug, ncols=len(self.pairs))
        a, b = [], []
        for k, row in enumerate(red):
            if any(row[:-1]):
                a.append(row[:-1])
                b.append(row[-1])
            elif row[-1] != 0:
                raise InfeasibleVariety("constraint system is inconsistent")
        self.A = a
        self.b = b


def project_to_gram(variety, q):
    """Exact weighted-Frobenius projection of a symmetric matrix onto the
    affine Gram set; returns an exact SymmetricMatrix in the set."""
    a, b, w = variety.A, variety.b, variety.weights
    qvec = [q.entry(i, j) for i, j in variety.pairs]
    if not a:
        return SymmetricMatrix(q.mat, q.nu)
    # y = q + W^-1 A^t mu  with  (A W^-1 A^t) mu = b - A q
    rhs = [bi - sum(ai * qi for ai, qi in zip(row, qvec)) for row, bi in zip(a, b)]
    awat = [[sum(r1[k] * r2[k] / w[k] for k in range(len(w)))
             for r2 in a] for r1 in a]
    mu = exactla.solve(awat, rhs)
    if mu is None:
        raise InfeasibleVariety("projection system singular")
    corr = [sum(a[m][k] * mu[m] for m in range(len(a))) / w[k] for k in range(len(w))]
    yvec = [qi + ck for qi, ck in zip(qvec, corr)]
    out = [[Fraction(0)] * variety.D for _ in range(variety.D)]
    for (i, j), v in zip(variety.pairs, yvec):
        out[i][j] = v
        out[j][i] = v
    return SymmetricMatrix.from_rational(out)


# -- fraction-free LDL^t ---------------------------------------------------


class LDLFactorization:
    """Q = L D L^t with integer L (columns are bordered minors) and
    D = diag(1/pivot_k); permutation applied symmetrically when needed."""

    def __init__(self, L, pivots, perm, nu):
        self.L = L
        self.pivots = pivots  # pivot_k = nu * Delta_k * Delta_{k-1}
        self.perm = perm
        self.nu = nu

    def square_vectors(self):
        """(weight, integer coefficient vector) pairs, in original indexing."""
        D = len(self.L)
        out = []
        for k in range(D):
            vec = [0] * D
            for i in range(k, D):
                vec[self.perm[i]] = self.L[i][k]
            out.append((Fraction(1, self.pivots[k]), vec))
        return out

    def reconstruct(self):
        D = len(self.L)
        acc = [[Fraction(0)] * D for _ in range(D)]
        for w, vec in self.square_vectors():
            for i in range(D):
                if vec[i]:
                    for j in range(D):
                        if vec[j]:
                            acc[i][j] += w * vec[i] * vec[j]
        return acc


def ldlt(q):
    """Fraction-free (Bareiss) LDL^t of Q = M/nu, M integer symmetric.

    Raises NotPD(k) at the first negative principal minor, ZeroPivot(k)
    when a zero pivot survives every symmetric permutation of the trailing
    block."""
    D = q.D
    m = [[int(x) for x in row] for row in q.mat]
    perm = list(range(D))
    cols = [[0] * D for _ in range(D)]
    minors = [1]  # Delta_0
    prev = 1
    for k in range(D):
        if m[k][k] == 0:
            swap = next((l for l in range(k + 1, D) if m[l][l] != 0), None)
            if swap is None:
                raise ZeroPivot(k + 1)
            for row in m:
                row[k], row[swap] = row[swap], row[k]
            m[k], m[swap] = m[swap], m[k]
            perm[k], perm[swap] = perm[swap], perm[k]
        for i in range(k, D):
            cols[i][k] = m[i][k]
        delta_k = m[k][k]
        if delta_k < 0:
            raise NotPD(k + 1)
        minors.append(delta_k)
        for i in range(k + 1, D):
            for j in range(k + 1, D):
                m[i][j] = (m[i][j] * delta_k - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = delta_k
    pivots = [q.nu * minors[k + 1] * minors[k] for k in range(D)]
    return LDLFactorization(cols, pivots, perm, q.nu)


def round_matrix(mat, frac_bits):
    """Entrywise binary rounding of a float matrix, symmetrized first."""
    sym = (np.asarray(mat) + np.asarray(mat).T) / 2.0
    rows = [[round_binary(float(sym[i, j]), frac_bits) for j in range(sym.shape[1])]
            for i in range(sym.shape[0])]
    return SymmetricMatrix.from_rational(rows)


def round_and_certify(ring, var, p, start_bits=32, max_bits=None):
    """Round the real Gram matrix, project exactly, factor; double the
    precision on failure.  Returns (Q0 exact PD in the Gram variety, its
    LDL^t factorization)."""
    if max_bits is None:
        max_bits = precision_ceiling()
    try:
        q_tilde, _ = build_gram_real(ring, var, p)
    except NonPositiveAtRealRoot as exc:
        if getattr(exc, "value", -1.0) > -1e-6:
            raise PrecisionExceeded(
                "p is numerically zero at a real root; no strict certificate") from exc
        raise
    variety = GramVariety(ring, p)
    n = start_bits
    while n <= max_bits:
        q_exact = round_matrix(q_tilde, n)
        q0 = project_to_gram(variety, q_exact)
        try:
            fact = ldlt(q0)
        except (NotPD, ZeroPivot):
            n *= 2
            continue
        return q0, fact
    raise PrecisionExceeded(f"no positive definite Gram matrix up to {max_bits} bits")
