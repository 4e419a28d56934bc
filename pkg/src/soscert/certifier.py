"""Orchestration of the certification pipelines.

Four routes produce a Certificate: strict positivity on the real variety
(radical ideals), strict positivity on S via inequality perturbation,
nonnegativity through the (a, b, gamma) witness, and non-radical ideals
through a Hensel square-root lift over the radical.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import gram, quotient, variety
from .errors import (NotPD, NotStrictlyPositiveOnS, PrecisionExceeded,
                     ZeroPivot)
from .polyring import Polynomial, evaluate, round_binary


class Certificate:
    """Exact data of the identity
    f = sum_k w_{0,k} q_{0,k}^2 + sum_i (sum_k w_{i,k} q_{i,k}^2) g_i + sum_j p_j h_j.

    `blocks[i]` is the list of (weight, square) pairs of block i (block 0 is
    the free SoS part); `cofactors[j]` multiplies h_j.  In nonnegative mode
    `witnesses[k]` is r_k with q_{0,k} = f * r_k modulo I.
    """

    def __init__(self, mode, blocks, cofactors, witnesses=None, gamma=None):
        self.mode = mode
        self.blocks = blocks
        self.cofactors = cofactors
        self.witnesses = witnesses
        self.gamma = gamma


class ProblemInstance:
    def __init__(self, var_names, f, g=None, h=None, radical=None, options=None):
        self.var_names = list(var_names)
        self.f = f
        self.g = list(g or [])
        self.h = list(h or [])
        self.radical = radical
        self.options = dict(options or {})
        if not self.h:
            raise ValueError("at least one equality constraint required")

    @property
    def nvars(self):
        return len(self.var_names)


def build_ring(inst):
    return quotient.monomial_basis(quotient.groebner(inst.h))


def _is_radical(ring):
    return all(ring.ideal.reduce(g).is_zero()
               for g in quotient.radical_generators(ring))


def _real_values(var, p):
    pf = p.to_float()
    return {i: evaluate(pf, [z.real for z in pt.coordinates])
            for i, pt in enumerate(var.points) if pt.kind == "real"}


def perturb(inst, ring, var):
    """phi = sum rho_xi u_xi^2 g_{i_xi} over excluded real points, with
    rational data, such that f - phi > 0 at every real root.

    Returns (per-constraint blocks of (weight, square), f - phi)."""
    member = variety.membership(var, inst.g)
    f_vals = _real_values(var, inst.f)
    tol = max(var.tolerance * 1e6, 1e-9)
    for i in member.s_indices:
        if f_vals[i] < -tol:
            raise NotStrictlyPositiveOnS(f"f = {f_vals[i]:.3e} at a point of S")
    blocks = [[] for _ in inst.g]
    if not member.excluded:
        return blocks, inst.f
    bits = 16
    while bits <= gram.precision_ceiling():
        blocks = [[] for _ in inst.g]
        phi = Polynomial.zero(inst.nvars)
        ok = True
        for idx, gi in member.excluded:
            coords = [z.real for z in var.points[idx].coordinates]
            g_val = evaluate(inst.g[gi].to_float(), coords)
            u_hat = ring.from_vector(
                [round_binary(float(c.real), bits) for c in var.idempotents[:, idx]])
            rho = Fraction(1)
            while f_vals[idx] - float(rho) * g_val <= max(1.0, abs(f_vals[idx])):
                rho *= 2
            blocks[gi].append((rho, u_hat))
            phi = phi + inst.g[gi] * (u_hat * u_hat) * rho
        f_tilde = inst.f - phi
        ft = f_tilde.to_float()
        for i, pt in enumerate(var.points):
            if pt.kind != "real":
                continue
            if evaluate(ft, [z.real for z in pt.coordinates]) <= tol:
                ok = False
                break
        if ok:
            return blocks, f_tilde
        bits *= 2
    raise NotStrictlyPositiveOnS("no rational perturbation keeps f positive at the real roots")


def _squares_from_factorization(ring, fact):
    out = []
    for w, vec in fact.square_vectors():
        poly = ring.from_vector([Fraction(v) for v in vec])
        if not poly.is_zero():
            out.append((w, poly))
    return out


def _assemble(inst, ring, blocks0, g_blocks, extra=None):
    """Close the identity with exact cofactors of the residual (which lies
    in the ideal by construction)."""
    total = Polynomial.zero(inst.nvars)
    for w, q in blocks0:
        total = total + q * q * w
    for gi, block in enumerate(g_blocks):
        for w, q in block:
            total = total + inst.g[gi] * (q * q) * w
    residual = inst.f - total
    cof = quotient.cofactor_reduce(ring, residual)
    if not cof.remainder.is_zero():
        raise AssertionError("residual is not in the ideal; internal identity broken")
    cofactors = [pj * Fraction(1, cof.nu) for pj in cof.p_j]
    return Certificate("strict", [blocks0] + g_blocks, cofactors, gamma=extra)


def certify_strict(inst, ring=None):
    """Strict-positivity certificate of f on S."""
    if ring is None:
        ring = build_ring(inst)
    if ring.D == 0:
        raise NotStrictlyPositiveOnS("trivial ideal: empty variety")
    if not _is_radical(ring):
        return certify_strict_nonradical(inst, ring=ring)
    seed = inst.options.get("seed", 0)
    var = variety.solve_variety(ring, seed=seed)
    g_blocks, f_tilde = perturb(inst, ring, var)
    start = inst.options.get("precision_start", 32)
    _, fact = gram.round_and_certify(ring, var, f_tilde, start_bits=start)
    blocks0 = _squares_from_factorization(ring, fact)
    return _assemble(inst, ring, blocks0, g_blocks)


def certify_nonneg(inst, ring=None):
    """Nonnegativity certificate via the coprimality witness: certify the
    strictly positive a, then use f = (1/gamma) a f^2 modulo I."""
    if ring is None:
        ring = build_ring(inst)
    a, b, gamma_val = quotient.coprimality_witness(ring, inst.f)
    inner = ProblemInstance(inst.var_names, a, inst.g, inst.h,
                            options=inst.options)
    cert_a = certify_strict(inner, ring=ring)
    f = inst.f
    blocks = []
    witnesses = []
    for i, block in enumerate(cert_a.blocks):
        new_block = []
        for w, qbar in block:
            q = ring.normal_form(qbar * f)
            if q.is_zero():
                continue
            new_block.append((w / gamma_val, q))
            if i == 0:
                witnesses.append(ring.normal_form(qbar))
        blocks.append(new_block)
    out = _assemble(inst, ring, blocks[0], blocks[1:])
    return Certificate("nonneg", out.blocks, out.cofactors,
                       witnesses=witnesses, gamma=gamma_val)


def hensel_sqrt(chain, theta, theta0):
    """Newton square-root lifting: from theta0^2 = theta mod J up the chain
    of quotients by J^2, J^4, ..., doubling correctness at each level."""
    t = theta0
    for ring_k in chain:
        sigma = quotient.inverse_mod(ring_k, t)
        t = (t + theta * sigma) * Fraction(1, 2)
        t = ring_k.normal_form(t)
        assert ring_k.normal_form(t * t - theta).is_zero()
    return t


def certify_strict_nonradical(inst, radical_generators=None, ring=None):
    """Strict certificate when the ideal has multiple points: certify over
    the radical with a distinguished nonvanishing square, then Hensel-lift
    that square back to a certificate modulo I."""
    if ring is None:
        ring = build_ring(inst)
    if radical_generators is None:
        radical_generators = quotient.radical_generators(ring)
    rad_ideal = quotient.groebner(radical_generators)
    chain = quotient.ideal_power_chain(rad_ideal, ring.ideal)
    if not chain:
        return certify_strict(inst, ring=ring)
    ring_j = quotient.monomial_basis(rad_ideal)
    seed = inst.options.get("seed", 0)
    var_j = variety.solve_variety(ring_j, seed=seed)

    inner = ProblemInstance(inst.var_names, inst.f, inst.g, inst.h,
                            options=inst.options)
    g_blocks, f_tilde = perturb(inner, ring_j, var_j)

    cols = gram.theta_columns(ring_j, var_j, f_tilde, distinguished=True)
    theta_tilde = np.column_stack(cols)
    d = ring_j.D
    max_bits = gram.precision_ceiling()
    bits = inst.options.get("precision_start", 32)
    roots = [pt.coordinates for pt in var_j.points]
    while bits <= max_bits:
        theta_rows = [[round_binary(float(theta_tilde[i, k]), bits) for k in range(d)]
                      for i in range(d)]
        span = []
        for k in range(d):
            span.append(ring_j.from_vector([theta_rows[i][k] for i in range(d)]))
        # the distinguished column must stay nonvanishing after rounding
        if any(abs(complex(evaluate(span[-1].to_float(), z))) < 1e-9 for z in roots):
            bits *= 2
            continue
        try:
            lp = gram.GramVariety(ring_j, f_tilde, span_polys=span)
            eye = gram.SymmetricMatrix([[1 if i == j else 0 for j in range(d)]
                                        for i in range(d)], 1)
            y0 = gram.project_to_gram(lp, eye)
            fact = gram.ldlt(y0)
        except (NotPD, ZeroPivot):
            bits *= 2
            continue
        if fact.perm != list(range(d)):
            bits *= 2
            continue
        break
    else:
        raise PrecisionExceeded("Hensel seed construction exhausted the precision ceiling")

    # squares theta_k = B Theta L, with the last one nonvanishing on V_C
    squares = []
    for k in range(d):
        coeffs = [sum(theta_rows[i][j] * Fraction(fact.L[j][k]) for j in range(k, d))
                  for i in range(d)]
        squares.append((Fraction(1, fact.pivots[k]), ring_j.from_vector(coeffs)))

    w_d, theta_d = squares[-1]
    theta_target = (f_tilde - sum((q * q * w for w, q in squares[:-1]),
                                  Polynomial.zero(inst.nvars))) * (Fraction(1) / w_d)
    q1 = hensel_sqrt(chain, theta_target, theta_d)
    q1 = ring.normal_form(q1)
    blocks0 = [(w, q) for w, q in squares[:-1] if not q.is_zero()]
    blocks0.append((w_d, q1))
    return _assemble(inst, ring, blocks0, g_blocks)


def certify(inst):
    """Dispatch on mode and engine options."""
    mode = inst.options.get("mode", "strict")
    engine = inst.options.get("engine", "constructive")
    if engine == "sdp":
        from . import sdp_backend

        ring = build_ring(inst)
        order = inst.options.get("order")
        if mode == "nonneg":
            return sdp_backend.algorithm1_nonneg(inst, ring, order)
        return sdp_backend.algorithm1_certify(inst, ring, order)
    if mode == "nonneg":
        return certify_nonneg(inst)
    return certify_strict(inst)
