"""Exact certificate verification and degree/height bound calculators.

verify_certificate fully expands the claimed identity over the rationals;
it reports rather than throws, so callers can distinguish which clause of
the certificate failed.  The bound calculators evaluate the degree bound
for the cofactor products, the relaxation order at which the hierarchy is
exact, and a parametrized height-bound formula (diagnostic only, since the
multiplicative constant is a free parameter).
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import quotient
from .polyring import Polynomial, height


class VerificationReport:
    def __init__(self, identity_ok, weights_ok, degree_bound_ok=None,
                 mode_ok=None, max_numerator_bits=0, max_denominator_bits=0,
                 detail=""):
        self.identity_ok = identity_ok
        self.weights_ok = weights_ok
        self.degree_bound_ok = degree_bound_ok
        self.mode_ok = mode_ok
        self.max_numerator_bits = max_numerator_bits
        self.max_denominator_bits = max_denominator_bits
        self.detail = detail

    @property
    def ok(self):
        return (self.identity_ok and self.weights_ok
                and self.degree_bound_ok is not False
                and self.mode_ok is not False)

    def first_failure(self):
        if not self.identity_ok:
            return "identity"
        if not self.weights_ok:
            return "weights"
        if self.degree_bound_ok is False:
            return "degree-bound"
        if self.mode_ok is False:
            return "mode-witness"
        return None

    def to_text(self):
        lines = [
            f"identity: {'ok' if self.identity_ok else 'FAILED'}",
            f"weights nonnegative: {'ok' if self.weights_ok else 'FAILED'}",
        ]
        if self.degree_bound_ok is not None:
            lines.append(f"degree bound: {'ok' if self.degree_bound_ok else 'FAILED'}")
        if self.mode_ok is not None:
            lines.append(f"mode witnesses: {'ok' if self.mode_ok else 'FAILED'}")
        lines.append(f"max numerator bits: {self.max_numerator_bits}")
        lines.append(f"max denominator bits: {self.max_denominator_bits}")
        if self.detail:
            lines.append(self.detail)
        return "\n".join(lines)

    def to_kv_lines(self):
        kv = {
            "identity_ok": self.identity_ok,
            "weights_ok": self.weights_ok,
            "degree_bound_ok": self.degree_bound_ok,
            "mode_ok": self.mode_ok,
            "max_numerator_bits": self.max_numerator_bits,
            "max_denominator_bits": self.max_denominator_bits,
        }
        return "\n".join(f"{k}={v}" for k, v in kv.items())


def verify_certificate(inst, cert, ring=None):
    """Exact verification of the certificate identity over the rationals."""
    total = Polynomial.zero(inst.nvars)
    weights_ok = True
    num_bits = 0
    den_bits = 0

    def track(p):
        nonlocal num_bits, den_bits
        info = height(p)
        num_bits = max(num_bits, info.numerator_height)
        den_bits = max(den_bits, info.denominator_height)

    for i, block in enumerate(cert.blocks):
        mult = Polynomial.constant(Fraction(1), inst.nvars) if i == 0 else inst.g[i - 1]
        for w, q in block:
            if w < 0:
                weights_ok = False
            track(q)
            total = total + mult * (q * q) * w
    for pj, hj in zip(cert.cofactors, inst.h):
        track(pj)
        total = total + pj * hj
    identity_ok = (total - inst.f).is_zero()

    degree_bound_ok = None
    mode_ok = None
    if ring is None:
        ring = quotient.monomial_basis(quotient.groebner(inst.h))
    if ring.ideal.is_graded:
        bound = degree_bounds(inst, ring).cofactor_degree_bound
        degree_bound_ok = all(
            pj.is_zero() or (pj * hj).degree <= bound
            for pj, hj in zip(cert.cofactors, inst.h))
    if cert.mode == "nonneg":
        if cert.witnesses is None:
            mode_ok = False
        else:
            mode_ok = all(
                ring.normal_form(q - inst.f * r).is_zero()
                for (w, q), r in zip(cert.blocks[0], cert.witnesses))
    return VerificationReport(identity_ok, weights_ok, degree_bound_ok, mode_ok,
                              num_bits, den_bits)


class BoundReport:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    def to_text(self):
        return "\n".join(f"{k} = {v}" for k, v in sorted(self.__dict__.items()))


def degree_bounds(inst, ring):
    """Degree bound for the cofactor products p_j h_j and the hierarchy
    order at which finite convergence is guaranteed."""
    deg_b = ring.degree_of_basis()
    deg_f = max(inst.f.degree, 0)
    terms = [deg_f, 2 * deg_b] + [g.degree + 2 * deg_b for g in inst.g]
    bound = max(terms)
    order = math.ceil(bound / 2)
    return BoundReport(cofactor_degree_bound=bound, hierarchy_order=order,
                       basis_degree=deg_b, quotient_dimension=ring.D)


def height_bound_formula(n, d, delta, tau, d_f, c):
    """Parametrized upper-bound formula with user constant c; diagnostic
    only (the true constant is not specified)."""
    if min(n, d, delta, tau, d_f) <= 0 or c <= 0:
        raise ValueError("all parameters must be positive")
    cnd = c * n * math.log2(d * (n + 1))
    gram_height = math.ceil(cnd * d ** (2 * n - 1) * (d ** n * delta + d_f) * (d + tau))
    value_height = math.ceil(c * n * math.log2(n + 1) * d ** (n - 1) * d_f * (d + tau))
    d_hat = 2 * (d + delta) + 1
    return BoundReport(gram_height=gram_height, root_value_height=value_height,
                       d_hat=d_hat, constant=c)
