import random
from fractions import Fraction

import pytest

from soscert import certifier, verify_bounds
from soscert.certifier import Certificate
from soscert.polyring import Polynomial, parse_polynomial

from conftest import load_certificate


def poly(s, names=("x", "y")):
    return parse_polynomial(s, list(names))


class TestVerifyCertificate:
    def test_transcribed_certificate(self, four_points):
        cert = load_certificate("four_points_strict.cert")
        report = verify_bounds.verify_certificate(four_points, cert)
        assert report.identity_ok
        assert report.weights_ok
        assert report.degree_bound_ok

    def test_negated_weight_flags_weights_only(self, four_points):
        cert = load_certificate("four_points_strict.cert")
        w, q = cert.blocks[1][0]
        mutant = Certificate(cert.mode,
                             [cert.blocks[0], [(-w, q)] + cert.blocks[1][1:]],
                             cert.cofactors)
        report = verify_bounds.verify_certificate(four_points, mutant)
        assert not report.weights_ok
        assert not report.identity_ok  # the identity also moved
        assert report.first_failure() == "identity"

    def test_perturbed_cofactor_breaks_identity(self, four_points):
        cert = load_certificate("four_points_strict.cert")
        bumped = cert.cofactors[0] + Polynomial.constant(Fraction(1), 2)
        mutant = Certificate(cert.mode, cert.blocks,
                             [bumped, cert.cofactors[1]])
        report = verify_bounds.verify_certificate(four_points, mutant)
        assert not report.identity_ok
        assert report.weights_ok

    def test_mutation_kill(self, four_points):
        rng = random.Random(12345)
        cert = load_certificate("four_points_strict.cert")
        for _ in range(20):
            i = rng.randrange(len(cert.blocks))
            k = rng.randrange(len(cert.blocks[i]))
            w, q = cert.blocks[i][k]
            mon, coeff = rng.choice(sorted(q.terms.items()))
            mutated = q + Polynomial({mon: Fraction(1, rng.randint(1, 7))}, 2)
            blocks = [list(b) for b in cert.blocks]
            blocks[i][k] = (w, mutated)
            report = verify_bounds.verify_certificate(
                four_points, Certificate(cert.mode, blocks, cert.cofactors))
            assert not report.identity_ok

    def test_nonneg_mode_without_witnesses_flagged(self, four_points):
        cert = load_certificate("four_points_strict.cert")
        report = verify_bounds.verify_certificate(
            four_points, Certificate("nonneg", cert.blocks, cert.cofactors))
        assert report.mode_ok is False

    def test_kv_serialization(self, four_points):
        cert = load_certificate("four_points_strict.cert")
        report = verify_bounds.verify_certificate(four_points, cert)
        kv = dict(line.split("=", 1) for line in report.to_kv_lines().splitlines())
        assert kv["identity_ok"] == "True"
        assert "max_numerator_bits" in kv


def binary_cube_instance(n, f, g=None):
    names = [f"x{i+1}" for i in range(n)]
    h = [parse_polynomial(f"{v}^2 - {v}", names) for v in names]
    return certifier.ProblemInstance(names, parse_polynomial(f, names),
                                     [parse_polynomial(s, names) for s in (g or [])],
                                     h)


class TestDegreeBounds:
    def test_four_points_bound_is_five(self, four_points):
        ring = certifier.build_ring(four_points)
        report = verify_bounds.degree_bounds(four_points, ring)
        assert report.cofactor_degree_bound == 5
        assert report.hierarchy_order == 3
        assert report.basis_degree == 2
        assert report.quotient_dimension == 4

    def test_binary_cube_with_linear_g(self):
        inst = binary_cube_instance(3, "x1 + x2 + x3 + 1", ["x1 - x2"])
        ring = certifier.build_ring(inst)
        report = verify_bounds.degree_bounds(inst, ring)
        # deg B = n = 3 and a linear inequality: order n + 1
        assert report.basis_degree == 3
        assert report.hierarchy_order == 4

    def test_binary_cube_without_g(self):
        inst = binary_cube_instance(3, "x1*x2*x3 + 1")
        ring = certifier.build_ring(inst)
        report = verify_bounds.degree_bounds(inst, ring)
        assert report.hierarchy_order == 3

    def test_constant_f(self, four_points):
        inst = certifier.ProblemInstance(four_points.var_names, poly("5"),
                                         four_points.g, four_points.h)
        ring = certifier.build_ring(inst)
        report = verify_bounds.degree_bounds(inst, ring)
        assert report.cofactor_degree_bound == 5  # g-term dominates

    def test_monotone_in_degrees(self, four_points):
        ring = certifier.build_ring(four_points)
        base = verify_bounds.degree_bounds(four_points, ring)
        bigger = certifier.ProblemInstance(
            four_points.var_names, poly("x^4*y^3"), four_points.g, four_points.h)
        report = verify_bounds.degree_bounds(bigger, ring)
        assert report.cofactor_degree_bound >= base.cofactor_degree_bound


class TestHeightFormula:
    def test_deterministic_finite(self):
        r = verify_bounds.height_bound_formula(2, 2, 2, 2, 2, 1.0)
        assert r.gram_height > 0
        assert isinstance(r.gram_height, int)

    def test_d_hat(self):
        r = verify_bounds.height_bound_formula(2, 2, 2, 2, 2, 1.0)
        assert r.d_hat == 9

    def test_doubling_c_doubles_bounds(self):
        r1 = verify_bounds.height_bound_formula(2, 2, 2, 2, 2, 1.0)
        r2 = verify_bounds.height_bound_formula(2, 2, 2, 2, 2, 2.0)
        assert r2.gram_height >= 2 * r1.gram_height - 1

    def test_monotone_grid(self):
        for c in (1.0, 2.0, 4.0):
            for d in (2, 3, 4):
                for tau in (2, 4, 8):
                    here = verify_bounds.height_bound_formula(2, d, 2, tau, 2, c)
                    up_c = verify_bounds.height_bound_formula(2, d, 2, tau, 2, 2 * c)
                    up_d = verify_bounds.height_bound_formula(2, d + 1, 2, tau, 2, c)
                    up_t = verify_bounds.height_bound_formula(2, d, 2, 2 * tau, 2, c)
                    assert up_c.gram_height >= here.gram_height
                    assert up_d.gram_height >= here.gram_height
                    assert up_t.gram_height >= here.gram_height

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            verify_bounds.height_bound_formula(0, 2, 2, 2, 2, 1.0)
