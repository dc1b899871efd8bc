import cmath
import math

import numpy as np
import pytest

from beamkit.errors import (
    DegenerateNetworkError,
    IncompatibleNetworkError,
    InvalidParameterError,
)
from beamkit.network import (
    AbcdMatrix,
    SParameterMatrix,
    abcd_to_s,
    blc_even_odd,
    cascade_abcd,
    connect_networks,
    ideal_crossover_smatrix,
    ideal_hybrid_smatrix,
    ideal_phase_shifter,
    line_abcd,
    permute_ports,
    s_to_abcd,
    self_connect,
    shunt_admittance_abcd,
    terminate_port,
)

F0 = 3.15e9
SQRT2 = math.sqrt(2.0)


class TestAbcdConversion:
    def test_identity_abcd_is_through(self):
        s = abcd_to_s(AbcdMatrix(F0, 1, 0, 0, 1), 50.0)
        assert np.allclose(s.s, [[0, 1], [1, 0]], atol=1e-15)

    def test_even_mode_normalized_matrix(self):
        m = AbcdMatrix(F0, -1 / SQRT2, 1j / SQRT2, 1j / SQRT2, -1 / SQRT2)
        s = abcd_to_s(m, z_ref=1.0)
        assert s.entry(1, 1) == pytest.approx(0.0, abs=1e-15)
        assert s.entry(2, 1) == pytest.approx(-(1 + 1j) / SQRT2, abs=1e-15)

    def test_odd_mode_normalized_matrix(self):
        m = AbcdMatrix(F0, 1 / SQRT2, 1j / SQRT2, 1j / SQRT2, 1 / SQRT2)
        s = abcd_to_s(m, z_ref=1.0)
        assert s.entry(1, 1) == pytest.approx(0.0, abs=1e-15)
        assert s.entry(2, 1) == pytest.approx((1 - 1j) / SQRT2, abs=1e-15)

    def test_roundtrip_well_conditioned(self):
        m = AbcdMatrix(F0, 0.8 + 0.1j, 25 + 3j, 0.002j, 1.2 - 0.05j)
        back = s_to_abcd(abcd_to_s(m, 50.0))
        for attr in "abcd":
            assert getattr(back, attr) == pytest.approx(getattr(m, attr), abs=1e-12)

    def test_reciprocal_line_determinant(self):
        m = line_abcd(37.0, 73.0, F0)
        assert m.determinant == pytest.approx(1.0, abs=1e-9)

    def test_degenerate_denominator_rejected(self):
        # A + B/Z + C*Z + D = 0 for this contrived combination
        with pytest.raises(DegenerateNetworkError):
            abcd_to_s(AbcdMatrix(F0, 1, 0, 0, -1), 50.0)


class TestCascade:
    def test_identity_leaves_unchanged(self):
        m = line_abcd(60.0, 35.0, F0)
        ident = AbcdMatrix(F0, 1, 0, 0, 1)
        out = cascade_abcd(m, ident)
        assert np.allclose(out.as_array(), m.as_array())

    def test_stub_line_stub_reproduces_even_mode_matrix(self):
        # open eighth-wave stubs (y=+j) around a quarter-wave 1/sqrt(2) line
        stub = shunt_admittance_abcd(1j, F0)
        quarter = line_abcd(90.0, 1.0 / SQRT2, F0)
        m = cascade_abcd(cascade_abcd(stub, quarter), stub)
        expect = np.array([[-1, 1j], [1j, -1]]) / SQRT2
        assert np.allclose(m.as_array(), expect, atol=1e-15)

    def test_associativity(self):
        m1 = line_abcd(30.0, 50.0, F0)
        m2 = shunt_admittance_abcd(0.01j, F0)
        m3 = line_abcd(75.0, 35.0, F0)
        left = cascade_abcd(cascade_abcd(m1, m2), m3)
        right = cascade_abcd(m1, cascade_abcd(m2, m3))
        assert np.allclose(left.as_array(), right.as_array(), atol=1e-12)

    def test_frequency_mismatch_rejected(self):
        with pytest.raises(IncompatibleNetworkError):
            cascade_abcd(line_abcd(10, 50, 1e9), line_abcd(10, 50, 2e9))


class TestEvenOdd:
    def test_matched_at_all_ports(self):
        r = blc_even_odd()
        assert abs(r.gamma_even) < 1e-15
        assert abs(r.gamma_odd) < 1e-15
        assert abs(r.b1) < 1e-15
        assert abs(r.b4) < 1e-15

    def test_half_power_split(self):
        r = blc_even_odd()
        assert abs(r.b2) == pytest.approx(1.0 / SQRT2, abs=1e-12)
        assert abs(r.b3) == pytest.approx(1.0 / SQRT2, abs=1e-12)

    def test_transmission_coefficients(self):
        r = blc_even_odd()
        assert r.t_even == pytest.approx(-(1 + 1j) / SQRT2, abs=1e-12)
        assert r.t_odd == pytest.approx((1 - 1j) / SQRT2, abs=1e-12)

    def test_quadrature_between_outputs(self):
        r = blc_even_odd()
        diff = math.degrees(cmath.phase(r.b2) - cmath.phase(r.b3)) % 360.0
        assert diff == pytest.approx(90.0, abs=1e-12)

    def test_combination_identities_exact(self):
        r = blc_even_odd()
        assert r.b1 == 0.5 * r.gamma_even + 0.5 * r.gamma_odd
        assert r.b2 == 0.5 * r.t_even + 0.5 * r.t_odd
        assert r.b3 == 0.5 * r.t_even - 0.5 * r.t_odd
        assert r.b4 == 0.5 * r.gamma_even - 0.5 * r.gamma_odd

    def test_power_conservation(self):
        r = blc_even_odd()
        total = abs(r.b1) ** 2 + abs(r.b2) ** 2 + abs(r.b3) ** 2 + abs(r.b4) ** 2
        assert total == pytest.approx(1.0, abs=1e-12)


class TestIdealComponents:
    def test_hybrid_matrix_entries(self):
        h = ideal_hybrid_smatrix(F0)
        assert h.entry(2, 1) == pytest.approx(-1j / SQRT2)
        assert h.entry(3, 1) == pytest.approx(-1 / SQRT2)
        assert h.entry(4, 1) == 0.0
        assert h.entry(1, 1) == 0.0

    def test_hybrid_unitary_symmetric_matched(self):
        h = ideal_hybrid_smatrix(F0)
        assert h.is_unitary(1e-12)
        assert h.is_reciprocal(1e-12)
        assert np.allclose(np.diag(h.s), 0.0)

    def test_hybrid_power_split(self):
        h = ideal_hybrid_smatrix(F0)
        assert abs(h.entry(2, 1)) ** 2 + abs(h.entry(3, 1)) ** 2 == pytest.approx(1.0)

    def test_crossover_full_diagonal_transmission(self):
        x = ideal_crossover_smatrix(F0)
        assert abs(x.entry(3, 1)) == pytest.approx(1.0, abs=1e-12)
        assert abs(x.entry(2, 1)) < 1e-12
        assert abs(x.entry(4, 1)) < 1e-12
        assert abs(x.entry(1, 1)) < 1e-12

    def test_crossover_phase_is_plus_90(self):
        # cascading the two hybrid paths gives j: (-j/rt2)(-j/rt2) + (-1/rt2)(-1/rt2) summed
        # across the two internal routes evaluates to +90 degrees
        x = ideal_crossover_smatrix(F0)
        assert x.phase_deg(3, 1) == pytest.approx(90.0, abs=1e-9)

    def test_crossover_unitary(self):
        assert ideal_crossover_smatrix(F0).is_unitary(1e-12)

    def test_phase_shifter_basics(self):
        through = ideal_phase_shifter(0.0, F0)
        assert np.allclose(through.s, [[0, 1], [1, 0]])
        s45 = ideal_phase_shifter(45.0, F0)
        assert s45.entry(2, 1) == pytest.approx(cmath.exp(-1j * math.pi / 4))
        assert s45.is_unitary(1e-12)

    def test_cascaded_shifters_compose(self):
        a = ideal_phase_shifter(45.0, F0)
        b = ideal_phase_shifter(45.0, F0)
        joined = connect_networks(a, 2, b, 1)
        expect = ideal_phase_shifter(90.0, F0)
        assert np.allclose(joined.s, expect.s, atol=1e-12)


class TestConnect:
    def test_through_line_splice_recovers_hybrid(self):
        h = ideal_hybrid_smatrix(F0)
        line = ideal_phase_shifter(0.0, F0)
        out = connect_networks(h, 2, line, 1)
        # remaining ports: h1, h3, h4 then line port 2; port 2 moved to slot 4
        back = permute_ports(out, (1, 4, 2, 3))
        assert np.allclose(back.s, h.s, atol=1e-12)

    def test_two_hybrids_joined_reproduce_crossover(self):
        h1 = ideal_hybrid_smatrix(F0)
        h2 = ideal_hybrid_smatrix(F0)
        joined = connect_networks(h1, 2, h2, 1)
        joined = self_connect(joined, 2, 6)   # h1 port 3 to h2 port 4
        rebuilt = permute_ports(joined, (1, 3, 4, 2))
        assert np.allclose(rebuilt.s, ideal_crossover_smatrix(F0).s, atol=1e-12)

    def test_lossless_connection_stays_unitary(self):
        h1 = ideal_hybrid_smatrix(F0)
        shifter = ideal_phase_shifter(30.0, F0)
        out = connect_networks(h1, 3, shifter, 1)
        assert out.is_unitary(1e-12)

    def test_mismatched_frequency_rejected(self):
        with pytest.raises(IncompatibleNetworkError):
            connect_networks(ideal_hybrid_smatrix(1e9), 1, ideal_hybrid_smatrix(2e9), 1)

    def test_mismatched_reference_rejected(self):
        a = ideal_hybrid_smatrix(F0, z_ref=50.0)
        b = ideal_hybrid_smatrix(F0, z_ref=75.0)
        with pytest.raises(IncompatibleNetworkError):
            connect_networks(a, 1, b, 1)

    def test_self_connection_needs_distinct_ports(self):
        h = ideal_hybrid_smatrix(F0)
        with pytest.raises(InvalidParameterError):
            self_connect(h, 2, 2)

    def test_connect_invariant_under_relabeling(self):
        # relabel one network's ports before connecting, then map the
        # result back: identical matrix
        h = ideal_hybrid_smatrix(F0)
        shifter = ideal_phase_shifter(25.0, F0)
        direct = connect_networks(h, 3, shifter, 1)
        relabeled = permute_ports(h, (3, 1, 2, 4))     # old port 3 becomes port 1
        alt = connect_networks(relabeled, 1, shifter, 1)
        # direct remaining: h1, h2, h4, s2 ; alt remaining: h1(from slot2), h2, h4, s2
        assert np.allclose(alt.s, direct.s, atol=1e-12)


class TestTerminate:
    def test_matched_termination_of_isolated_port(self):
        h = ideal_hybrid_smatrix(F0)
        t = terminate_port(h, 4, 0.0)
        assert t.n_ports == 3
        assert t.entry(2, 1) == pytest.approx(h.entry(2, 1))
        assert t.entry(3, 1) == pytest.approx(h.entry(3, 1))

    def test_open_on_through_line_reflects_fully(self):
        line = ideal_phase_shifter(30.0, F0)
        t = terminate_port(line, 2, 1.0)
        assert abs(t.entry(1, 1)) == pytest.approx(1.0, abs=1e-12)

    def test_termination_order_independent(self):
        h = ideal_hybrid_smatrix(F0)
        a = terminate_port(terminate_port(h, 4, 0.2 + 0.1j), 2, -0.3j)
        # terminating port 2 first shifts port 4's index down to 3
        b = terminate_port(terminate_port(h, 2, -0.3j), 3, 0.2 + 0.1j)
        assert np.allclose(a.s, b.s, atol=1e-12)

    def test_active_load_rejected(self):
        with pytest.raises(InvalidParameterError):
            terminate_port(ideal_hybrid_smatrix(F0), 1, 1.5)


class TestSParameterMatrixType:
    def test_must_be_square_and_finite(self):
        with pytest.raises(InvalidParameterError):
            SParameterMatrix(F0, [[0, 1, 0], [1, 0, 0]])
        with pytest.raises(InvalidParameterError):
            SParameterMatrix(F0, [[float("nan"), 0], [0, 0]])

    def test_entries_are_frozen(self):
        h = ideal_hybrid_smatrix(F0)
        with pytest.raises(ValueError):
            h.s[0, 0] = 1.0

    def test_db_and_phase_helpers(self):
        h = ideal_hybrid_smatrix(F0)
        assert h.magnitude_db(2, 1) == pytest.approx(-3.0103, abs=1e-3)
        assert h.phase_deg(2, 1) == pytest.approx(-90.0)
        assert h.magnitude_db(4, 1) == -math.inf
