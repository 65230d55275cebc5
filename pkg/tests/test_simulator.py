import io
import math

import numpy as np
import pytest

from grasschannel.beam import BeamSpec, ContactResult
from grasschannel.geometry import EllipseBody, Vec2
from grasschannel.simulator import (
    ChannelSpec,
    contact_set,
    mirror_contacts,
    net_drag,
    net_force_two_sided,
    sweep,
    write_contacts_csv,
    write_trace_csv,
)

BODY = EllipseBody(r_x=0.09, r_y=0.05, mass=0.087)


def make_channel(b, **kw):
    return ChannelSpec(n=11, l_channel=0.28, b=b, **kw)


class TestChannelSpec:
    def test_wall_line(self):
        ch = make_channel(0.04)
        assert ch.wall_y == pytest.approx(0.02 + 0.027)

    def test_base_positions_default_spacing(self):
        ch = make_channel(0.04)
        pos = ch.base_positions()
        assert pos[0] == 0.0
        assert pos[1] == pytest.approx(0.28 / 11)

    def test_spacing_override(self):
        ch = make_channel(0.04, spacing_override=0.025)
        assert ch.base_positions()[1] == pytest.approx(0.025)

    def test_rejects_bad_layout(self):
        with pytest.raises(ValueError):
            ChannelSpec(n=0)
        with pytest.raises(ValueError):
            ChannelSpec(b=-0.01)


class TestContactSet:
    def test_empty_before_channel(self):
        ch = make_channel(0.04)
        contacts = contact_set(-0.09 - 0.027 - 0.01, ch, BODY)
        assert contacts == ()

    def test_empty_for_wide_channel(self):
        ch = make_channel(0.12)  # tips at 0.06 > r_y
        for x in np.linspace(-0.2, 0.5, 40):
            assert contact_set(float(x), ch, BODY) == ()

    def test_contact_fields_consistent(self):
        ch = make_channel(0.04)
        contacts = contact_set(0.14, ch, BODY)
        assert contacts
        bases = ch.base_positions()
        for c in contacts:
            assert 1 <= c.beam_index <= ch.n
            assert 0.0 <= c.phi <= math.pi
            assert 0.0 <= c.delta_theta <= math.pi / 2
            assert c.x_contact == pytest.approx(
                BODY.r_x * math.cos(c.phi) + 0.14, rel=1e-12
            )
            if not c.saturated:
                reach = c.x_contact - bases[c.beam_index - 1]
                assert -1e-9 <= reach <= ch.beam.L + 1e-12

    def test_drag_producing_front_contacts(self):
        ch = make_channel(0.06)
        contacts = contact_set(0.14, ch, BODY)
        front = [c for c in contacts if c.phi < math.pi / 2]
        assert front
        assert all(c.force.x < 0.0 for c in front)

    def test_matches_single_beam_oracle(self):
        # One beam, compare against a direct composition of the geometry
        # and beam formulas.
        from grasschannel.beam import angular_deflection, beam_force
        from grasschannel.geometry import contact_angle

        ch = ChannelSpec(n=1, l_channel=0.28, b=0.06)
        x_r = 0.05
        contacts = contact_set(x_r, ch, BODY)
        assert len(contacts) == 1
        c = contacts[0]
        body_here = EllipseBody(r_x=0.09, r_y=0.05, x_r=x_r, mass=0.087)
        sol = contact_angle(Vec2(0.0, ch.wall_y), ch.beam.L, body_here)
        assert sol is not None
        assert c.phi == pytest.approx(sol.phi, abs=1e-12)
        x_i = 0.09 * math.cos(sol.phi) + x_r
        dtheta, _ = angular_deflection(x_i, 0.0, ch.beam.L)
        assert c.delta_theta == pytest.approx(dtheta, rel=1e-12)
        f = beam_force(dtheta, sol.phi, ch.beam, body_here)
        assert c.force.x == pytest.approx(f.x, rel=1e-12)
        assert c.force.y == pytest.approx(f.y, rel=1e-12)


class TestNetDrag:
    def test_empty(self):
        assert net_drag([]) == 0.0

    def test_single_contact_definition(self):
        c = ContactResult(1, 1.0, 0.1, 0.2, Vec2(-0.01, -0.02), False)
        assert net_drag([c]) == pytest.approx(0.02, rel=1e-12)

    def test_two_sided_lateral_cancellation(self):
        ch = make_channel(0.04)
        for x in np.linspace(-0.1, 0.4, 101):
            contacts = contact_set(float(x), ch, BODY)
            total = net_force_two_sided(contacts)
            assert abs(total.y) < 1e-12

    def test_mirror_flips_fy_only(self):
        c = ContactResult(1, 1.0, 0.1, 0.2, Vec2(-0.01, -0.02), False)
        (m,) = mirror_contacts([c])
        assert m.force == (-0.01, 0.02)
        assert m.phi == -1.0


class TestSweep:
    def test_free_condition_all_zero(self):
        trace = sweep(make_channel(0.5), BODY)
        assert np.all(trace.drags() == 0.0)

    def test_sample_count_and_time_axis(self):
        ch = make_channel(0.04)
        trace = sweep(ch, BODY, dx=1e-3, v=0.05)
        span = ch.l_channel + 2 * (BODY.r_x + ch.beam.L)
        assert len(trace.samples) == math.floor(span / 1e-3) + 1
        assert trace.samples[0].t == 0.0
        dt = trace.samples[1].t - trace.samples[0].t
        assert dt == pytest.approx(1e-3 / 0.05, rel=1e-9)

    def test_zero_drag_at_both_ends(self):
        trace = sweep(make_channel(0.04), BODY)
        assert trace.samples[0].f_drag == 0.0
        assert trace.samples[-1].f_drag == 0.0

    def test_trace_shape_entry_plateau_exit(self):
        ch = make_channel(0.04)
        trace = sweep(ch, BODY)
        xs = trace.positions()
        drags = trace.drags()
        plateau = (xs >= BODY.r_x + ch.beam.L) & (
            xs <= ch.l_channel - BODY.r_x - ch.beam.L
        )
        assert drags[plateau].min() > 0.0
        # Oscillation on the plateau has nonzero amplitude.
        assert drags[plateau].max() - drags[plateau].min() > 0.0
        # Entry ramp: drag rises from zero before the plateau.
        first_plateau = np.nonzero(plateau)[0][0]
        assert drags[: first_plateau + 1].max() == pytest.approx(
            drags[first_plateau], rel=0.5
        )

    def test_plateau_running_mean_stable(self):
        ch = make_channel(0.04)
        trace = sweep(ch, BODY)
        xs = trace.positions()
        drags = trace.drags()
        plateau = (xs >= BODY.r_x + ch.beam.L) & (
            xs <= ch.l_channel - BODY.r_x - ch.beam.L
        )
        values = drags[plateau]
        window = max(len(values) // 4, 2)
        running = np.convolve(values, np.ones(window) / window, mode="valid")
        mean = values.mean()
        assert np.all(np.abs(running - mean) < 0.2 * mean)

    def test_plateau_drag_ordering_with_tightness(self):
        means = []
        for b in (0.08, 0.06, 0.04):
            ch = make_channel(b)
            trace = sweep(ch, BODY)
            xs = trace.positions()
            plateau = (xs >= BODY.r_x + ch.beam.L) & (
                xs <= ch.l_channel - BODY.r_x - ch.beam.L
            )
            means.append(trace.drags()[plateau].mean())
        assert means[0] < means[1] < means[2]

    def test_contact_count_alternation_mid_channel(self):
        # With the default shell, the fully-inside contact count alternates
        # between two adjacent values set by the span/spacing ratio.
        ch = make_channel(0.06)
        trace = sweep(ch, BODY)
        xs = trace.positions()
        plateau = (xs >= BODY.r_x + ch.beam.L) & (
            xs <= ch.l_channel - BODY.r_x - ch.beam.L
        )
        counts = set(trace.contact_counts()[plateau])
        assert counts == {5, 6}

    def test_translation_invariance(self):
        t1 = sweep(make_channel(0.04), BODY)
        t2 = sweep(make_channel(0.04, x_offset=0.123), BODY)
        assert np.abs(t1.drags() - t2.drags()).max() < 1e-12

    def test_reflection_symmetry_of_contact_gate(self):
        # A beam lattice symmetric about the sweep window center yields a
        # contact-count trace that is its own time reversal.
        ch = make_channel(0.04, spacing_override=0.028)
        trace = sweep(ch, BODY)
        counts = trace.contact_counts()
        assert np.array_equal(counts, counts[::-1])

    def test_rejects_bad_steps(self):
        with pytest.raises(ValueError):
            sweep(make_channel(0.04), BODY, dx=0.0)
        with pytest.raises(ValueError):
            sweep(make_channel(0.04), BODY, v=-1.0)


class TestCsvExport:
    def test_trace_csv_round_trip_values(self):
        trace = sweep(make_channel(0.04), BODY, dx=0.01)
        buf = io.StringIO()
        write_trace_csv(trace, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "x_m,t_s,f_drag_n,contact_count"
        fields = lines[1].split(",")
        assert float(fields[0]) == trace.samples[0].x
        assert float(fields[2]) == trace.samples[0].f_drag
        assert len(lines) == len(trace.samples) + 1

    def test_contacts_csv_header_and_rows(self):
        trace = sweep(make_channel(0.04), BODY, dx=0.01)
        buf = io.StringIO()
        write_contacts_csv(trace, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "x_m,beam_index,phi_rad,delta_theta_rad,fx_n,fy_n,saturated"
        n_contacts = sum(s.contact_count for s in trace.samples)
        assert len(lines) == n_contacts + 1
