import numpy as np

from twomode.audit import (
    audit_bell_closed_form,
    audit_lowsqueeze_fields,
    audit_resolvent,
    audit_rho_nm,
    resolvent_propagator_as_published,
    rho_from_fock_populations_as_published,
    run_transcription_audit,
)
from twomode.evolve import single_excitation_propagator_numeric


def test_published_resolvent_is_unitary_but_phase_shifted():
    sec = audit_resolvent()
    devs = dict(sec.deviations)
    # unitary and magnitude-correct ...
    assert devs["published unitarity defect"] < 1e-9
    assert devs["published vs numeric, magnitudes only"] < 1e-9
    # ... yet elementwise off by order one (sign/i-placement differences)
    assert devs["published vs numeric, elementwise"] > 0.1
    # the production form has no such deviation
    assert devs["production form vs numeric, elementwise"] < 1e-9


def test_published_resolvent_example():
    u_pub = resolvent_propagator_as_published(0.0, 0.5)
    u_num = single_excitation_propagator_numeric(0.0, 0.5)
    # the cosine-difference elements come out with the opposite sign
    assert abs(u_pub[0, 1] + u_num[0, 1]) < 1e-12
    assert abs(u_pub[0, 1] - u_num[0, 1]) > 1e-3


def test_bell_closed_form_audit():
    sec = audit_bell_closed_form()
    devs = dict(sec.deviations)
    # matches at phi = pi, deviates by order one at phi = 0
    assert devs[f"published vs numeric at phi={np.pi:.4g}"] < 1e-8
    assert devs["published vs numeric at phi=0"] > 0.5
    # the weight-exchanged variant reproduces the numerics everywhere
    assert devs["weight-exchanged variant vs numeric, all phi"] < 1e-8


def test_rho_nm_published_form_disagrees():
    sec = audit_rho_nm()
    devs = dict(sec.deviations)
    # correct at (0,0) but wrong already at (0,1), where it goes negative
    assert devs["populations (n,m)=(0,0)"] < 1e-12
    assert devs["populations (n,m)=(0,1)"] > 0.4
    pub = rho_from_fock_populations_as_published(0, 1)
    assert pub.min() < -0.4


def test_lowsqueeze_fields_audit():
    sec = audit_lowsqueeze_fields()
    devs = dict(sec.deviations)
    xi = 0.05
    assert devs[f"atom-atom approximation vs numerics, xi={xi}"] <= 5 * xi**2
    # the field-field published form misses a first-order branch
    assert devs[f"field-field approximation vs numerics, xi={xi}"] > 5 * xi**2


def test_full_audit_runs_and_renders():
    report = run_transcription_audit()
    text = report.render()
    assert "single-excitation propagator elements" in text
    assert "Bell-state closed-form concurrence" in text
    assert "mapped-Fock marginal populations" in text
    assert "small-squeezing negativity approximations" in text
    assert len(report.sections) == 4
