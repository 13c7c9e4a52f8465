import math

from hypothesis import given, settings, strategies as st

from monge4.forms import (c_from_h, dot4, first_form, frame_residual,
                          normal_frame, rotate_normal_frame, second_form)
from monge4.patch import eval_patch, make_aminov, make_explicit, make_gradient


def gap(a, b):
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))


def forms_at(p, u, v):
    j = eval_patch(p, u, v)
    ff = first_form(j)
    nf = normal_frame(j, ff)
    return j, ff, nf, second_form(j, ff, nf)


def test_plane_forms():
    j, ff, nf, sf = forms_at(make_explicit("0", "0"), 1.3, -0.2)
    assert (ff.E, ff.F, ff.G, ff.W2) == (1.0, 0.0, 1.0, 1.0)
    assert (ff.A, ff.B, ff.C) == (1.0, 0.0, 1.0)
    assert nf.N1 == (0.0, 0.0, 1.0, 0.0)
    assert nf.N2 == (0.0, 0.0, 0.0, 1.0)
    assert sf.c1 == sf.c2 == sf.h1 == sf.h2 == (0.0, 0.0, 0.0)


def test_aminov_linear_profile_forms():
    j, ff, nf, sf = forms_at(make_aminov("u", (0.5, 2.0)), 1.0, math.pi / 4)
    for got, want in zip((ff.E, ff.F, ff.G, ff.A, ff.B, ff.C, ff.W2),
                         (2.0, 0.0, 2.0, 2.0, 0.0, 2.0, 4.0)):
        assert gap(got, want) < 1e-15
    for got, want in zip(sf.c1 + sf.c2, (0.0, -0.5, -0.5, 0.0, 0.5, -0.5)):
        assert gap(got, want) < 1e-15
    for got, want in zip(sf.h1 + sf.h2, (0.0, -0.25, -0.25, 0.0, 0.25, -0.25)):
        assert gap(got, want) < 1e-15


def test_gradient_example_forms_at_origin():
    _, ff, _, _ = forms_at(make_gradient("exp(u)*cos(v)", "-exp(u)*sin(v)"), 0.0, 0.0)
    assert (ff.E, ff.F, ff.G, ff.A, ff.B, ff.C) == (2.0, 0.0, 2.0, 2.0, 0.0, 2.0)


def test_flat_example_second_form():
    _, _, nf, sf = forms_at(make_explicit("u^2+v^2", "u^2-v^2"), 0.0, 0.0)
    assert nf.N1 == (0.0, 0.0, 1.0, 0.0)
    assert nf.N2 == (0.0, 0.0, 0.0, 1.0)
    assert sf.c1 == (2.0, 0.0, 2.0)
    assert sf.c2 == (2.0, 0.0, -2.0)

    _, ff, _, sf = forms_at(make_explicit("u^2+v^2", "u^2-v^2"), 1.0, 1.0)
    assert (ff.E, ff.F, ff.G, ff.W2) == (9.0, 0.0, 9.0, 81.0)
    for got, want in zip(sf.c1 + sf.c2,
                         (2 / 3, 0.0, 2 / 3, 2 / 3, 0.0, -2 / 3)):
        assert gap(got, want) < 1e-15


PATCHES = [
    make_explicit("u^3+sin(v)+u*v", "exp(u)*v+v^2"),
    make_aminov("exp(u)", (-1.0, 1.0)),
    make_gradient("exp(u)*cos(v)", "-exp(u)*sin(v)"),
    make_explicit("u^2+v^2", "u^2-v^2"),
]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PATCHES), st.floats(-0.95, 0.95), st.floats(-0.95, 0.95))
def test_frame_and_metric_identities(p, u, v):
    j = eval_patch(p, u, v)
    ff = first_form(j)
    nf = normal_frame(j, ff)
    assert ff.W2 >= 1.0
    assert ff.E >= 1.0 and ff.G >= 1.0 and ff.A >= 1.0 and ff.C >= 1.0
    assert abs(ff.E * ff.G - ff.F**2 - (ff.A * ff.C - ff.B**2)) < 1e-10 * ff.W2
    assert frame_residual(j, nf) < 1e-12
    sf = second_form(j, ff, nf)
    for c, h in ((sf.c1, sf.h1), (sf.c2, sf.h2)):
        back = c_from_h(h, ff)
        for a, b in zip(c, back):
            assert gap(a, b) < 1e-10


def test_w2_is_one_exactly_when_gradients_vanish():
    _, ff, _, _ = forms_at(make_explicit("u^2+v^2", "u^2-v^2"), 0.0, 0.0)
    assert ff.W2 == 1.0
    _, ff, _, _ = forms_at(make_explicit("u^2+v^2", "u^2-v^2"), 0.1, 0.0)
    assert ff.W2 > 1.0


@settings(max_examples=60, deadline=None)
@given(st.floats(-0.9, 0.9), st.floats(0.0, 7.0))
def test_aminov_first_form_structure(u, v):
    p = make_aminov("exp(u)", (-1.0, 1.0))
    j = eval_patch(p, u, v)
    ff = first_form(j)
    r = rp = math.exp(u)
    assert abs(ff.F) < 1e-12
    assert gap(ff.E, 1 + rp * rp) < 1e-14
    assert gap(ff.G, 1 + r * r) < 1e-14
    assert abs(ff.B - (rp * rp - r * r) * math.sin(v) * math.cos(v)) < 1e-12


def test_radial_profile_tangent_frame_coefficients():
    p = make_aminov("sin(u)+2", (0.2, 3.0))
    for u, v in [(0.9, 2.0), (1.4, 0.7)]:
        j, ff, nf, sf = forms_at(p, u, v)
        r = math.sin(u) + 2
        rp = math.cos(u)
        rpp = -math.sin(u)
        phi = math.sqrt(ff.A)
        psi = math.sqrt(ff.E)
        omega = math.sqrt(ff.G)
        want_h1 = (rpp * math.cos(v) / (phi * psi**2),
                   -rp * math.sin(v) / (phi * psi * omega),
                   -r * math.cos(v) / (phi * omega**2))
        want_h2 = (omega * rpp * math.sin(v) / (phi * psi**3),
                   rp * math.cos(v) / (phi * omega**2),
                   -r * math.sin(v) / (phi * psi * omega))
        for got, want in zip(sf.h1 + sf.h2, want_h1 + want_h2):
            assert gap(got, want) < 1e-12


def test_rotation_by_zero_and_quarter_turn():
    j, ff, nf, sf = forms_at(PATCHES[0], 0.4, 0.7)
    nf0, sf0 = rotate_normal_frame(nf, sf, 0.0)
    assert nf0 == nf and sf0 == sf
    nf9, sf9 = rotate_normal_frame(nf, sf, math.pi / 2)
    for got, want in zip(nf9.N1, nf.N2):
        assert gap(got, want) < 1e-15
    for got, want in zip(nf9.N2, tuple(-x for x in nf.N1)):
        assert gap(got, want) < 1e-15
    for got, want in zip(sf9.c1, sf.c2):
        assert gap(got, want) < 1e-15


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PATCHES), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9),
       st.floats(-3.2, 3.2))
def test_rotated_frame_matches_reprojection(p, u, v, theta):
    j = eval_patch(p, u, v)
    ff = first_form(j)
    nf = normal_frame(j, ff)
    sf = second_form(j, ff, nf)
    nf2, sf2 = rotate_normal_frame(nf, sf, theta)
    assert abs(dot4(nf2.N1, nf2.N1) - 1) < 1e-12
    assert abs(dot4(nf2.N1, nf2.N2)) < 1e-12
    sf_re = second_form(j, ff, nf2)
    for got, want in zip(sf2.c1 + sf2.c2 + sf2.h1 + sf2.h2,
                         sf_re.c1 + sf_re.c2 + sf_re.h1 + sf_re.h2):
        assert gap(got, want) < 1e-12
