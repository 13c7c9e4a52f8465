"""Built-in verification suite for the `verify` subcommand.

Each check exercises one documented identity or property of the
pipeline on deterministic (seeded) data and reports pass/fail; the CLI
prints one line per check.  These are runtime sanity checks shipped
with the package, independent of the development test suite.
"""

from __future__ import annotations

import io
import math
import random
from dataclasses import dataclass

from .classify import (chen_residual, classify_surface, integrate_profile_ode,
                       max_h_norm, minimal_aminov_profile,
                       minimal_translation_family, minimality_residual,
                       pseudo_umbilical_residual, same_sign_aminov_profile,
                       wintgen_deficit)
from .expr import parse, pretty, profile_eval, tokenize
from .forms import (c_from_h, first_form, frame_residual, normal_frame,
                    rotate_normal_frame, second_form)
from .grid import (GridSpec, evaluate_discrete, export_samples_csv,
                   ingest_samples, sample_grid, sample_values)
from .invariants import (aminov_closed_forms, invariants_at, point_data,
                         relative_gap, translation_closed_forms)
from .patch import (eval_patch, make_aminov, make_explicit, make_gradient,
                    make_translation, profile_at)

SEED = 20260814


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _families():
    return [
        ("explicit", make_explicit("u^3+sin(v)+u*v", "exp(u)*v+v^2")),
        ("translation", make_translation("sin(u)", "u^2", "log(v+2)", "v^3")),
        ("aminov", make_aminov("exp(u)", (-1.0, 1.0))),
        ("gradient", make_gradient("exp(u)*cos(v)", "-exp(u)*sin(v)")),
    ]


def _points(n, rng):
    return [(rng.uniform(-0.95, 0.95), rng.uniform(-0.95, 0.95))
            for _ in range(n)]


def check_jets_match_finite_differences():
    h = 1e-4
    worst = 0.0
    for _, patch in _families():
        for u, v in [(0.4, 0.7), (-0.3, 0.2)]:
            jets = eval_patch(patch, u, v)
            for ch in ("f", "g"):
                exact = getattr(jets, ch)

                def val(uu, vv):
                    return getattr(eval_patch(patch, uu, vv), ch).val

                approx = (
                    (val(u + h, v) - val(u - h, v)) / (2 * h),
                    (val(u, v + h) - val(u, v - h)) / (2 * h),
                    (val(u + h, v) - 2 * val(u, v) + val(u - h, v)) / h**2,
                    (val(u + h, v + h) - val(u + h, v - h)
                     - val(u - h, v + h) + val(u - h, v - h)) / (4 * h**2),
                    (val(u, v + h) - 2 * val(u, v) + val(u, v - h)) / h**2,
                )
                for a, b in zip((exact.du, exact.dv, exact.duu,
                                 exact.duv, exact.dvv), approx):
                    worst = max(worst, relative_gap(a, b))
    assert worst < 1e-6, f"worst jet/FD gap {worst:.3g}"
    return f"worst relative gap {worst:.2e}"


def check_expression_round_trip():
    corpus = ["u^2+v^2", "-u^2", "exp(u)*cos(v) - sin(u*v)/(1+u^2)",
              "u/(v+3)/2", "sqrt(u^2+1) + log(abs(v)+2)", "2^3^2"]
    for text in corpus:
        ast = parse(tokenize(text))
        assert parse(tokenize(pretty(ast))) == ast, text
    return f"{len(corpus)} expressions"


def check_translation_structure():
    patch = make_translation("sin(u)", "u^2", "log(v+2)", "v^3")
    rng = random.Random(SEED)
    for u, v in _points(50, rng):
        jets = eval_patch(patch, u, v)
        assert jets.f.duv == 0.0 and jets.g.duv == 0.0
    return "f_uv = g_uv = 0 at 50 points"


def check_aminov_structure():
    patch = make_aminov("exp(u)", (-1.0, 1.0))
    rng = random.Random(SEED)
    worst = 0.0
    for u, _ in _points(50, rng):
        v = rng.uniform(0.0, 2 * math.pi)
        jets = eval_patch(patch, u, v)
        ff = first_form(jets)
        r = profile_at(patch, u)
        worst = max(worst,
                    abs(jets.f.val ** 2 + jets.g.val ** 2 - r.val ** 2),
                    abs(ff.F),
                    abs(ff.B - (r.d1 ** 2 - r.val ** 2)
                        * math.sin(v) * math.cos(v)))
    assert worst < 1e-12, f"worst structural residual {worst:.3g}"
    return f"worst residual {worst:.2e}"


def check_metric_identities():
    rng = random.Random(SEED)
    for _, patch in _families():
        for u, v in _points(250, rng):
            ff = first_form(eval_patch(patch, u, v))
            assert ff.W2 >= 1.0
            assert abs(ff.E * ff.G - ff.F ** 2
                       - (ff.A * ff.C - ff.B ** 2)) < 1e-10 * ff.W2
    return "EG - F^2 = AC - B^2, W^2 >= 1 at 1000 points"


def check_frame_orthonormality():
    rng = random.Random(SEED)
    worst = 0.0
    for _, patch in _families():
        for u, v in _points(1000, rng):
            jets = eval_patch(patch, u, v)
            nf = normal_frame(jets, first_form(jets))
            worst = max(worst, frame_residual(jets, nf))
    assert worst < 1e-12, f"worst frame residual {worst:.3g}"
    return f"worst residual {worst:.2e} over 4000 points"


def check_tangent_frame_inversion():
    rng = random.Random(SEED)
    for _, patch in _families():
        for u, v in _points(200, rng):
            jets = eval_patch(patch, u, v)
            ff = first_form(jets)
            sf = second_form(jets, ff, normal_frame(jets, ff))
            for c, h in ((sf.c1, sf.h1), (sf.c2, sf.h2)):
                for a, b in zip(c, c_from_h(h, ff)):
                    assert relative_gap(a, b) < 1e-10
    return "c -> h -> c round trip at 800 points"


def check_dual_invariant_paths():
    rng = random.Random(SEED)
    count = 0
    for _, patch in _families():
        for u, v in _points(250, rng):
            invariants_at(patch, u, v)  # raises ConsistencyError on split
            count += 1
    return f"coordinate and frame paths agree at {count} points"


def check_rotation_invariance():
    rng = random.Random(SEED)
    from .invariants import gauss_curvature, mean_curvature, normal_torsion
    for _, patch in _families():
        for u, v in _points(50, rng):
            theta = rng.uniform(-math.pi, math.pi)
            pd = point_data(eval_patch(patch, u, v))
            _, sf2 = rotate_normal_frame(pd.frame, pd.second, theta)
            assert relative_gap(gauss_curvature(sf2, pd.first), pd.inv.K) < 1e-10
            assert relative_gap(normal_torsion(sf2, pd.first), pd.inv.KN) < 1e-10
            hn = mean_curvature(sf2, pd.first)[2]
            assert relative_gap(hn, pd.inv.Hnorm) < 1e-10
    return "K, K_N, |H| stable under 200 random rotations"


def check_gradient_equality():
    pairs = [("exp(u)*cos(v)", "-exp(u)*sin(v)"), ("v", "u"),
             ("2*u+v", "u+2*v"), ("cos(u)*cos(v)", "-sin(u)*sin(v)")]
    rng = random.Random(SEED)
    worst = 0.0
    for p_expr, q_expr in pairs:
        patch = make_gradient(p_expr, q_expr)
        assert patch.family == "gradient", p_expr
        for u, v in _points(50, rng):
            inv = invariants_at(patch, u, v)
            worst = max(worst, abs(inv.K - inv.KN))
    assert worst < 1e-9, f"worst |K - K_N| {worst:.3g}"
    return f"K = K_N on potentials, worst gap {worst:.2e}"


def check_exponential_profiles():
    rng = random.Random(SEED)
    worst_kkn = 0.0
    worst_d6 = 0.0
    worst_wintgen = 0.0
    for lam in (0.5, 1.0, 2.0):
        patch = make_aminov(f"{lam}*exp(u)", (-1.0, 1.0))
        for u, _ in _points(100, rng):
            v = rng.uniform(0.0, 2 * math.pi)
            inv = invariants_at(patch, u, v)
            worst_kkn = max(worst_kkn, abs(inv.K + inv.KN))
            worst_wintgen = max(worst_wintgen, abs(wintgen_deficit(inv)))
            r = profile_at(patch, u)
            worst_d6 = max(worst_d6, abs((r.val - r.d1)
                                         * (r.d1 * (1 + r.d1 ** 2)
                                            - r.d2 * (1 + r.val ** 2))))
    assert worst_kkn < 1e-10, f"K+K_N residual {worst_kkn:.3g}"
    assert worst_d6 < 1e-12, f"profile factor residual {worst_d6:.3g}"
    assert worst_wintgen < 1e-10, f"wintgen deficit {worst_wintgen:.3g}"
    return (f"K+K_N {worst_kkn:.2e}, factor {worst_d6:.2e}, "
            f"deficit {worst_wintgen:.2e}")


def check_aminov_closed_forms():
    rng = random.Random(SEED)
    worst = 0.0
    for text in ("u", "u^2", "exp(u)", "sin(u)+2"):
        patch = make_aminov(text, (0.2, 1.5))
        for _ in range(50):
            u = rng.uniform(0.3, 1.4)
            v = rng.uniform(0.0, 2 * math.pi)
            cf = aminov_closed_forms(profile_at(patch, u), u, v)
            inv = invariants_at(patch, u, v)
            pd = point_data(eval_patch(patch, u, v))
            for a, b in [(cf.K, inv.K), (cf.KN, inv.KN), (cf.H1, inv.H1),
                         (cf.H2, inv.H2), (cf.Hnorm, inv.Hnorm)]:
                worst = max(worst, relative_gap(a, b))
            for a, b in zip(cf.h1 + cf.h2, pd.second.h1 + pd.second.h2):
                worst = max(worst, relative_gap(a, b))
    assert worst < 1e-10, f"worst closed-form gap {worst:.3g}"
    return f"worst gap {worst:.2e} over 200 points"


def check_translation_closed_forms():
    rng = random.Random(SEED)
    patch = make_translation("sin(u)", "u^2", "log(v+2)", "v^3")
    worst = 0.0
    for u, v in _points(100, rng):
        K, KN, H1, H2 = translation_closed_forms(patch, u, v)
        inv = invariants_at(patch, u, v)
        for a, b in [(K, inv.K), (KN, inv.KN), (H1, inv.H1), (H2, inv.H2)]:
            worst = max(worst, relative_gap(a, b))
    assert worst < 1e-10, f"worst closed-form gap {worst:.3g}"
    return f"worst gap {worst:.2e} over 100 points"


def check_chen_six_profiles():
    profiles = ("u", "u^2", "exp(u)", "0.5*exp(u)", "sin(u)+2", "1")
    worst = 0.0
    for text in profiles:
        patch = make_aminov(text, (0.2, 1.5))
        spec = GridSpec(0.25, 1.45, 0.0, 2 * math.pi, 15, 15)
        for _, _, u, v in spec.points():
            pd = point_data(eval_patch(patch, u, v))
            inv = pd.inv
            scale = 1.0 + max(abs(inv.K), abs(inv.KN), inv.Hnorm ** 2)
            worst = max(worst, abs(chen_residual(pd.second)) / scale)
    assert worst < 1e-9, f"worst normalized chen residual {worst:.3g}"
    return f"{len(profiles)} profiles, worst normalized residual {worst:.2e}"


def check_chen_zero_at_minimal_points():
    patch = make_gradient("exp(u)*cos(v)", "-exp(u)*sin(v)")
    rng = random.Random(SEED)
    for u, v in _points(50, rng):
        pd = point_data(eval_patch(patch, u, v))
        assert pd.inv.Hnorm < 1e-10
        assert chen_residual(pd.second) == 0.0
        assert pseudo_umbilical_residual(pd.second) == 0.0
    return "minimal points report zero residuals at 50 points"


def check_minimal_profiles():
    worst = 0.0
    for a in (0.5, 1.0, 2.0, 3.0):
        for sigma in (1, -1):
            prof = minimal_aminov_profile(a, 0.0, sigma)
            for k in range(21):
                r = profile_eval(prof, -1.0 + k / 10)
                worst = max(worst, abs(minimality_residual(r)))
    assert worst < 1e-10, f"worst minimality residual {worst:.3g}"
    return f"8 profiles, worst residual {worst:.2e}"


def check_same_sign_counterexample():
    prof = same_sign_aminov_profile(1.0)
    res = minimality_residual(profile_eval(prof, 0.0))
    assert res > 1.0, f"expected a strongly nonzero residual, got {res!r}"
    return f"same-sign residual at u=0 is {res:.3g} (nonzero as required)"


def check_profile_ode():
    rows = integrate_profile_ode(0.5, 0.5, (0.0, 1.0), 1000)
    err = abs(rows[-1][1] - 0.5 * math.e)
    assert err < 1e-8, f"exp solution error {err:.3g}"
    rows = integrate_profile_ode(1.0, 0.0, (0.0, 1.0), 1000)
    err2 = max(abs(r - math.cosh(u / math.sqrt(2))) for u, r, _, _ in rows)
    assert err2 < 1e-8, f"cosh solution error {err2:.3g}"
    return f"exp err {err:.2e}, cosh err {err2:.2e}"


def check_scherk_translation_minimal():
    patch = minimal_translation_family(1, 0, 0, 0, 0, 0, 1, 1)
    worst = max_h_norm(patch, GridSpec(-1.0, 1.0, -1.0, 1.0, 11, 11))
    assert worst < 1e-10, f"max |H| {worst:.3g}"
    return f"single-channel family, max |H| {worst:.2e}"


def check_classification_verdicts():
    spec = GridSpec(0.5, 2.0, 0.0, math.pi, 11, 11)
    report = classify_surface(make_aminov("u", (0.5, 2.0)), spec)
    assert report.predicates["chen"].verdict == "holds"
    assert report.chen_qualifier == "non-trivial"
    assert report.predicates["minimal"].verdict == "fails"

    spec = GridSpec(-1.0, 1.0, 0.0, 2 * math.pi, 11, 11)
    report = classify_surface(make_aminov("exp(u)", (-1.0, 1.0)), spec)
    for name in ("minimal", "chen", "wintgen_ideal", "k_plus_kn_zero"):
        assert report.predicates[name].verdict == "holds", name

    spec = GridSpec(-2.0, 2.0, -2.0, 2.0, 11, 11)
    report = classify_surface(make_explicit("u^2+v^2", "u^2-v^2"), spec)
    assert report.predicates["flat"].verdict == "holds"
    assert report.predicates["minimal"].verdict == "fails"
    return "linear, exponential and flat examples classified as documented"


def check_fd_convergence():
    patch = make_aminov("u", (0.4, 2.1))

    def errors(spec):
        res = evaluate_discrete(sample_values(patch, spec))
        out = {}
        for r in res.rows:
            if not r.flag:
                exact = invariants_at(patch, r.u, r.v)
                out[(r.u, r.v)] = max(abs(r.K - exact.K), abs(r.KN - exact.KN))
        return out

    coarse = errors(GridSpec(0.5, 2.0, 0.0, math.pi, 21, 21))
    fine = errors(GridSpec(0.5, 2.0, 0.0, math.pi, 41, 41))
    common = set(coarse) & set(fine)
    ratio = max(coarse[k] for k in common) / max(fine[k] for k in common)
    assert 3.5 < ratio < 4.5, f"convergence ratio {ratio:.3g}"
    return f"halving h shrinks the error {ratio:.2f}x"


def check_depth_map_mode():
    patch = make_explicit("u^2+v^2", "0")
    dp = sample_values(patch, GridSpec(-0.05, 0.05, -0.05, 0.05, 11, 11),
                       mode="monge3")
    res = evaluate_discrete(dp)
    worst = max(abs(r.KN) for r in res.rows if not r.flag)
    assert worst < 1e-14, f"K_N leak {worst:.3g}"
    return f"single-channel K_N bounded by {worst:.2e}"


def check_grid_determinism():
    patch = make_explicit("u^3+sin(v)+u*v", "exp(u)*v+v^2")
    spec = GridSpec(-1.0, 1.0, -1.0, 1.0, 9, 9)
    a = sample_grid(patch, spec)
    b = sample_grid(patch, spec, workers=4)
    assert a.rows == b.rows
    return "sequential and 4-worker runs byte-identical"


def check_sample_round_trip():
    patch = make_explicit("u^3+sin(v)+u*v", "exp(u)*v+v^2")
    dp = sample_values(patch, GridSpec(-1.0, 1.0, -1.0, 1.0, 6, 7))
    buf = io.StringIO()
    export_samples_csv(dp, buf)
    lines = buf.getvalue().splitlines()
    records = [tuple(float(c) for c in ln.split(",")) for ln in lines[1:]]
    back = ingest_samples(records)
    assert back.f == dp.f and back.g == dp.g
    return "export/ingest reproduces samples bit-for-bit"


CHECKS = [
    ("jets-match-finite-differences", check_jets_match_finite_differences),
    ("expression-round-trip", check_expression_round_trip),
    ("translation-structure", check_translation_structure),
    ("radial-structure", check_aminov_structure),
    ("metric-identities", check_metric_identities),
    ("frame-orthonormality", check_frame_orthonormality),
    ("tangent-frame-inversion", check_tangent_frame_inversion),
    ("dual-invariant-paths", check_dual_invariant_paths),
    ("rotation-invariance", check_rotation_invariance),
    ("potential-pairs-k-equals-kn", check_gradient_equality),
    ("exponential-profiles", check_exponential_profiles),
    ("radial-closed-forms", check_aminov_closed_forms),
    ("translation-closed-forms", check_translation_closed_forms),
    ("chen-six-profiles", check_chen_six_profiles),
    ("chen-zero-at-minimal-points", check_chen_zero_at_minimal_points),
    ("minimal-profiles", check_minimal_profiles),
    ("same-sign-counterexample", check_same_sign_counterexample),
    ("profile-ode", check_profile_ode),
    ("scherk-translation-minimal", check_scherk_translation_minimal),
    ("classification-verdicts", check_classification_verdicts),
    ("fd-convergence", check_fd_convergence),
    ("depth-map-mode", check_depth_map_mode),
    ("grid-determinism", check_grid_determinism),
    ("sample-round-trip", check_sample_round_trip),
]


def run_all() -> list:
    results = []
    for name, fn in CHECKS:
        try:
            detail = fn() or ""
            results.append(CheckResult(name, True, detail))
        except Exception as err:  # noqa: BLE001 - report, never abort
            results.append(CheckResult(name, False, f"{type(err).__name__}: {err}"))
    return results


__all__ = ["CHECKS", "CheckResult", "run_all"]
