"""Classification predicates and special minimal families.

Predicates (minimal, Chen, Wintgen ideal, pseudo-umbilical, flat,
K + K_N = 0) are evaluated pointwise as residuals and aggregated over a
grid into a ClassificationReport.  Verdicts compare the residual
normalized by 1 + max(|K|, |K_N|, ||H||^2), so tolerances behave the
same on surfaces of very different curvature scale.

The module also builds the two closed-form minimal families: profiles
r(u) solving r'' (1 + r^2) = r (1 + r'^2) for the radial family, and
the log|cos| translation family.  Minimality of constructions is always
measured on a grid rather than assumed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import jet
from .expr import Profile, compile_profile
from .forms import SecondForm
from .invariants import (ConsistencyError, InvariantSet, point_data,
                         relative_gap)
from .patch import MongePatch, eval_patch, make_translation, profile_at

MINIMAL_TOL = 1e-8
RANK_TOL = 1e-8
DEFAULT_TOL = 1e-8

PREDICATES = ("minimal", "chen", "wintgen_ideal", "pseudo_umbilical",
              "flat", "k_plus_kn_zero")


@dataclass(frozen=True, eq=False)
class ShapeOperatorPair:
    """Shape operators along N1, N2 in the orthonormal tangent frame."""

    A1: np.ndarray
    A2: np.ndarray


def shape_operators(sf: SecondForm) -> ShapeOperatorPair:
    a1 = np.array([[sf.h1[0], sf.h1[1]], [sf.h1[1], sf.h1[2]]])
    a2 = np.array([[sf.h2[0], sf.h2[1]], [sf.h2[1], sf.h2[2]]])
    return ShapeOperatorPair(a1, a2)


def _mean_components(sf: SecondForm):
    return 0.5 * (sf.h1[0] + sf.h1[2]), 0.5 * (sf.h2[0] + sf.h2[2])


def chen_residual(sf: SecondForm, minimal_tol: float = MINIMAL_TOL) -> float:
    """Allied-vector obstruction; zero by convention at minimal points."""
    h1, h2 = sf.h1, sf.h2
    H1, H2 = _mean_components(sf)
    hnorm = math.hypot(H1, H2)
    if hnorm < minimal_tol:
        return 0.0
    expansion = ((h1[0] ** 2 - h2[0] ** 2 + h1[2] ** 2 - h2[2] ** 2
                  + 2.0 * h1[1] ** 2 - 2.0 * h2[1] ** 2) * H1 * H2
                 + (h1[0] * h2[0] + h1[2] * h2[2] + 2.0 * h1[1] * h2[1])
                 * (H2 ** 2 - H1 ** 2))

    # independent route: rotate the normal frame to point along H and
    # read off the off-diagonal trace obstruction
    ops = shape_operators(sf)
    t1 = (H1 * ops.A1 + H2 * ops.A2) / hnorm
    t2 = (H2 * ops.A1 - H1 * ops.A2) / hnorm
    traced = float(np.trace(t1 @ t2)) * hnorm ** 2
    if relative_gap(expansion, traced) > 1e-10:
        raise ConsistencyError(
            f"chen residual paths disagree: {expansion!r} vs {traced!r}")
    return expansion


def wintgen_deficit(inv: InvariantSet) -> float:
    """K + |K_N| - ||H||^2; zero exactly on Wintgen-ideal surfaces."""
    return inv.K + abs(inv.KN) - inv.Hnorm ** 2


def aminov_wintgen_residual(r: jet.Jet1) -> float:
    """Polynomial form of the Wintgen equality for radial profiles."""
    rv, rp, rpp = r.val, r.d1, r.d2
    e = 1.0 + rp * rp
    g = 1.0 + rv * rv
    return (2.0 * rpp * g * e * (2.0 * rp - rv)
            + e * e * (4.0 * rv * rp - 4.0 * rp * rp - rv * rv)
            - rpp * rpp * g * g)


def k_plus_kn_residual(r: jet.Jet1) -> float:
    """Profile factorization of K + K_N for the radial family."""
    rv, rp, rpp = r.val, r.d1, r.d2
    return (rv - rp) * (rp * (1.0 + rp * rp) - rpp * (1.0 + rv * rv))


def pseudo_umbilical_residual(sf: SecondForm, minimal_tol: float = MINIMAL_TOL) -> float:
    """Deviation of the shape operator along H from a multiple of I."""
    H1, H2 = _mean_components(sf)
    if math.hypot(H1, H2) < minimal_tol:
        return 0.0
    ops = shape_operators(sf)
    ah = H1 * ops.A1 + H2 * ops.A2
    off = abs(ah[0, 1])
    diag = abs(ah[0, 0] - ah[1, 1])
    return float(max(off, diag)) / (1.0 + float(np.linalg.norm(ah)))


def first_normal_rank(sf: SecondForm, tol: float = RANK_TOL) -> int:
    """Numerical rank of the span of the second fundamental form."""
    m = np.array([list(sf.h1), list(sf.h2)])
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.count_nonzero(sv > tol * sv[0])) if sv[0] > 0.0 else 0


def minimality_residual(r: jet.Jet1) -> float:
    """Residual of the minimal-profile equation r''(1+r^2) = r(1+r'^2)."""
    return r.d2 * (1.0 + r.val ** 2) - r.val * (1.0 + r.d1 ** 2)


def _scaled_exponent(a: float, b: float, sign: int) -> str:
    s = f"((u + ({b!r})) / ({a!r}))"
    return s if sign > 0 else f"(-{s})"


def minimal_aminov_profile(a: float, b: float = 0.0, sigma: int = 1) -> Profile:
    """Profile c1 e^{sigma s} + c2 e^{-sigma s}, s = (u+b)/a, 4 c1 c2 = a^2 - 1.

    The two exponentials carry opposite signs; that is what makes the
    minimality residual vanish identically (see the same-sign
    counterexample below).
    """
    if a == 0.0:
        raise ValueError("profile parameter a must be nonzero")
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    c1 = a / 2.0
    c2 = (a * a - 1.0) / (2.0 * a)
    text = (f"({c1!r})*exp({_scaled_exponent(a, b, sigma)})"
            f" + ({c2!r})*exp({_scaled_exponent(a, b, -sigma)})")
    return compile_profile(text)


def same_sign_aminov_profile(a: float, b: float = 0.0, sigma: int = 1) -> Profile:
    """The same-sign reading of the profile; kept as a regression witness.

    It does NOT solve the minimality equation: at a=1, b=0 the residual
    is 4 e^{3u}.
    """
    if a == 0.0:
        raise ValueError("profile parameter a must be nonzero")
    c1 = a / 2.0
    c2 = (a * a - 1.0) / (2.0 * a)
    s = _scaled_exponent(a, b, sigma)
    text = f"({c1!r})*exp(3*{s}) + ({c2!r})*exp({s})"
    return compile_profile(text)


def integrate_profile_ode(r0: float, r0p: float, u_range, steps: int):
    """March r'' = r(1+r'^2)/(1+r^2) with the classic fourth-order step.

    Returns rows (u, r, r', residual) where the residual re-evaluates
    the minimality equation using a finite-difference r'' from the
    numerical solution, as an integration diagnostic.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    u0, u1 = u_range
    if not u0 < u1:
        raise ValueError("empty integration range")
    h = (u1 - u0) / steps

    def rhs(state):
        r, rp = state
        return (rp, r * (1.0 + rp * rp) / (1.0 + r * r))

    us = [u0 + i * h for i in range(steps + 1)]
    rs = [r0]
    rps = [r0p]
    state = (r0, r0p)
    for i in range(steps):
        k1 = rhs(state)
        k2 = rhs((state[0] + 0.5 * h * k1[0], state[1] + 0.5 * h * k1[1]))
        k3 = rhs((state[0] + 0.5 * h * k2[0], state[1] + 0.5 * h * k2[1]))
        k4 = rhs((state[0] + h * k3[0], state[1] + h * k3[1]))
        state = (state[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                 state[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]))
        if not (math.isfinite(state[0]) and math.isfinite(state[1])):
            raise jet.DomainError(f"integration blew up near u = {us[i + 1]}")
        rs.append(state[0])
        rps.append(state[1])

    def fd_rpp(i):
        if 0 < i < steps:
            return (rs[i + 1] - 2.0 * rs[i] + rs[i - 1]) / h**2
        if i == 0:
            return (2 * rs[0] - 5 * rs[1] + 4 * rs[2] - rs[3]) / h**2
        return (2 * rs[-1] - 5 * rs[-2] + 4 * rs[-3] - rs[-4]) / h**2

    rows = []
    for i in range(steps + 1):
        res = fd_rpp(i) * (1.0 + rs[i] ** 2) - rs[i] * (1.0 + rps[i] ** 2)
        rows.append((us[i], rs[i], rps[i], res))
    return rows


def minimal_translation_family(c3: float, c4: float, e3: float, e4: float,
                               p3: float, p4: float, a: float, b: float,
                               c: float = 0.0, d: float = 0.0) -> MongePatch:
    """Translation patch built from the log|cos| payload family.

    Domain is the open box where both cosines stay nonzero.  Minimality
    of the construction is measured downstream (max ||H|| on a grid),
    never assumed.
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError("parameters a and b must be positive")
    den = c3 * c3 + c4 * c4
    if den == 0.0:
        raise ValueError("c3 and c4 must not both vanish")
    sa, sb = math.sqrt(a), math.sqrt(b)

    def f_k(ck, ek):
        return (f"(({ck!r})/({den!r}))*(log(abs(cos(({sa!r})*u))) + ({c!r})*u)"
                f" + ({ek!r})*u")

    def g_k(ck, pk):
        return (f"(({ck!r})/({den!r}))*(({d!r})*v - log(abs(cos(({sb!r})*v))))"
                f" + ({pk!r})*v")

    ulim = math.pi / (2.0 * sa)
    vlim = math.pi / (2.0 * sb)
    return make_translation(f_k(c3, e3), f_k(c4, e4), g_k(c3, p3), g_k(c4, p4),
                            domain=(-ulim, ulim, -vlim, vlim))


def _iter_points(grid_spec):
    for point in grid_spec.points():
        yield point[-2], point[-1]


def max_h_norm(patch: MongePatch, grid_spec) -> float:
    """Largest ||H|| over the grid; the minimality measurement."""
    worst = 0.0
    for u, v in _iter_points(grid_spec):
        pd = point_data(eval_patch(patch, u, v))
        worst = max(worst, pd.inv.Hnorm)
    return worst


@dataclass(frozen=True)
class PredicateResult:
    max_residual: float
    normalized_residual: float
    verdict: str


@dataclass(frozen=True)
class ClassificationReport:
    predicates: dict
    first_normal_rank: int
    chen_qualifier: str | None
    failed_points: int
    grid: str
    tol: float
    aminov_channels: dict | None = None


def _point_residuals(pd) -> dict:
    inv = pd.inv
    return {
        "minimal": inv.Hnorm,
        "chen": abs(chen_residual(pd.second)),
        "wintgen_ideal": abs(wintgen_deficit(inv)),
        "pseudo_umbilical": pseudo_umbilical_residual(pd.second),
        "flat": max(abs(inv.K), abs(inv.KN)),
        "k_plus_kn_zero": abs(inv.K + inv.KN),
    }


def classify_surface(patch: MongePatch, grid_spec, tol: float = DEFAULT_TOL) -> ClassificationReport:
    """Evaluate all predicates over the grid and aggregate verdicts.

    grid_spec only needs a points() iterable whose items end with
    (u, v); evaluation failures are counted and flip every verdict to
    indeterminate instead of aborting.
    """
    raw = dict.fromkeys(PREDICATES, 0.0)
    normalized = dict.fromkeys(PREDICATES, 0.0)
    failed = 0
    rank = 0
    minimal_everywhere = True
    pseudo_everywhere = True
    aminov_kkn = 0.0
    aminov_wintgen = 0.0

    for u, v in _iter_points(grid_spec):
        try:
            pd = point_data(eval_patch(patch, u, v))
        except jet.DomainError:
            failed += 1
            continue
        inv = pd.inv
        scale = 1.0 + max(abs(inv.K), abs(inv.KN), inv.Hnorm ** 2)
        for name, value in _point_residuals(pd).items():
            raw[name] = max(raw[name], value)
            normalized[name] = max(normalized[name], value / scale)
        rank = max(rank, first_normal_rank(pd.second))
        if inv.Hnorm / scale >= tol:
            minimal_everywhere = False
        if pseudo_umbilical_residual(pd.second) / scale >= tol:
            pseudo_everywhere = False
        if patch.family == "aminov":
            r = profile_at(patch, u)
            aminov_kkn = max(aminov_kkn, abs(k_plus_kn_residual(r)))
            aminov_wintgen = max(aminov_wintgen, abs(aminov_wintgen_residual(r)))

    predicates = {}
    for name in PREDICATES:
        if failed > 0:
            verdict = "indeterminate"
        else:
            verdict = "holds" if normalized[name] < tol else "fails"
        predicates[name] = PredicateResult(raw[name], normalized[name], verdict)

    qualifier = None
    if predicates["chen"].verdict == "holds":
        nontrivial = (rank == 2 and not pseudo_everywhere
                      and not minimal_everywhere)
        qualifier = "non-trivial" if nontrivial else "trivial"

    channels = None
    if patch.family == "aminov":
        channels = {"profile_k_plus_kn": aminov_kkn,
                    "profile_wintgen": aminov_wintgen}

    return ClassificationReport(predicates, rank, qualifier, failed,
                                describe_grid(grid_spec), tol, channels)


def describe_grid(grid_spec) -> str:
    for attrs in (("u0", "u1", "v0", "v1", "nu", "nv"),):
        if all(hasattr(grid_spec, name) for name in attrs):
            g = grid_spec
            return (f"[{g.u0}, {g.u1}] x [{g.v0}, {g.v1}], {g.nu} x {g.nv}")
    return repr(grid_spec)


def report_to_json(report: ClassificationReport) -> str:
    doc = {name: {"max_residual": pr.max_residual,
                  "normalized_residual": pr.normalized_residual,
                  "verdict": pr.verdict}
           for name, pr in report.predicates.items()}
    doc["first_normal_rank"] = report.first_normal_rank
    doc["chen_qualifier"] = report.chen_qualifier
    doc["failed_points"] = report.failed_points
    doc["grid"] = report.grid
    doc["tolerances"] = {"tol": report.tol}
    if report.aminov_channels is not None:
        doc["aminov_channels"] = report.aminov_channels
    return json.dumps(doc, indent=2)


__all__ = [
    "ClassificationReport", "PredicateResult", "ShapeOperatorPair",
    "aminov_wintgen_residual", "chen_residual", "classify_surface",
    "describe_grid", "first_normal_rank", "integrate_profile_ode",
    "k_plus_kn_residual", "max_h_norm", "minimal_aminov_profile",
    "minimal_translation_family", "minimality_residual",
    "pseudo_umbilical_residual", "report_to_json", "same_sign_aminov_profile",
    "shape_operators", "wintgen_deficit",
]
