"""Monge patches X(u,v) = (u, v, f(u,v), g(u,v)) in four families.

explicit     f and g given directly as expressions in (u, v)
translation  f = f3(u)+g3(v), g = f4(u)+g4(v), single-variable payloads
aminov       f = r(u) cos v, g = r(u) sin v for a profile r
gradient     f = p(u,v), g = q(u,v) with p, q declared as the partials
             of a potential; integrability p_v = q_u is spot-checked at
             construction and demotes the patch to explicit on failure
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import jet
from .expr import ExprError, Profile, compile_expr, eval_expr, profile_eval

FAMILIES = ("explicit", "translation", "aminov", "gradient")

INTEG_TOL = 1e-8
INTEG_SAMPLES = 5
# sampling window used for the integrability check when no domain is given
DEFAULT_SAMPLE_BOX = (-1.0, 1.0, -1.0, 1.0)


@dataclass(frozen=True)
class PatchJets:
    """Second-order jets of the two graph functions at one point."""

    f: jet.Jet2
    g: jet.Jet2


@dataclass(frozen=True, eq=False)
class MongePatch:
    family: str
    exprs: dict
    domain: tuple | None = None
    integrability_residual: float | None = None
    gradient_warning: str | None = None
    asts: dict = field(default=None, repr=False, compare=False)

    def in_domain(self, u: float, v: float) -> bool:
        if self.domain is None:
            return True
        u0, u1, v0, v1 = self.domain
        if u0 is not None and not (u0 <= u <= u1):
            return False
        if v0 is not None and not (v0 <= v <= v1):
            return False
        return True


def _check_domain(domain):
    if domain is None:
        return None
    u0, u1, v0, v1 = domain
    for lo, hi, name in ((u0, u1, "u"), (v0, v1, "v")):
        if (lo is None) != (hi is None):
            raise ValueError(f"half-open {name}-range in domain")
        if lo is not None and not lo < hi:
            raise ValueError(f"empty {name}-range in domain")
    return (u0, u1, v0, v1)


def make_explicit(f_expr: str, g_expr: str, domain=None) -> MongePatch:
    asts = {"f": compile_expr(f_expr), "g": compile_expr(g_expr)}
    return MongePatch("explicit", {"f": f_expr, "g": g_expr},
                      _check_domain(domain), asts=asts)


def make_translation(f3: str, f4: str, g3: str, g4: str, domain=None) -> MongePatch:
    asts = {
        "f3": compile_expr(f3, variables=("u",)),
        "f4": compile_expr(f4, variables=("u",)),
        "g3": compile_expr(g3, variables=("v",)),
        "g4": compile_expr(g4, variables=("v",)),
    }
    exprs = {"f3": f3, "f4": f4, "g3": g3, "g4": g4}
    return MongePatch("translation", exprs, _check_domain(domain), asts=asts)


def make_aminov(r_expr: str, u_range, v_range=None) -> MongePatch:
    ast = compile_expr(r_expr, variables=("u",))
    u0, u1 = u_range
    if not u0 < u1:
        raise ValueError("empty u-range")
    # probe the profile across the declared range so domain failures
    # (log of a nonpositive value, poles) surface at construction
    for k in range(9):
        eval_expr(ast, {"u": jet.seed1(u0 + (u1 - u0) * k / 8)})
    v0, v1 = v_range if v_range is not None else (None, None)
    domain = _check_domain((u0, u1, v0, v1))
    return MongePatch("aminov", {"r": r_expr}, domain, asts={"r": ast})


def make_gradient(p_expr: str, q_expr: str, domain=None,
                  samples: int = INTEG_SAMPLES, integ_tol: float = INTEG_TOL) -> MongePatch:
    asts = {"p": compile_expr(p_expr), "q": compile_expr(q_expr)}
    domain = _check_domain(domain)
    box = DEFAULT_SAMPLE_BOX
    if domain is not None:
        u0, u1, v0, v1 = domain
        box = (u0 if u0 is not None else box[0], u1 if u1 is not None else box[1],
               v0 if v0 is not None else box[2], v1 if v1 is not None else box[3])
    residual = 0.0
    for i in range(samples):
        u = box[0] + (box[1] - box[0]) * i / (samples - 1)
        for j in range(samples):
            v = box[2] + (box[3] - box[2]) * j / (samples - 1)
            env = {"u": jet.seed_u(u, v), "v": jet.seed_v(u, v)}
            p = eval_expr(asts["p"], env)
            q = eval_expr(asts["q"], env)
            residual = max(residual, abs(p.dv - q.du))
    if residual < integ_tol:
        return MongePatch("gradient", {"p": p_expr, "q": q_expr}, domain,
                          integrability_residual=residual, asts=asts)
    warning = (f"integrability residual {residual:.3g} exceeds {integ_tol:.3g}; "
               "treating the pair as an explicit patch")
    return MongePatch("explicit", {"f": p_expr, "g": q_expr}, domain,
                      integrability_residual=residual, gradient_warning=warning,
                      asts={"f": asts["p"], "g": asts["q"]})


def _profile_jet2(r: jet.Jet1) -> jet.Jet2:
    return jet.Jet2(r.val, r.d1, 0.0, r.d2, 0.0, 0.0)


def eval_patch(patch: MongePatch, u: float, v: float) -> PatchJets:
    """Exact second-order jets of (f, g) at (u, v)."""
    if not patch.in_domain(u, v):
        raise jet.DomainError(f"point ({u}, {v}) outside patch domain")
    if patch.family == "aminov":
        r = eval_expr(patch.asts["r"], {"u": jet.seed1(u)})
        rj = _profile_jet2(r)
        jv = jet.seed_v(u, v)
        return PatchJets(f=rj * jet.apply_unary("cos", jv),
                         g=rj * jet.apply_unary("sin", jv))
    env = {"u": jet.seed_u(u, v), "v": jet.seed_v(u, v)}
    if patch.family == "translation":
        a = patch.asts
        return PatchJets(f=eval_expr(a["f3"], env) + eval_expr(a["g3"], env),
                         g=eval_expr(a["f4"], env) + eval_expr(a["g4"], env))
    kf, kg = ("p", "q") if patch.family == "gradient" else ("f", "g")
    return PatchJets(f=eval_expr(patch.asts[kf], env),
                     g=eval_expr(patch.asts[kg], env))


def aminov_profile(patch: MongePatch) -> Profile:
    if patch.family != "aminov":
        raise ValueError("not an aminov patch")
    return Profile(patch.exprs["r"], patch.asts["r"])


def profile_at(patch: MongePatch, u: float) -> jet.Jet1:
    return profile_eval(aminov_profile(patch), u)


def patch_to_json(patch: MongePatch) -> str:
    doc = {"family": patch.family, "exprs": dict(patch.exprs),
           "domain": list(patch.domain) if patch.domain is not None else None}
    return json.dumps(doc)


def patch_from_json(text: str) -> MongePatch:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"invalid patch document: {err}") from None
    if not isinstance(doc, dict):
        raise ValueError("invalid patch document: expected an object")
    family = doc.get("family")
    exprs = doc.get("exprs")
    domain = doc.get("domain")
    if family not in FAMILIES:
        raise ValueError(f"unknown patch family {family!r}")
    if not isinstance(exprs, dict):
        raise ValueError("patch document missing exprs")
    if domain is not None:
        domain = tuple(domain)
        if len(domain) != 4:
            raise ValueError("domain must have four entries")
    try:
        if family == "explicit":
            return make_explicit(exprs["f"], exprs["g"], domain)
        if family == "translation":
            return make_translation(exprs["f3"], exprs["f4"],
                                    exprs["g3"], exprs["g4"], domain)
        if family == "aminov":
            if domain is None or domain[0] is None:
                raise ValueError("aminov patch requires a u-range in domain")
            v_range = None if domain[2] is None else (domain[2], domain[3])
            return make_aminov(exprs["r"], (domain[0], domain[1]), v_range)
        return make_gradient(exprs["p"], exprs["q"], domain)
    except KeyError as err:
        raise ValueError(f"patch document missing expression {err.args[0]!r}") from None


def describe(patch: MongePatch) -> str:
    parts = [patch.family]
    parts.extend(f"{k}={v}" for k, v in patch.exprs.items())
    if patch.gradient_warning:
        parts.append(f"warning: {patch.gradient_warning}")
    return "; ".join(parts)


def validate_expression(text: str, variables=("u", "v")) -> None:
    """Parse-check an expression, re-raising ExprError unchanged."""
    compile_expr(text, variables)


__all__ = [
    "FAMILIES", "MongePatch", "PatchJets", "aminov_profile", "describe",
    "eval_patch", "make_aminov", "make_explicit", "make_gradient",
    "make_translation", "patch_from_json", "patch_to_json", "profile_at",
    "validate_expression", "ExprError",
]
