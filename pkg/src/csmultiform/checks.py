"""Individual verification checks driven by the CLI.

Each check takes a :class:`RunConfig` and returns ``(passed, measured)``
where ``measured`` holds JSON-ready values.  Checks seed their own random
generators from the config, so they can run in any order or thread.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import chern_simons as cs
from . import darboux as dx
from .algebra import random as rnd
from .algebra.forms import exterior_derivative, trace, wedge
from .algebra.serialize import format_form, parse_form
from .config import RunConfig
from .numeric import fields as nf
from .numeric import goursat as gs
from .numeric.generating import generating_action
from .numeric.quadrature import SurfaceSpec, action_integral


@dataclass
class Check:
    name: str
    anchor: str
    run: Callable[[RunConfig], tuple]


def _frac(x) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------- symbolic


def check_algebra(cfg: RunConfig):
    rng = random.Random(cfg.seed)
    w = cfg.window
    failures = {"d_squared": 0, "leibniz": 0, "anticommute": 0, "trace_cyclic": 0, "roundtrip": 0}
    for _ in range(cfg.trials):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        a = rnd.random_matrix_form(rng, w, p)
        b = rnd.random_matrix_form(rng, w, q)
        if not exterior_derivative(exterior_derivative(a)).is_zero():
            failures["d_squared"] += 1
        lhs = exterior_derivative(wedge(a, b))
        rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)).scale((-1) ** p)
        if lhs != rhs:
            failures["leibniz"] += 1
        sa = rnd.random_scalar_form(rng, w, p)
        sb = rnd.random_scalar_form(rng, w, q)
        if sa.wedge(sb) != sb.wedge(sa).scale((-1) ** (p * q)):
            failures["anticommute"] += 1
        if trace(wedge(a, b)) != trace(wedge(b, a)).scale((-1) ** (p * q)):
            failures["trace_cyclic"] += 1
        if parse_form(format_form(a)) != a:
            failures["roundtrip"] += 1
    return not any(failures.values()), {"trials": cfg.trials, "failures": failures}


def dcs_check(n: int):
    def run(cfg: RunConfig):
        b = cs.darboux_gauge_field(cfg.window)
        rhs = cs.trace_curvature_power(b, n + 1)
        darboux_ok = exterior_derivative(cs.cs_odd(b, n)) == rhs
        rng = random.Random(cfg.seed + 100 * n)
        n_random = max(1, cfg.trials // (5 * n))
        bad = 0
        for _ in range(n_random):
            a = rnd.random_matrix_form(rng, cfg.window, 1, 3)
            if exterior_derivative(cs.cs_odd(a, n)) != cs.trace_curvature_power(a, n + 1):
                bad += 1
        measured = {"n": n, "darboux_field": darboux_ok, "random_fields": n_random,
                    "random_failures": bad, "target_monomials": rhs.n_monomials()}
        return darboux_ok and not bad, measured
    return run


def check_components_l3(cfg: RunConfig):
    table = cs.extract_components(cs.cs3(cs.darboux_gauge_field(cfg.window)), 3)
    factor = Fraction(2, 6)
    mismatched = []
    for t in cs.all_triples(cfg.window):
        if table[t] != cs.reference_L3(*t) * factor:
            mismatched.append(list(t))
    return not mismatched, {"triples": len(cs.all_triples(cfg.window)), "factor": _frac(factor),
                            "mismatched": mismatched[:5], "n_mismatched": len(mismatched)}


def check_components_l5(cfg: RunConfig):
    w = tuple(range(1, 6))
    table = cs.extract_components(cs.cs5(cs.darboux_gauge_field(w)), 5)
    const = cs.fit_constant(table[w], cs.reference_L5(*w))
    return const is not None, {"constant": None if const is None else _frac(const)}


def check_mdc(cfg: RunConfig):
    rep = dx.mdc_check(cfg.window)
    return rep.passed, {"tuples": rep.n_tuples, "failures": len(rep.failures)}


def certificate_check(n: int):
    def run(cfg: RunConfig):
        cert = dx.nfold_zero_certificate(n)
        return cert.passed, {"n": n, "window": len(cert.window), "min_g_degree": cert.min_g_degree,
                             "expected_fold": cert.expected_fold, "pure_b_residual_zero": cert.residual.is_zero(),
                             "on_shell_zero": cert.on_shell_reduced_zero, "monomials": cert.n_monomials}
    return run


def check_remark(cfg: RunConfig):
    rep = dx.remark_check(1, 4)
    ok = rep.exhibits_remark and rep.traced_min_g_degree is not None and rep.traced_min_g_degree >= 2
    return ok, {"low_fold_entries": len(rep.low_fold_entries), "untraced_min_g_degree": rep.untraced_min_g_degree,
                "traced_min_g_degree": rep.traced_min_g_degree}


def variation_check(n: int):
    def run(cfg: RunConfig):
        w = cfg.window if n == 1 else 2 * n + 1
        b = cs.darboux_gauge_field(w)
        res = dx.first_variation(b, dx.symbolic_variation(w), n)
        ok = res.passed
        measured = {"n": n, "window": w, "residual_zero": res.passed,
                    "ansatz": {" ".join(k): _frac(v) for k, v in sorted(res.ansatz.items())}}
        if n == 1:
            bulk_ok = res.bulk == dx.explicit_bulk(w)
            measured["bulk_matches_explicit"] = bulk_ok
            rng = random.Random(cfg.seed + 7)
            bad = 0
            for _ in range(cfg.trials):
                a = rnd.random_matrix_form(rng, w, 1, 3)
                eta = rnd.random_restricted_variation(rng, w, 3)
                if not dx.first_variation(a, eta, 1).passed:
                    bad += 1
            measured["random_cases"] = cfg.trials
            measured["random_failures"] = bad
            ok = ok and bulk_ok and not bad
        return ok, measured
    return run


def verify_checks(cfg: RunConfig) -> list[Check]:
    out = [Check("algebra_properties", "exterior algebra laws", check_algebra)]
    for n in range(1, cfg.n_max + 1):
        out.append(Check(f"dcs_identity_n{n}", f"dCS_{2 * n + 1} = Tr(F^{n + 1})", dcs_check(n)))
    out.append(Check("components_L3", "L3 components from CS3", check_components_l3))
    out.append(Check("components_L5", "L5 components from CS5", check_components_l5))
    out.append(Check("mdc", "Darboux system consistency", check_mdc))
    for n in range(1, cfg.n_max + 1):
        if 2 * n + 2 <= cfg.window:
            out.append(Check(f"zero_certificate_n{n}", f"Tr(F^{n + 1}) vanishes to order {n + 1}",
                             certificate_check(n)))
    out.append(Check("remark_untraced", "untraced curvature power remark", check_remark))
    for n in range(1, cfg.n_max + 1):
        out.append(Check(f"first_variation_n{n}", "first variation of CS action", variation_check(n)))
    return out


# ---------------------------------------------------------------- numeric


def _points(cfg: RunConfig, dim: int, count=64):
    rng = np.random.default_rng(cfg.seed)
    return cfg.corner + cfg.edge * rng.random((count, dim))


def check_exact_residuals(cfg: RunConfig):
    w = (1, 2, 3, 4)
    pts = _points(cfg, len(w))
    ex = nf.ExactSolution(cfg.c, w)
    res = max(float(np.max(np.abs(v))) for v in nf.darboux_residuals(ex, pts).values())
    ms = nf.MatrixSolution.random(np.random.default_rng(cfg.seed), w, scale=0.7)
    res2 = max(float(np.max(np.abs(v))) for v in nf.darboux_residuals(ms, pts).values())
    return max(res, res2) <= cfg.residual_tol, {"exact_solution": res, "rank2_solution": res2,
                                                "tolerance": cfg.residual_tol}


def _in_band(rates, cfg):
    return bool(rates) and all(abs(r - cfg.order_target) <= cfg.order_tol for r in rates)


def check_goursat_order(cfg: RunConfig):
    w = (1, 2, 3)
    ex = nf.ExactSolution(cfg.goursat_c, w)
    errors, iters = [], []
    for h in cfg.h_schedule:
        sol = gs.goursat_solve(gs.sample_planes(ex, gs.Grid.box(w, cfg.goursat_edge, h)))
        errors.append(sol.max_abs_error(ex))
        iters.append(sol.iterations)
    rates = gs.observed_orders(cfg.h_schedule, errors)
    table = [{"h": h, "max_error": e, "sweeps": k} for h, e, k in zip(cfg.h_schedule, errors, iters)]
    return _in_band(rates, cfg), {"table": table, "rates": rates}


def check_path_independence(cfg: RunConfig):
    w = (1, 2, 3, 4)
    fld = nf.MatrixSolution.random(np.random.default_rng(cfg.seed), w, scale=0.7)
    discs = []
    for h in cfg.pi_h_schedule:
        disc, _ = gs.path_independence(gs.sample_planes(fld, gs.Grid.box(w, cfg.pi_edge, h)))
        discs.append(disc)
    rates = gs.observed_orders(cfg.pi_h_schedule, discs)
    zero = gs.sample_planes(nf.ConstantField(0.0, w), gs.Grid.box(w, cfg.pi_edge, cfg.pi_h_schedule[0]))
    zero_disc, _ = gs.path_independence(zero)
    table = [{"h": h, "discrepancy": d} for h, d in zip(cfg.pi_h_schedule, discs)]
    return _in_band(rates, cfg) and zero_disc == 0.0, {"table": table, "rates": rates, "zero_data": zero_disc}


def _l3_table():
    return cs.extract_components(cs.cs3(cs.darboux_gauge_field(4)), 3)


def check_action_closure(cfg: RunConfig):
    w = (1, 2, 3, 4)
    l3 = _l3_table()
    fields = {
        "exact": nf.ExactSolution(cfg.c, w),
        "rank2": nf.MatrixSolution.random(np.random.default_rng(cfg.seed), w, scale=0.7),
        "offshell": nf.linear_offshell_field(w),
        "constant": nf.ConstantField(0.5, w),
    }
    table = []
    for q in cfg.quad_orders:
        surf = SurfaceSpec(w, (cfg.corner,) * 4, cfg.edge, q)
        row = {"order": q}
        for name, fld in fields.items():
            row[name] = action_integral(l3, surf, fld)
        table.append(row)
    last = table[-1]
    off = [r["offshell"] for r in table]
    stable = max(off) - min(off) <= 1e-6 * abs(off[-1])
    on_shell = [abs(r["rank2"]) for r in table]
    floor = 1e-14
    monotone = all(b <= a or b <= floor for a, b in zip(on_shell, on_shell[1:]))
    ok = (abs(last["exact"]) <= cfg.closure_tol and abs(last["rank2"]) <= cfg.closure_tol
          and monotone and abs(last["offshell"]) >= cfg.offshell_min and stable
          and abs(last["constant"]) <= cfg.closure_tol)
    return ok, {"table": table, "monotone_on_shell": monotone, "offshell_stable": stable}


def check_generating_action(cfg: RunConfig):
    w = tuple(range(1, 2 * cfg.n_max + 3))
    b = cs.darboux_gauge_field(w)
    lag = {1: cs.extract_components(cs.cs3(b), 3)}
    if cfg.n_max >= 2:
        lag[2] = cs.extract_components(cs.cs5(b), 5)
    corner = (cfg.corner,) * len(w)
    surfaces = {n: SurfaceSpec(w[: 2 * n + 2], corner, cfg.edge, cfg.quad_order) for n in lag}
    on = generating_action(cfg.hbar, cfg.n_max, surfaces,
                           nf.MatrixSolution.random(np.random.default_rng(cfg.seed), w, scale=0.7), lag)
    ex = generating_action(cfg.hbar, cfg.n_max, surfaces, nf.ExactSolution(cfg.c, w), lag)
    off = generating_action(cfg.hbar, cfg.n_max, surfaces, nf.linear_offshell_field(w), lag)
    recombined = sum(cfg.hbar**t["n"] / (t["n"] + 1) * t["integral"] for t in off.terms)
    ok = (all(abs(t["integral"]) <= cfg.closure_tol for t in on.terms + ex.terms)
          and abs(recombined - off.partial_sum) <= 1e-12 * max(1.0, abs(recombined)))
    return ok, {"hbar": cfg.hbar, "on_shell_terms": [t["integral"] for t in on.terms],
                "exact_terms": [t["integral"] for t in ex.terms], "on_shell_sum": on.partial_sum,
                "offshell_terms": [t["integral"] for t in off.terms], "offshell_sum": off.partial_sum}


def numeric_checks(cfg: RunConfig) -> list[Check]:
    return [
        Check("exact_residuals", "exact Darboux solutions", check_exact_residuals),
        Check("goursat_order", "Goursat solver convergence", check_goursat_order),
        Check("path_independence", "commuting Darboux flows", check_path_independence),
        Check("action_closure", "closed-surface action on shell", check_action_closure),
        Check("generating_action", "generating CS multiform", check_generating_action),
    ]


def check_numeric_domain(cfg: RunConfig) -> None:
    """Raise :class:`PoleError` (with its location) before any numeric work starts."""
    w = tuple(range(1, max(4, 2 * cfg.n_max + 2) + 1))
    lo = np.full(len(w), cfg.corner)
    nf.ExactSolution(cfg.c, w).check_domain(lo, lo + cfg.edge)
    g = (1, 2, 3)
    nf.ExactSolution(cfg.goursat_c, g).check_domain(np.zeros(3), np.full(3, cfg.goursat_edge))

