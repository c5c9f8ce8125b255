"""Machine-readable outputs: CSV documents and JSON reports.

All emitters are deterministic: identical inputs produce byte-identical
output. Numbers render with 9 significant digits in CSV; JSON keeps full
double precision. Timestamps never appear in data; an optional stamp
line goes into `#` comments only.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import replace

import numpy as np

from . import oracle
from .analytic import (
    DEFAULT_CONSTANTS,
    EnergyLevel,
    RadialWavefunction,
    closed_form_diagnostics,
    dimensionless_from_eps2,
    energy_levels,
    nu_problem,
    ode_residual,
    quantization_residual,
)
from . import nu
from .errors import HyperwellError, NoPhysicalBranchError, SingularCoefficientError
from .nu import pi_tau_select
from .oracle import compare_levels, fall_to_center_unreliable, fd_spectrum, numerov_spectrum
from .potential import eval_potential

SCHEMA_VERSION = 1

# beta -> 0+ probe: the a*V0 products walked toward the singular limit
_SINGULAR_LIMIT_PRODUCTS = tuple(10.0 ** (-k) for k in range(1, 9))


# ---------------------------------------------------------------------------
# primitive formatting
# ---------------------------------------------------------------------------

def fmt_number(x) -> str:
    """One CSV cell: 9 significant digits, empty cell for a gap."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.9g}"


def csv_document(header, rows, head_comments=(), tail_comments=()) -> str:
    """Comma-separated document with LF endings and '#' comment lines."""
    ncol = len(header)
    lines = [f"# {c}" for c in head_comments]
    lines.append(",".join(header))
    for row in rows:
        if len(row) != ncol:
            raise ValueError(f"ragged CSV row: expected {ncol} cells, got {len(row)}")
        lines.append(",".join(cell if isinstance(cell, str) else fmt_number(cell)
                              for cell in row))
    lines.extend(f"# {c}" for c in tail_comments)
    return "\n".join(lines) + "\n"


def complex_pair(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def jsonable(obj):
    """Recursively convert complex numbers and numpy scalars/arrays."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return complex_pair(obj)
    if isinstance(obj, (np.complexfloating,)):
        return complex_pair(complex(obj))
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def json_document(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def stamp_comment() -> str:
    return "generated " + _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _config_echo(config) -> dict:
    p = config.params
    return {
        "potential": {"a": p.a, "b": p.b, "c": p.c, "d": p.d,
                      "V0": p.V0, "V1": p.V1, "V2": p.V2, "alpha": p.alpha},
        "constants": {"hbar": config.consts.hbar, "mass": config.consts.mass},
        "state": {"n": list(config.n_list), "l": list(config.l_list)},
        "grid": {"r_min": config.grid.r_min, "r_max": config.grid.r_max,
                 "n_points": config.grid.n_points},
    }


# ---------------------------------------------------------------------------
# analytic spectrum entries
# ---------------------------------------------------------------------------

def _level_record(level: EnergyLevel) -> dict:
    return {
        "branch": level.branch,
        "eps2": complex_pair(level.eps2),
        "energy": complex_pair(level.energy),
        "energy_alt": complex_pair(level.energy_alt),
        "residual_quantization": level.residual_quantization,
        "imag_magnitude": level.imag_magnitude,
    }


def choose_level(levels) -> EnergyLevel:
    """The physical pick: smallest |Im E|, ties resolved by branch order."""
    return min(levels, key=lambda lv: lv.imag_magnitude)


def spectrum_entry(params, consts, n, l, variant="quadratic") -> dict:
    entry = {"n": int(n), "l": int(l), "singular": None}
    try:
        levels = energy_levels(params, consts, n, l, variant=variant)
    except SingularCoefficientError as exc:
        entry["singular"] = {"reason": str(exc)}
        return entry
    chosen = choose_level(levels)
    entry["branches"] = [_level_record(lv) for lv in levels]
    entry["chosen_branch"] = chosen.branch
    entry["chosen_re_energy"] = chosen.energy.real
    return entry


def spectrum_entries(params, consts, n_list, l_list, variant="quadratic"):
    return [spectrum_entry(params, consts, n, l, variant=variant)
            for l in l_list for n in n_list]


def build_spectrum_report(config, variant="quadratic") -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "spectrum",
        "config": _config_echo(config),
        "variant": variant,
        "entries": spectrum_entries(config.params, config.consts,
                                    config.n_list, config.l_list, variant=variant),
    }


# ---------------------------------------------------------------------------
# oracle report
# ---------------------------------------------------------------------------

def _spectrum_record(spec: oracle.NumericSpectrum) -> dict:
    return {
        "method": spec.method,
        "energies": [e for _, e, _ in spec.levels],
        "indices": [k for k, _, _ in spec.levels],
        "node_counts": [c for _, _, c in spec.levels],
        "unreliable": spec.unreliable,
        "notes": list(spec.notes),
    }


def _oracle_pair(config, l, n_states):
    params, consts, grid = config.params, config.consts, config.grid

    def bare(r):
        return eval_potential(params, r)

    flagged = fall_to_center_unreliable(params, consts, l)
    fd = fd_spectrum(bare, l, consts, grid, n_states)
    nm = numerov_spectrum(bare, l, consts, grid, None, n_states)
    for spec in (fd, nm):
        spec.unreliable = flagged
        if flagged:
            spec.notes = spec.notes + (
                "origin attraction exceeds the fall-to-center threshold; "
                "levels depend on r_min",)
    m = min(len(fd.levels), len(nm.levels))
    cross = [abs(fd.levels[i][1] - nm.levels[i][1]) / max(1.0, abs(fd.levels[i][1]))
             for i in range(m)]
    return fd, nm, cross


def build_oracle_report(config) -> dict:
    n_states = (max(config.n_list) + 1) if config.n_list else 0
    per_l = []
    for l in config.l_list:
        try:
            fd, nm, cross = _oracle_pair(config, l, n_states)
            per_l.append({"l": int(l), "n_states": n_states,
                          "fd": _spectrum_record(fd),
                          "numerov": _spectrum_record(nm),
                          "cross_delta_rel": cross})
        except HyperwellError as exc:
            per_l.append({"l": int(l), "n_states": n_states, "error": str(exc)})
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "oracle",
        "config": _config_echo(config),
        "per_l": per_l,
    }


# ---------------------------------------------------------------------------
# engine diagnostics report
# ---------------------------------------------------------------------------

def nu_check_entry(params, consts, n, l, branch="plus") -> dict:
    """Printed-form deltas for the engine run at one quantization root."""
    entry = {"n": int(n), "l": int(l), "branch": branch, "singular": None}
    try:
        levels = energy_levels(params, consts, n, l)
    except SingularCoefficientError as exc:
        entry["singular"] = {"reason": str(exc)}
        return entry
    by_name = {lv.branch: lv for lv in levels}
    level = by_name.get(branch, levels[0])
    dp = dimensionless_from_eps2(params, consts, level.eps2, l)
    entry["eps2"] = complex_pair(level.eps2)
    entry["energy"] = complex_pair(level.energy)
    entry["diagnostics"] = closed_form_diagnostics(dp, n)
    return entry


def build_nu_check_report(config, branch="plus") -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "nu-check",
        "config": _config_echo(config),
        "entries": [nu_check_entry(config.params, config.consts, n, l, branch=branch)
                    for l in config.l_list for n in config.n_list],
    }


# ---------------------------------------------------------------------------
# full validation report
# ---------------------------------------------------------------------------

def _singular_limit_section(params, consts, n, l):
    """Walk a*V0 -> 0+ and record how the quantization roots behave."""
    rows = []
    for product in _SINGULAR_LIMIT_PRODUCTS:
        probe = replace(params, a=1.0, V0=product)
        try:
            levels = energy_levels(probe, consts, n, l)
            rows.append({"a_V0": product,
                         "abs_eps2": [abs(lv.eps2) for lv in levels],
                         "abs_energy": [abs(lv.energy) for lv in levels]})
        except HyperwellError as exc:
            rows.append({"a_V0": product, "error": str(exc)})
    return rows


def _variant_delta_entry(params, consts, n, l):
    entry = {"n": int(n), "l": int(l)}
    try:
        quad = energy_levels(params, consts, n, l, variant="quadratic")
        spec = energy_levels(params, consts, n, l, variant="spectrum")
        entry["quadratic_eps2"] = [complex_pair(lv.eps2) for lv in quad]
        entry["spectrum_eps2"] = [complex_pair(lv.eps2) for lv in spec]
        entry["max_root_delta"] = max(abs(q.eps2 - s.eps2) for q, s in zip(quad, spec))
    except HyperwellError as exc:
        entry["error"] = str(exc)
    return entry


def _engine_cross_check(params, consts, level: EnergyLevel) -> dict:
    """|lambda - lambda_n| for the engine at a quantization root.

    When no branch qualifies as physical (Re(tau') < 0), which the
    mechanical engine does find at roots of the printed quadratic, fall
    back to the closest mismatch over every enumerated branch so the
    section quantifies instead of erroring out.
    """
    dp = dimensionless_from_eps2(params, consts, level.eps2, level.l)
    problem = nu_problem(dp)
    try:
        sol = pi_tau_select(problem)
        return {"engine_lambda_mismatch": quantization_residual(problem, sol, level.n),
                "physical_branch": True}
    except NoPhysicalBranchError:
        mismatch = min(quantization_residual(problem, b, level.n)
                       for b in nu.enumerate_branches(problem))
        return {"engine_lambda_mismatch": mismatch, "physical_branch": False}


def _ode_residual_entry(params, consts, level: EnergyLevel, samples, h):
    wf = RadialWavefunction(params, consts, level.n, level.l, level.eps2)
    res = ode_residual(wf, params, consts, level.energy, level.l, samples, h=h)
    return res


def build_validate_report(config, ode_h=1e-4) -> dict:
    params, consts = config.params, config.consts
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "validate",
        "config": _config_echo(config),
        "potential": {
            "asymptote": params.asymptote,
            "origin_unreliable_per_l": {
                str(l): fall_to_center_unreliable(params, consts, l)
                for l in config.l_list},
        },
    }

    entries = spectrum_entries(params, consts, config.n_list, config.l_list)
    any_singular = any(e["singular"] for e in entries)
    analytic_section = {
        "entries": entries,
        "constant_term_variants": [
            _variant_delta_entry(params, consts, n, l)
            for l in config.l_list for n in config.n_list],
    }
    if any_singular and config.n_list and config.l_list:
        analytic_section["singular_limit"] = _singular_limit_section(
            params, consts, config.n_list[0], config.l_list[0])
    else:
        analytic_section["singular_limit"] = None
    report["analytic"] = analytic_section

    oracle_report = build_oracle_report(config)
    report["oracle"] = {"per_l": oracle_report["per_l"]}

    # ByIndex comparison of chosen analytic levels against the FD oracle
    comparison = []
    chosen_by_l = {}
    for l in config.l_list:
        chosen = []
        for n in sorted(config.n_list):
            try:
                chosen.append(choose_level(energy_levels(params, consts, n, l)))
            except SingularCoefficientError:
                pass
        chosen_by_l[l] = chosen
    for block in report["oracle"]["per_l"]:
        l = block["l"]
        if "error" in block:
            comparison.append({"l": l, "error": block["error"]})
            continue
        fd_levels = tuple((k, e, c) for k, e, c in zip(
            block["fd"]["indices"], block["fd"]["energies"], block["fd"]["node_counts"]))
        fd_spec = oracle.NumericSpectrum(
            "FiniteDifference", fd_levels, (), config.grid, config.grid.points())
        rep = compare_levels(chosen_by_l[l], fd_spec)
        comparison.append({
            "l": int(l), "matching": rep.matching,
            "rows": [list(row) for row in rep.rows],
            "max_abs_delta": rep.max_abs_delta,
            "max_rel_delta": rep.max_rel_delta,
            "mean_abs_delta": rep.mean_abs_delta,
            "notes": list(rep.notes),
        })
    report["comparison"] = {
        "row_fields": ["n", "re_analytic", "im_analytic", "e_numeric",
                       "delta_abs", "delta_rel"],
        "per_l": comparison,
    }

    cross_checks = []
    ode_rows = []
    nu_rows = []
    samples = [0.5 / params.alpha, 1.0 / params.alpha,
               2.0 / params.alpha, 4.0 / params.alpha]
    for l in config.l_list:
        for level in chosen_by_l[l]:
            tag = {"n": level.n, "l": level.l, "branch": level.branch}
            try:
                cross_checks.append({**tag, **_engine_cross_check(params, consts, level)})
            except HyperwellError as exc:
                cross_checks.append({**tag, "error": str(exc)})
            try:
                ode_rows.append({**tag, "r_samples": samples,
                                 "residual": _ode_residual_entry(params, consts, level,
                                                                 samples, ode_h)})
            except HyperwellError as exc:
                ode_rows.append({**tag, "error": str(exc)})
            try:
                dp = dimensionless_from_eps2(params, consts, level.eps2, level.l)
                nu_rows.append({**tag, "diagnostics": closed_form_diagnostics(dp, level.n)})
            except HyperwellError as exc:
                nu_rows.append({**tag, "error": str(exc)})
    if any_singular and not any(chosen_by_l.values()):
        note = "analytic path singular for every requested state"
        cross_checks.append({"note": note})
        ode_rows.append({"note": note})
        nu_rows.append({"note": note})
    report["quantization_residual_cross_check"] = cross_checks
    report["ode_residual"] = ode_rows
    report["nu_diagnostics"] = nu_rows
    return report
