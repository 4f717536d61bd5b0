"""Scenario execution and report writing.

Outputs are deterministic: floats are printed with 17 significant digits,
files are written atomically (temp file + rename), report.json embeds the
fully resolved scenario, and sweep rows are ordered by sweep index no matter
which worker finishes first.
"""

import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis
from .correlators import (
    Correlation1D,
    INTER_FREQ,
    INTER_TIME,
    INTRA_FREQ,
    JointComb,
    JointGrid,
    baseline,
    g2_freq_exact,
    g2_inter_freq_narrowband,
    g2_inter_time,
    g2_intra_freq_narrowband,
    g2_intra_time,
)
from .elements import build_comb
from .scenario import Scenario, parse_scenario, set_parameter
from .source import evaluate_source

WIDTH_RATIO_TOLERANCE = 1e-6
LEAKAGE_TOLERANCE = 1e-12


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _trace_csv(corr: Correlation1D) -> str:
    lines = ["tau_ps,g2,background"]
    bg = _fmt(corr.background)
    for tau, value in zip(corr.tau_grid, corr.values):
        lines.append(f"{_fmt(tau)},{_fmt(value)},{bg}")
    return "\n".join(lines) + "\n"


def _comb_csv(comb: JointComb) -> str:
    lines = ["n,coefficient,ridge,envelope_axis_radps,envelope_value"]
    for order, coeff in zip(comb.orders, comb.coefficients):
        ridge = _fmt(order * comb.mod_freq)
        coeff_s = _fmt(coeff)
        for axis, env in zip(comb.envelope_axis, comb.envelope):
            lines.append(f"{int(order)},{coeff_s},{ridge},{_fmt(axis)},{_fmt(env)}")
    return "\n".join(lines) + "\n"


def _joint_csv(joint: JointGrid) -> str:
    omegas = joint.grid.omegas
    lines = ["omega1_radps,omega2_radps,structure,background"]
    rows, cols = np.nonzero(joint.structure)
    for i, j in zip(rows, cols):
        lines.append(
            f"{_fmt(omegas[i])},{_fmt(omegas[j])},"
            f"{_fmt(joint.structure[i, j])},{_fmt(joint.background[i, j])}"
        )
    return "\n".join(lines) + "\n"


@dataclass
class PointOutcome:
    """One executed configuration: the raw result plus its analyses."""

    result: object
    analyses: dict


def execute(scenario: Scenario) -> PointOutcome:
    """Run the configured correlator and the requested analyses."""
    source = evaluate_source(scenario.source, scenario.grid)
    config = scenario.configuration

    if scenario.is_temporal:
        h1, h2 = scenario.elements
        corr = (
            g2_inter_time(source, h1, h2)
            if config == INTER_TIME
            else g2_intra_time(source, h1, h2)
        )
        results: dict = {"background": corr.background, "peak_tau_ps": corr.peak_tau}
        wanted = scenario.outputs.analyses
        if "rms_width" in wanted or "fwhm" in wanted or "width_ratio" in wanted:
            report = analysis.rms_width(corr)
            if "rms_width" in wanted:
                results["rms_width_ps"] = report.rms_width
            if "fwhm" in wanted:
                results["fwhm_ps"] = report.fwhm
        if "s_over_b" in wanted:
            results["s_over_b"] = analysis.signal_to_background(corr)
        if "width_ratio" in wanted:
            reference = baseline(source, config)
            verdict = analysis.assess_time_cancelation(
                corr, reference, config, tolerance=WIDTH_RATIO_TOLERANCE
            )
            results["width_ratio"] = verdict.metric
            results["canceled"] = verdict.canceled
            results["cancel_tolerance"] = verdict.tolerance
        return PointOutcome(result=corr, analyses=results)

    (freq, idx1), (_, idx2) = scenario.modulators
    m1 = build_comb(freq, idx1)
    m2 = build_comb(freq, idx2)
    if scenario.exact_grid:
        joint = g2_freq_exact(source, m1, m2, config)
        structure_integral = float(np.sum(joint.structure)) * scenario.grid.delta_omega**2
        return PointOutcome(result=joint, analyses={"structure_integral": structure_integral})

    comb = (
        g2_inter_freq_narrowband(source, m1, m2)
        if config == INTER_FREQ
        else g2_intra_freq_narrowband(source, m1, m2)
    )
    results = {
        "combined_index": comb.combined_index,
        "n0_coefficient": comb.coefficient(0),
    }
    if "comb_leakage" in scenario.outputs.analyses:
        verdict = analysis.assess_comb_cancelation(comb, config, tolerance=LEAKAGE_TOLERANCE)
        results["comb_leakage"] = verdict.metric
        results["canceled"] = verdict.canceled
        results["cancel_tolerance"] = verdict.tolerance
    return PointOutcome(result=comb, analyses=results)


def _write_point_files(outcome: PointOutcome, scenario: Scenario, out_dir: Path, prefix: str):
    files = []
    if isinstance(outcome.result, Correlation1D):
        if scenario.outputs.write_trace:
            name = f"{prefix}trace.csv"
            _atomic_write(out_dir / name, _trace_csv(outcome.result))
            files.append(name)
    elif isinstance(outcome.result, JointComb):
        if scenario.outputs.write_comb:
            name = f"{prefix}comb.csv"
            _atomic_write(out_dir / name, _comb_csv(outcome.result))
            files.append(name)
    elif isinstance(outcome.result, JointGrid):
        name = f"{prefix}joint.csv"
        _atomic_write(out_dir / name, _joint_csv(outcome.result))
        files.append(name)
    return files


def _sweep_csv(scenario: Scenario, values, outcomes) -> str:
    if scenario.is_temporal:
        lines = ["param,rms_width_ps,fwhm_ps,s_over_b"]
        for value, outcome in zip(values, outcomes):
            lines.append(
                f"{_fmt(value)},{_fmt(outcome.analyses['rms_width_ps'])},"
                f"{_fmt(outcome.analyses['fwhm_ps'])},{_fmt(outcome.analyses['s_over_b'])}"
            )
    else:
        lines = ["param,comb_leakage"]
        for value, outcome in zip(values, outcomes):
            lines.append(f"{_fmt(value)},{_fmt(outcome.analyses['comb_leakage'])}")
    return "\n".join(lines) + "\n"


def run_scenario(scenario: Scenario, out_dir, workers: int | None = None) -> dict:
    """Execute a scenario (sweeping if configured) and write its report.

    Returns the report dictionary; files land in ``out_dir``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    resolved = scenario.resolved()
    report: dict = {"schema_version": 1, "scenario": resolved}
    files: list = []

    if scenario.sweep is None:
        outcome = execute(scenario)
        files += _write_point_files(outcome, scenario, out_dir, "")
        report["results"] = outcome.analyses
    else:
        sweep = scenario.sweep
        if scenario.is_temporal:
            needed = {"rms_width", "fwhm", "s_over_b"}
            missing = needed - set(scenario.outputs.analyses)
            if missing:
                raise ValueError(f"temporal sweeps need analyses {sorted(missing)} enabled")
        point_scenarios = [
            parse_scenario(set_parameter(resolved, sweep.parameter, value))
            for value in sweep.values
        ]
        max_workers = workers or os.cpu_count() or 1
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(execute, point_scenarios))
        digits = max(4, len(str(len(outcomes))))
        for i, outcome in enumerate(outcomes):
            files += _write_point_files(
                outcome, scenario, out_dir, f"point_{i:0{digits}d}_"
            )
        name = "sweep.csv"
        _atomic_write(out_dir / name, _sweep_csv(scenario, sweep.values, outcomes))
        files.append(name)
        report["results"] = {
            "sweep_parameter": sweep.parameter,
            "points": [
                {"value": value, **outcome.analyses}
                for value, outcome in zip(sweep.values, outcomes)
            ],
        }

    report["files"] = sorted(files) + ["report.json"]
    _atomic_write(out_dir / "report.json", json.dumps(report, sort_keys=True, indent=2) + "\n")
    return report
