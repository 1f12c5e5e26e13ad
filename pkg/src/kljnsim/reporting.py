"""Machine-readable run reports and CSV trace dumps.

Reports are JSON with a versioned schema.  Every empirical rate carries its
99% Wilson interval, and an agreement section pairs each rate with its
analytic counterpart as a coverage boolean, so downstream tooling never has
to recompute the comparison.  Numbers are serialized at full precision
(shortest round-trip form).
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Optional

from . import __version__
from .attack import AttackStats, CampaignTally, calibrate
from .circuit import analytic_mean_square_currents
from .config import ExperimentConfig
from .protocol import KEY_BIT_BY_STATE, current_alarm, iter_bit_periods
from .stats import analytic_attack_probabilities, wilson_ci

SCHEMA_VERSION = 1
Z99 = 2.576


def analytic_section(cfg: ExperimentConfig) -> dict[str, Any]:
    """Closed-form numbers for the resolved network: moments, calibration, probabilities."""
    moments = analytic_mean_square_currents(cfg.network, cfg.noise)
    cal = calibrate(cfg.network, cfg.noise)
    probs = analytic_attack_probabilities(moments.ratio)
    return {
        "moments": {
            "ms_alice": moments.ms_alice,
            "ms_bob": moments.ms_bob,
            "ratio": moments.ratio,
        },
        "calibration": {
            "norm_constant": cal.norm_constant,
            "threshold": cal.threshold,
        },
        "probabilities": {
            "p_success": probs.p_success,
            "p_error": probs.p_error,
            "p_no_answer": probs.p_no_answer,
            "expected_measurements": probs.expected_measurements,
            "conditional_fidelity": probs.conditional_fidelity,
        },
    }


@dataclass
class _EmpiricalAccumulator:
    n_bits: int = 0
    n_secure: int = 0
    n_secure_samples: int = 0
    low_end_sq_sum: float = 0.0
    high_end_sq_sum: float = 0.0
    n_alarms: int = 0
    n_alarms_secure: int = 0
    rel_difference_sum: float = 0.0  # over secure periods


def _empirical_ratio(acc: _EmpiricalAccumulator) -> float:
    if acc.n_secure_samples == 0 or acc.high_end_sq_sum == 0.0:
        return float("nan")
    return acc.low_end_sq_sum / acc.high_end_sq_sum


def empirical_section(cfg: ExperimentConfig, csv_writer=None) -> dict[str, Any]:
    """One streaming Monte Carlo pass: protocol, alarm, attack, optional CSV dump.

    The empirical moment ratio is orientation-aware: squared currents are
    pooled at the low-resistor end and the high-resistor end across both
    secure states, so LH and HL periods reinforce rather than cancel.
    """
    cal = calibrate(cfg.network.with_resistors(cfg.pair.r_low, cfg.pair.r_high), cfg.noise)
    tally = CampaignTally(max_measurements=cfg.max_measurements)
    acc = _EmpiricalAccumulator()

    for trace in iter_bit_periods(
        cfg.n_bits, cfg.pair, cfg.network, cfg.noise, cfg.samples_per_bit, cfg.master_seed
    ):
        acc.n_bits += 1
        alarm = current_alarm(trace, cfg.alarm)
        if alarm.triggered:
            acc.n_alarms += 1
        if trace.state.secure:
            acc.n_secure += 1
            acc.n_secure_samples += trace.n_samples
            if alarm.triggered:
                acc.n_alarms_secure += 1
            acc.rel_difference_sum += alarm.rel_difference
            if KEY_BIT_BY_STATE[trace.state] == 0:  # LH: Alice holds the low resistor
                low_end, high_end = trace.i_alice, trace.i_bob
            else:
                low_end, high_end = trace.i_bob, trace.i_alice
            acc.low_end_sq_sum += float(low_end @ low_end)
            acc.high_end_sq_sum += float(high_end @ high_end)
            tally.add_period(trace, cal)
        if csv_writer is not None:
            for k in range(trace.n_samples):
                csv_writer.writerow(
                    (
                        trace.period_index,
                        k,
                        float(trace.i_alice[k]),
                        float(trace.i_bob[k]),
                        float(trace.v_node[k]),
                    )
                )

    stats = tally.stats(Z99)
    secure_ci = wilson_ci(acc.n_secure, acc.n_bits, Z99)
    return {
        "n_bits": acc.n_bits,
        "n_secure": acc.n_secure,
        "secure_fraction": acc.n_secure / acc.n_bits,
        "secure_fraction_ci99": list(secure_ci),
        "n_secure_samples": acc.n_secure_samples,
        "ratio": _empirical_ratio(acc),
        "mean_square_low_end": acc.low_end_sq_sum / acc.n_secure_samples
        if acc.n_secure_samples
        else float("nan"),
        "mean_square_high_end": acc.high_end_sq_sum / acc.n_secure_samples
        if acc.n_secure_samples
        else float("nan"),
        "alarm": {
            "n_triggered": acc.n_alarms,
            "n_triggered_secure": acc.n_alarms_secure,
            "trigger_rate_secure": acc.n_alarms_secure / acc.n_secure if acc.n_secure else float("nan"),
            "mean_rel_difference_secure": acc.rel_difference_sum / acc.n_secure
            if acc.n_secure
            else float("nan"),
        },
        "attack": _attack_dict(stats),
    }


def _attack_dict(stats: AttackStats) -> dict[str, Any]:
    no_trials = stats.n_trials == 0
    return {
        "n_trials": stats.n_trials,
        "n_success": stats.n_success,
        "n_error": stats.n_error,
        "n_no_answer": stats.n_no_answer,
        "p_success": float("nan") if no_trials else stats.p_success,
        "p_error": float("nan") if no_trials else stats.p_error,
        "p_no_answer": float("nan") if no_trials else stats.p_no_answer,
        "p_success_ci99": None if no_trials else list(stats.success_ci),
        "p_error_ci99": None if no_trials else list(stats.error_ci),
        "p_no_answer_ci99": None if no_trials else list(stats.no_answer_ci),
        "repeat_until_answer": {
            "n_attacked": stats.n_attacked,
            "n_answered": stats.n_answered,
            "n_gave_up": stats.n_gave_up,
            "n_correct": stats.n_correct,
            "conditional_fidelity": stats.conditional_fidelity,
            "fidelity_ci99": list(stats.fidelity_ci) if stats.n_answered else None,
            "mean_measurements": stats.mean_measurements,
            "measurements_hist": {str(k): v for k, v in stats.measurements_hist.items()},
        },
        "by_orientation": {
            "lh": {"trials": stats.lh_trials, "successes": stats.lh_successes},
            "hl": {"trials": stats.hl_trials, "successes": stats.hl_successes},
        },
    }


def _covers(ci: Optional[list[float]], value: float) -> bool:
    return ci is not None and ci[0] <= value <= ci[1]


def _close(value: Any, target: float, tol: float) -> bool:
    return isinstance(value, float) and value == value and abs(value - target) <= tol


def agreement_section(analytic: dict[str, Any], empirical: dict[str, Any]) -> dict[str, Any]:
    """CI-coverage booleans pairing each empirical rate with its analytic value."""
    probs = analytic["probabilities"]
    att = empirical["attack"]
    repeat = att["repeat_until_answer"]
    ratio_rel = empirical["ratio"] / analytic["moments"]["ratio"]
    return {
        "ratio_within_2pct": _close(ratio_rel, 1.0, 0.02),
        "p_success_ci_covers_analytic": _covers(att["p_success_ci99"], probs["p_success"]),
        "p_error_ci_covers_analytic": _covers(att["p_error_ci99"], probs["p_error"]),
        "p_no_answer_ci_covers_analytic": _covers(att["p_no_answer_ci99"], probs["p_no_answer"]),
        "fidelity_ci_covers_analytic": _covers(repeat["fidelity_ci99"], probs["conditional_fidelity"]),
        "mean_measurements_within_0p05": _close(
            repeat["mean_measurements"], probs["expected_measurements"], 0.05
        ),
    }


def build_report(cfg: ExperimentConfig, *, empirical: bool) -> dict[str, Any]:
    """Assemble the full run report; runs the Monte Carlo pass when asked to."""
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "provenance": {
            "tool_version": __version__,
            "master_seed": cfg.master_seed,
            "timestamp_utc": datetime.now(timezone.utc).isoformat(),
        },
        "config": cfg.to_dict(),
        "analytic": analytic_section(cfg),
    }
    if empirical:
        if cfg.trace_csv:
            with open(cfg.trace_csv, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(("period", "sample", "i_alice", "i_bob", "v_node"))
                report["empirical"] = empirical_section(cfg, writer)
        else:
            report["empirical"] = empirical_section(cfg)
        report["agreement"] = agreement_section(report["analytic"], report["empirical"])
    return report


def _sanitize(value: Any) -> Any:
    """Replace NaNs by nulls so the emitted document stays strict JSON."""
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    if isinstance(value, float) and value != value:
        return None
    return value


def report_json(report: dict[str, Any]) -> str:
    return json.dumps(_sanitize(report), indent=2, allow_nan=False)


def write_report(report: dict[str, Any], path: Optional[str]) -> None:
    text = report_json(report)
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
