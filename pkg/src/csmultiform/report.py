"""Schema-versioned reports: JSON, a text rendering and CSV tables."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .checks import Check
from .config import RunConfig

SCHEMA_VERSION = "1"
TIMING_KEYS = ("timing_s",)


def run_check(check: Check, cfg: RunConfig) -> dict:
    start = time.perf_counter()
    try:
        passed, measured = check.run(cfg)
        status = "pass" if passed else "fail"
    except Exception as exc:  # a crashing check is reported, not propagated
        status, measured = "error", {"error": f"{type(exc).__name__}: {exc}"}
    return {"name": check.name, "anchor": check.anchor, "status": status, "measured": measured,
            "timing_s": round(time.perf_counter() - start, 4)}


def run_checks(checks: list[Check], cfg: RunConfig) -> list[dict]:
    """Run independent checks on a worker pool; records come back in list order."""
    if cfg.threads == 1:
        return [run_check(c, cfg) for c in checks]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(lambda c: run_check(c, cfg), checks))


def build_report(command: str, cfg: RunConfig, records: list[dict]) -> dict:
    failed = [r["name"] for r in records if r["status"] != "pass"]
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "csmultiform",
        "version": __version__,
        "command": command,
        "config": cfg.echo(),
        "checks": records,
        "summary": {"n_checks": len(records), "n_failed": len(failed), "failed": failed, "passed": not failed},
    }


def strip_timing(report: dict) -> dict:
    """Copy of ``report`` without timing fields, for reproducibility comparisons."""
    out = dict(report)
    out["checks"] = [{k: v for k, v in r.items() if k not in TIMING_KEYS} for r in report["checks"]]
    return out


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _short(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, list) and value and isinstance(value[0], dict):
        return f"<table {len(value)} rows>"
    if isinstance(value, list):
        return "[" + ", ".join(_short(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_short(v)}" for k, v in value.items()) + "}"
    return str(value)


def to_text(report: dict) -> str:
    lines = [f"csmultiform {report['version']} {report['command']} (schema {report['schema_version']})"]
    for r in report["checks"]:
        lines.append(f"{r['status'].upper():5} {r['name']}  [{r['anchor']}]  {r['timing_s']:.2f}s")
        for key, value in r["measured"].items():
            lines.append(f"      {key} = {_short(value)}")
            if isinstance(value, list) and value and isinstance(value[0], dict):
                cols = list(value[0])
                lines.append("        " + "  ".join(f"{c:>14}" for c in cols))
                for row in value:
                    lines.append("        " + "  ".join(f"{_short(row[c]):>14}" for c in cols))
    s = report["summary"]
    lines.append(f"{s['n_checks'] - s['n_failed']}/{s['n_checks']} checks passed")
    return "\n".join(lines) + "\n"


def tables_csv(report: dict) -> str:
    """Every tabular measurement (convergence and closure tables) as one long CSV."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "table", "row", "column", "value"])
    for r in report["checks"]:
        for key, value in r["measured"].items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                for i, row in enumerate(value):
                    for col, v in row.items():
                        writer.writerow([r["name"], key, i, col, repr(v) if isinstance(v, float) else v])
    return buf.getvalue()
