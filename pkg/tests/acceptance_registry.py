"""Shared registry so the terminal summary can print one line per criterion."""

from __future__ import annotations

import time

RESULTS: list[tuple[str, bool, float, float, str]] = []


def record(name: str, cap_seconds: float, fn):
    """Run a criterion body, time it, register the outcome, re-raise failures."""
    start = time.perf_counter()
    try:
        detail = fn()
    except BaseException:
        RESULTS.append((name, False, time.perf_counter() - start, cap_seconds, ""))
        raise
    elapsed = time.perf_counter() - start
    note = detail.get("summary", "") if isinstance(detail, dict) else ""
    ok = elapsed < cap_seconds
    RESULTS.append((name, ok, elapsed, cap_seconds, note))
    assert ok, f"{name}: runtime {elapsed:.1f}s exceeded the {cap_seconds:g}s cap"
    return detail


def summary_lines() -> list[str]:
    lines = []
    for name, ok, elapsed, cap, note in RESULTS:
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] {name} ({elapsed:.1f}s / cap {cap:g}s)"
        if note:
            line += f" {note}"
        lines.append(line)
    return lines
