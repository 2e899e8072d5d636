"""Aggregate session logs into the per-target/aggregate CSV report.

One row per acquired target plus mean/sd aggregate rows per grouping key
(default technique x map x distance class, with an "all"-classes rollup).
Columns are frozen in docs/SCHEMA.md. Rows are emitted in a deterministic
order so identical inputs produce identical bytes.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable

from hovernav.harness import compute_metrics
from hovernav.logs import SessionLog, read_log

CSV_COLUMNS = ["row", "session", "technique", "map", "class", "target",
               "stat", "n", "time_s", "first_miss", "wrong_target",
               "norm_scale", "zoom_free"]

DEFAULT_GROUP_BY = ("technique", "map", "class")
_GROUPABLE = ("technique", "map", "class", "session")


def target_rows(log: SessionLog) -> list[dict]:
    """One row per acquired target of one session."""
    m = compute_metrics(log)
    h = log.header
    rows = []
    for i, t in enumerate(m.times):
        rows.append({
            "row": "target",
            "session": h.session,
            "technique": h.technique,
            "map": h.map.name,
            "class": m.classes[i],
            "target": i,
            "stat": "",
            "n": "",
            "time_s": repr(t),
            "first_miss": m.per_target_first_miss[i],
            "wrong_target": m.per_target_wrong[i],
            "norm_scale": repr(m.per_target_norm_scale[i]),
            "zoom_free": int(m.per_target_zoom_free[i]),
        })
    return rows


def _mean(xs):
    return sum(xs) / len(xs)


def _sd(xs):
    if len(xs) < 2:
        return 0.0
    m = _mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def _aggregate(rows: list[dict], key: dict) -> list[dict]:
    # each session contributes its own mean first (the usual per-subject
    # aggregation for condition comparisons), so duplicated sessions give
    # sd = 0 and unequal session lengths cannot skew a group
    per_session: dict[str, list[dict]] = {}
    for r in rows:
        per_session.setdefault(r["session"], []).append(r)
    session_means = {
        col: [_mean([float(r[col]) for r in rs])
              for rs in per_session.values()]
        for col in ("time_s", "first_miss", "wrong_target", "norm_scale")
    }
    zoom_free_count = sum(int(r["zoom_free"]) for r in rows)
    out = []
    for stat, fn in (("mean", _mean), ("sd", _sd)):
        out.append({
            "row": "aggregate",
            "session": key.get("session", ""),
            "technique": key.get("technique", ""),
            "map": key.get("map", ""),
            "class": key.get("class", "all"),
            "target": "",
            "stat": stat,
            "n": len(per_session),
            "time_s": repr(fn(session_means["time_s"])),
            "first_miss": repr(fn(session_means["first_miss"])),
            "wrong_target": repr(fn(session_means["wrong_target"])),
            "norm_scale": repr(fn(session_means["norm_scale"])),
            # the instance count only makes sense once, on the mean row
            "zoom_free": zoom_free_count if stat == "mean" else "",
        })
    return out


def analyze(logs: Iterable[SessionLog | str | Path],
            group_by: tuple[str, ...] = DEFAULT_GROUP_BY) -> list[dict]:
    """Per-target rows for every log plus aggregates over `group_by`.

    When "class" is among the grouping columns, aggregates are also emitted
    with the classes rolled up (class column "all").
    """
    for g in group_by:
        if g not in _GROUPABLE:
            raise ValueError(f"cannot group by {g!r}; choose from {_GROUPABLE}")
    all_rows: list[dict] = []
    for log in logs:
        if not isinstance(log, SessionLog):
            log = read_log(log)
        all_rows.extend(target_rows(log))
    if not all_rows:
        raise ValueError("no target rows: empty or truncated input set")
    all_rows.sort(key=lambda r: (r["session"], r["target"]))

    groups: dict[tuple, list[dict]] = {}
    rollup_by = tuple(g for g in group_by if g != "class")
    for r in all_rows:
        key = tuple((g, r[g]) for g in group_by)
        groups.setdefault(key, []).append(r)
        if "class" in group_by:
            key = tuple((g, r[g]) for g in rollup_by) + (("class", "all"),)
            groups.setdefault(key, []).append(r)

    out = list(all_rows)
    for key in sorted(groups, key=str):
        out.extend(_aggregate(groups[key], dict(key)))
    return out


def fitts_fit(logs: Iterable[SessionLog | str | Path]) -> dict:
    """Least-squares fit of acquisition time against index of difficulty.

    Multiscale pointing is expected to follow time = a + b * ID with
    ID = log2(D / W + 1), D the class distance in map meters and W the
    target's map-space width at the selection scale (1:1, so 10 mm). This is
    a descriptive metric over logs, not an agent or human model.
    """
    pairs: list[tuple[float, float]] = []
    for log in logs:
        if not isinstance(log, SessionLog):
            log = read_log(log)
        m = compute_metrics(log)
        h = log.header
        diag = h.map.diagonal
        fractions = {"small": 0.125, "medium": 0.25, "large": 0.5}
        for t, cls in zip(m.times, m.classes):
            d = fractions[cls] * diag
            width = 2 * h.targets[0].screen_radius  # map meters at scale 1
            pairs.append((math.log2(d / width + 1.0), t))
    if len(pairs) < 2:
        raise ValueError("need at least two acquisitions to fit")
    n = len(pairs)
    mean_x = sum(x for x, _ in pairs) / n
    mean_y = sum(y for _, y in pairs) / n
    sxx = sum((x - mean_x) ** 2 for x, _ in pairs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in pairs)
    if sxx == 0.0:
        raise ValueError("all acquisitions share one difficulty; cannot fit")
    b = sxy / sxx
    a = mean_y - b * mean_x
    ss_tot = sum((y - mean_y) ** 2 for _, y in pairs)
    ss_res = sum((y - (a + b * x)) ** 2 for x, y in pairs)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"a": a, "b": b, "r2": r2, "n": n}


def write_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        w.writeheader()
        w.writerows(rows)


def render_csv(rows: list[dict]) -> str:
    import io
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
