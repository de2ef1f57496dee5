"""On-disk routine specifications, run reports and their evaluation.

Every kept routine is written to ``routine_NNN.json``::

    {
      "format_version": 1,
      "id": "routine_001",
      "pattern": [{"position", "type", "label", "context"}, ...],
      "instances": <count>,
      "instance_rows": [[<0-based row of each UI in the input log>, ...], ...],
      "score": {"frequency", "length", "coverage", "cohesion"},
      "steps": [{"position", "sources", "target", "function"}, ...],
      "automatable": <bool>,
      "per_ui_flags": [<bool>, ...]
    }

Functions are serialized with a readable ``text`` plus a structured form:
``{"kind": "syntactic", "classes": [{"inputs", "program", "text"}]}`` where a
program is a list of ``[operation, [arguments]]``, or ``{"kind":
"dependency", "determinant": [...], "mapping": [[[values], output], ...]}``.

``report.json`` summarizes the run, including wall-clock stage timings, so it
is the only output that differs between identical runs.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import Union

from .automatability import RoutineSpecification
from .estimator import PipelineResult
from .log_model import ContextSchema, compose_key, describe_key, key_label, normalize, read_log
from .metrics import automatability_scores, routine_quality, total_coverage
from .segmentation import cfg_to_dot, dominator_tree_to_dot
from .simgen import GroundTruth, read_truth

__all__ = ["FORMAT_VERSION", "evaluate", "report_dict", "spec_to_dict", "write_outputs"]

FORMAT_VERSION = 1


def _dump(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def spec_to_dict(spec: RoutineSpecification, result: PipelineResult, ident: str) -> dict:
    cand = spec.candidate
    pattern = []
    for pos, key in enumerate(cand.symbols):
        desc = describe_key(key)
        pattern.append({"position": pos, "type": desc["type"], "label": key_label(key), "context": desc["context"]})
    score = cand.score
    return {
        "format_version": FORMAT_VERSION,
        "id": ident,
        "pattern": pattern,
        "instances": len(cand.instances),
        "instance_rows": [list(result.original_indices(inst.log_indices)) for inst in cand.instances],
        "score": {
            "frequency": score.frequency,
            "length": score.length,
            "coverage": round(score.coverage, 6),
            "cohesion": score.cohesion,
        },
        "steps": [step.to_json() for step in spec.steps],
        "automatable": spec.automatable,
        "per_ui_flags": list(spec.flags),
    }


def report_dict(result: PipelineResult, log_path: str | None = None, schema: ContextSchema | None = None) -> dict:
    routines = result.routines
    lengths = [len(r.candidate) for r in routines]
    if not result.log:
        message = "the log is empty"
    elif not result.segments:
        message = "no segments found: the control-flow graph has no loops, so no routines were discovered"
    elif not routines:
        message = "segments found, but no pattern met the support and coverage thresholds"
    else:
        message = f"{len(routines)} routine(s) discovered"
    loops = result.loops
    return {
        "format_version": FORMAT_VERSION,
        "log": log_path,
        "schema": (schema or ContextSchema.default()).to_dict(),
        "events": len(result.log),
        "filtered_events": len(result.filtered),
        "segments": len(result.segments),
        "back_edges": sorted([key_label(a), key_label(b)] for a, b in (loops.back_edges if loops else ())),
        "candidates": len(result.candidates),
        "routines": len(routines),
        "automatable_routines": sum(r.automatable for r in routines),
        "average_length": round(sum(lengths) / len(lengths), 6) if lengths else 0.0,
        "total_coverage": round(result.total_coverage, 6),
        "routine_files": [f"routine_{i + 1:03d}.json" for i in range(len(routines))],
        "message": message,
        "timings": {k: round(v, 6) for k, v in result.timings.items()},
    }


def write_outputs(
    result: PipelineResult,
    out_dir: Union[str, Path],
    log_path: str | None = None,
    schema: ContextSchema | None = None,
    emit_dot: bool = False,
) -> dict:
    """Write one JSON file per routine plus ``report.json``; returns the report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for stale in out.glob("routine_*.json"):
        stale.unlink()
    for i, spec in enumerate(result.routines):
        ident = f"routine_{i + 1:03d}"
        (out / f"{ident}.json").write_text(_dump(spec_to_dict(spec, result, ident)), encoding="utf-8")
    if emit_dot and result.cfg is not None:
        back = result.loops.back_edges if result.loops else frozenset()
        (out / "cfg.dot").write_text(cfg_to_dot(result.cfg, back), encoding="utf-8")
        (out / "dominators.dot").write_text(dominator_tree_to_dot(result.cfg), encoding="utf-8")
    report = report_dict(result, log_path, schema)
    (out / "report.json").write_text(_dump(report), encoding="utf-8")
    return report


def _load_specs(spec_dir: Path) -> list[dict]:
    return [json.loads(p.read_text(encoding="utf-8")) for p in sorted(spec_dir.glob("routine_*.json"))]


def _pattern_keys(spec: dict) -> list[str]:
    return [compose_key(step["type"], list(step["context"].items())) for step in spec["pattern"]]


def _truth_routines(log_path: Path, truth: GroundTruth, schema: ContextSchema) -> dict[str, set]:
    events = read_log(log_path)
    if len(events) != len(truth):
        raise ValueError(f"ground truth has {len(truth)} rows but the log has {len(events)} events")
    keys = [e.key for e in normalize(events, schema)]
    return {v: {keys[i] for i in idx} for v, idx in sorted(truth.variant_events().items())}


def evaluate(
    spec_dir: Union[str, Path],
    truth_path: Union[str, Path],
    log_path: Union[str, Path, None] = None,
) -> dict:
    """Compare written specifications with a ground-truth side-car file."""
    spec_dir = Path(spec_dir)
    truth_path = Path(truth_path)
    if not truth_path.is_file():
        raise FileNotFoundError(f"no ground-truth file: {truth_path}")
    report_path = spec_dir / "report.json"
    if not report_path.is_file():
        raise FileNotFoundError(f"no report.json in {spec_dir}")
    report = json.loads(report_path.read_text(encoding="utf-8"))
    if log_path is None:
        if not report.get("log"):
            raise ValueError("the report does not name its log; pass the log path explicitly")
        log_path = report["log"]
    log_path = Path(log_path)
    schema = ContextSchema(report.get("schema"))
    truth = read_truth(truth_path)
    specs = _load_specs(spec_dir)
    truths = _truth_routines(log_path, truth, schema)
    names = list(truths)

    discovered = [set(_pattern_keys(s)) for s in specs]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        quality = routine_quality(discovered, [truths[n] for n in names])
    per_routine = [
        {"id": s["id"], "jaccard": round(q, 6), "matched_variant": names[m], "length": len(s["pattern"])}
        for s, q, m in zip(specs, quality.per_routine, quality.matched)
    ]

    coverage = total_coverage([row for s in specs for row in s["instance_rows"]], report["filtered_events"])

    predicted, labels = [], []
    for s in specs:
        for pos, flag in enumerate(s["per_ui_flags"]):
            truth_flags = [truth.automatable[rows[pos]] for rows in s["instance_rows"]]
            predicted.append(bool(flag))
            labels.append(all(t is not False for t in truth_flags))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        precision, recall, f_score = automatability_scores(predicted, labels) if predicted else (0.0, 0.0, 0.0)

    lengths = [len(s["pattern"]) for s in specs]
    return {
        "routines": per_routine,
        "discovered": len(specs),
        "variants": len(names),
        "average_length": round(sum(lengths) / len(lengths), 6) if lengths else 0.0,
        "average_jaccard": round(quality.average, 6),
        "total_coverage": round(coverage, 6),
        "precision": round(precision, 6),
        "recall": round(recall, 6),
        "f_score": round(f_score, 6),
    }
