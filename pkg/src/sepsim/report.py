"""JSON and TSV report encoding.

Every report is ``{"version", "config", "result"}``. Angles are radians,
complex numbers are ``[re, im]`` pairs and bit strings are big-endian text.
Wall-clock timings are kept out of the JSON so identical invocations give
identical bytes.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from sepsim import __version__
from sepsim.algorithms import DJResult, EntanglementTrace, GroverResult, SimonResult
from sepsim.classical import QueryLog
from sepsim.oracles import LinearBooleanFunction, to_bits
from sepsim.propositions import VerificationReport
from sepsim.separability import Entangled, SeparabilityVerdict
from sepsim.state import StateVector


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def verdict_record(v: SeparabilityVerdict) -> dict[str, Any]:
    if isinstance(v, Entangled):
        w = v.witness
        return {
            "verdict": "entangled",
            "tolerance": v.tol,
            "witness": {
                "qubit": w.qubit,
                "i": w.i,
                "j": w.j,
                "minor": w.magnitude,
                "minor_value": complex_pair(w.minor),
            },
        }
    d = v.decomposition
    return {
        "verdict": "separable",
        "tolerance": v.tol,
        "factors": [[theta, phi] for theta, phi in d.factors],
        "global_phase": d.global_phase,
    }


def trace_record(trace: EntanglementTrace | None, full: bool = True) -> list[dict[str, Any]]:
    if trace is None:
        return []
    if full:
        return [{"step": s.label, **verdict_record(s.verdict)} for s in trace.steps]
    return [
        {"step": s.label, "verdict": "separable" if s.verdict.separable else "entangled"}
        for s in trace.steps
    ]


def state_record(state: StateVector) -> dict[str, Any]:
    return {"n": state.n, "amplitudes": [complex_pair(a) for a in state.amplitudes.tolist()]}


def linear_record(g: LinearBooleanFunction) -> dict[str, Any]:
    return {"c": g.c, "a": g.a_bits}


def query_log_record(log: QueryLog) -> dict[str, Any]:
    return {"count": log.count, "indices": list(log.indices), "answers": list(log.answers)}


def dj_record(n: int, res: DJResult, full_trace: bool = False) -> dict[str, Any]:
    return {
        "n": n,
        "verdict": res.verdict.value,
        "queries_used": res.queries_used,
        "final_allzero_probability": res.final_allzero_probability,
        "allzero_amplitude": complex_pair(res.allzero_amplitude),
        "all_separable": res.trace.all_separable,
        "trace": trace_record(res.trace, full_trace),
    }


def simon_record(n: int, period: int, res: SimonResult) -> dict[str, Any]:
    return {
        "n": n,
        "period": to_bits(period, n),
        "recovered_a": None if res.recovered_a is None else to_bits(res.recovered_a, n),
        "success": res.success,
        "rounds_used": res.rounds_used,
        "collected_ys": [to_bits(y, n) for y in res.collected_ys],
        "trace": trace_record(res.trace),
    }


def grover_record(n: int, marked: Iterable[int], res: GroverResult) -> dict[str, Any]:
    return {
        "n": n,
        "marked": sorted(marked),
        "iterations": res.iterations,
        "measured": res.measured,
        "measured_bits": to_bits(res.measured, n),
        "success": res.success,
        "success_probability": res.success_probability,
        "trace": trace_record(res.trace),
    }


def verification_record(r: VerificationReport) -> dict[str, Any]:
    return {
        "proposition": r.proposition,
        "n": r.n,
        "population": r.population,
        "passed": r.passed,
        "verified": r.verified,
        "counterexamples": list(r.counterexamples),
        "stats": r.stats,
    }


def envelope(config: dict[str, Any], result: Any) -> dict[str, Any]:
    return {"version": __version__, "config": config, "result": result}


def dumps_json(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _flatten(prefix: str, value: Any, out: dict[str, Any]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            out[prefix] = ";".join(str(v) for v in value)
        else:
            out[prefix] = len(value)
    else:
        out[prefix] = value


def dumps_tsv(rows: list[dict[str, Any]]) -> str:
    """One header line plus one line per row; nested fields become dotted columns."""
    flat = []
    for row in rows:
        d: dict[str, Any] = {}
        _flatten("", row, d)
        flat.append(d)
    columns: list[str] = []
    for d in flat:
        for k in d:
            if k not in columns:
                columns.append(k)
    lines = ["\t".join(columns)]
    for d in flat:
        lines.append("\t".join("" if d.get(c) is None else str(d.get(c)) for c in columns))
    return "\n".join(lines) + "\n"
