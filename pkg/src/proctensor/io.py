"""File formats: process-spec documents, serialized Choi states, reports, CSV.

Process specs are JSON; complex matrices are nested arrays of [re, im]
pairs in the package's big-endian index convention. Choi states use a plain
text format: one header line with the step count, dimension and slot
labels, then one matrix row per line as whitespace-separated re/im pairs.
Numeric output uses shortest-roundtrip decimals for byte-stable files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .linalg import DensityMatrix
from .metrics import BoundAudit, CorrelationReport
from .processes import CausalityReport, CircuitProcessSpec, _random_env

CHOI_MAGIC = "proctensor-choi"


class SpecFileError(ValueError):
    """A process-spec file is malformed; the message names the field."""


def fmt(x: float) -> str:
    """Shortest decimal that round-trips the double."""
    return repr(float(x))


def complex_to_pairs(m: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, complex)]


def pairs_to_complex(data: Any, fieldname: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"field '{fieldname}' is not a nested [re, im] array") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise SpecFileError(
            f"field '{fieldname}' must be a square matrix of [re, im] pairs, "
            f"got shape {arr.shape}"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def _require(doc: dict, key: str, kind: type) -> Any:
    if key not in doc:
        raise SpecFileError(f"missing required field '{key}'")
    value = doc[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise SpecFileError(f"field '{key}' must be an integer, got {value!r}")
    return value


def load_process_spec(path: str | Path) -> CircuitProcessSpec:
    """Parse a JSON process-spec document into a circuit description."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecFileError("top-level document must be an object")
    n = _require(doc, "n", int)
    d = _require(doc, "d", int)
    d_env = _require(doc, "d_env", int)
    if "env" in doc:
        mat = pairs_to_complex(doc["env"], "env")
        if mat.shape[0] != d_env:
            raise SpecFileError(f"field 'env' has dimension {mat.shape[0]}, expected {d_env}")
        try:
            env = DensityMatrix(mat, (d_env,))
        except Exception as exc:
            raise SpecFileError(f"field 'env' is not a valid density matrix: {exc}") from exc
    else:
        env_init = doc.get("env_init", "maximally-mixed")
        if env_init not in ("maximally-mixed", "pure-ground", "seeded-random"):
            raise SpecFileError(f"field 'env_init' has unknown value {env_init!r}")
        rng = np.random.default_rng(int(doc.get("seed", 0)))
        env = _random_env(rng, d_env, env_init)
    raw_us = _require(doc, "unitaries", list)
    if not isinstance(raw_us, list) or len(raw_us) != n:
        raise SpecFileError(f"field 'unitaries' must list exactly n = {n} matrices")
    us = tuple(pairs_to_complex(u, f"unitaries[{j}]") for j, u in enumerate(raw_us))
    try:
        return CircuitProcessSpec(n=n, d=d, env_state=env, unitaries=us)
    except ValueError as exc:
        raise SpecFileError(f"field 'unitaries': {exc}") from exc


def dump_process_spec(spec: CircuitProcessSpec, path: str | Path) -> None:
    doc = {
        "n": spec.n,
        "d": spec.d,
        "d_env": spec.d_env,
        "env": complex_to_pairs(spec.env_state.mat),
        "unitaries": [complex_to_pairs(u) for u in spec.unitaries],
    }
    Path(path).write_text(json.dumps(doc) + "\n")


def save_choi(state: DensityMatrix, path: str | Path) -> None:
    """Write a 2n-slot Choi state in the text interchange format."""
    k = state.num_subsystems
    n = k // 2
    labels = []
    for m in range(k):
        labels.append(f"i{m // 2}" if m % 2 == 0 else f"o{(m + 1) // 2}")
    lines = [f"{CHOI_MAGIC} n={n} d={state.dims[0]} slots={','.join(labels)}"]
    for row in state.mat:
        lines.append(" ".join(f"{fmt(z.real)} {fmt(z.imag)}" for z in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_choi(path: str | Path) -> DensityMatrix:
    """Read a Choi state written by ``save_choi``."""
    text = Path(path).read_text().strip().splitlines()
    if not text or not text[0].startswith(CHOI_MAGIC):
        raise SpecFileError(f"{path} is not a serialized Choi file")
    header = dict(tok.split("=", 1) for tok in text[0].split()[1:])
    try:
        n = int(header["n"])
        d = int(header["d"])
    except (KeyError, ValueError) as exc:
        raise SpecFileError(f"malformed Choi header: {text[0]!r}") from exc
    dim = d ** (2 * n)
    if len(text) - 1 != dim:
        raise SpecFileError(f"expected {dim} matrix rows, found {len(text) - 1}")
    mat = np.empty((dim, dim), dtype=complex)
    for i, line in enumerate(text[1:]):
        vals = [float(tok) for tok in line.split()]
        if len(vals) != 2 * dim:
            raise SpecFileError(f"row {i} has {len(vals)} numbers, expected {2 * dim}")
        mat[i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    return DensityMatrix(mat, (d,) * (2 * n))


def report_lines(report: CorrelationReport) -> list[str]:
    lines = [
        f"n = {report.n}",
        f"d = {report.d}",
        f"total = {fmt(report.total)}",
    ]
    for j, (m, c) in enumerate(zip(report.step_markov, report.step_complement), start=1):
        lines.append(f"step_markov[{j}] = {fmt(m)}")
        lines.append(f"step_complement[{j}] = {fmt(c)}")
    lines += [
        f"markov = {fmt(report.markov)}",
        f"non_markov = {fmt(report.non_markov)}",
        f"additivity_residual = {fmt(report.additivity_residual)}",
    ]
    return lines


def audit_lines(audit: BoundAudit) -> list[str]:
    lines = []
    for k, s in enumerate(audit.unordered_slack, start=1):
        lines.append(f"unordered_slack[{k}] = {fmt(s)}")
    for k, s in enumerate(audit.ordered_slack, start=1):
        lines.append(f"ordered_slack[{k}] = {fmt(s)}")
    lines += [
        f"max_nonmarkov_slack = {fmt(audit.max_nonmarkov_slack)}",
        f"markov_tradeoff_slack = {fmt(audit.markov_tradeoff_slack)}",
        f"total_tradeoff_slack = {fmt(audit.total_tradeoff_slack)}",
    ]
    if audit.two_step_slacks is not None:
        lines.append(f"two_step_slack_first = {fmt(audit.two_step_slacks[0])}")
        lines.append(f"two_step_slack_second = {fmt(audit.two_step_slacks[1])}")
    lines.append(f"bounds_pass = {audit.passed}")
    return lines


def causality_lines(report: CausalityReport) -> list[str]:
    lines = []
    for j, res in enumerate(report.residuals, start=1):
        lines.append(f"causality_residual[{j}] = {fmt(res)}")
    lines.append(f"causality_base_residual = {fmt(report.base_residual)}")
    lines.append(f"causality_pass = {report.passed}")
    return lines


def write_csv(path: str | Path, header: Iterable[str], rows: Iterable[Iterable[float]]) -> None:
    """Comma-delimited, LF line endings, shortest-roundtrip decimals."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")
