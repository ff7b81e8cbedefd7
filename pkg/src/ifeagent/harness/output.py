"""CSV tables and binary PGM heatmaps for experiment outputs.

Heatmap mapping: ``gray = round_half_up(255 * (1 - p / p_max))`` where
``p_max`` is the largest value in the figure, so darker means more credence.
"""

import csv
import math

import numpy as np

from ifeagent.agent import StepRecord
from ifeagent.world import Action, Sensation

TRACE_HEAD = ["t", "psi_true", "s", "a", "F_chosen"]
SIMPLEX_TOL = 1e-9


def _fmt(x):
    return format(float(x), ".17g")


def _open(path, mode):
    try:
        return open(path, mode, newline="" if "b" not in mode else None)
    except OSError as e:
        raise OSError(f"cannot open {path}: {e.strerror or e}") from e


def trace_header(n):
    return TRACE_HEAD + [f"belief_{i}" for i in range(n)] + [f"exact_{i}" for i in range(n)]


def write_trace_csv(trace, path):
    n = trace.world.n
    with _open(path, "w") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(trace_header(n))
        for r in trace.records:
            exact = [""] * n if r.exact is None else [_fmt(x) for x in r.exact]
            w.writerow(
                [r.t, r.psi_true, int(r.s), int(r.a), _fmt(r.free_energy_chosen)]
                + [_fmt(x) for x in r.belief]
                + exact
            )


def read_trace_csv(path):
    """Parse a trace file back into a list of ``StepRecord``."""
    with _open(path, "r") as f:
        rows = list(csv.reader(f))
    header, body = rows[0], rows[1:]
    n = (len(header) - len(TRACE_HEAD)) // 2
    records = []
    for row in body:
        belief = np.array([float(x) for x in row[5 : 5 + n]])
        tail = row[5 + n : 5 + 2 * n]
        exact = None if all(x == "" for x in tail) else np.array([float(x) for x in tail])
        records.append(
            StepRecord(
                t=int(row[0]),
                psi_true=int(row[1]),
                s=Sensation(int(row[2])),
                a=Action(int(row[3])),
                free_energy_chosen=float(row[4]),
                belief=belief,
                exact=exact,
            )
        )
    return records


def _check_simplex(values, what):
    if any(v < 0 for v in values) or abs(math.fsum(values) - 1.0) > SIMPLEX_TOL:
        raise ValueError(f"{what} is not a probability vector")


def validate_trace_csv(path, n):
    """Raise ``ValueError`` unless ``path`` is a well-formed trace for ``n`` cells."""
    with _open(path, "r") as f:
        rows = list(csv.reader(f))
    if not rows or rows[0] != trace_header(n):
        raise ValueError(f"{path}: bad header")
    for i, row in enumerate(rows[1:]):
        if len(row) != 5 + 2 * n:
            raise ValueError(f"{path}: row {i} has {len(row)} columns, want {5 + 2 * n}")
        if int(row[0]) != i:
            raise ValueError(f"{path}: t column not consecutive at row {i}")
        if not 0 <= int(row[1]) < n or row[2] not in ("0", "1") or row[3] not in ("-1", "1"):
            raise ValueError(f"{path}: row {i} has an invalid position, sensation or action")
        _check_simplex([float(x) for x in row[5 : 5 + n]], f"{path}: belief at row {i}")
        tail = row[5 + n :]
        if any(x != "" for x in tail):
            _check_simplex([float(x) for x in tail], f"{path}: exact at row {i}")


def write_profile_csv(profiles, path):
    """``profiles`` maps sweep value -> LocationProfile."""
    keys = list(profiles)
    n = len(profiles[keys[0]].mean)
    with _open(path, "w") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["cell"] + [c for k in keys for c in (f"mean_{k}", f"std_{k}")])
        for cell in range(n):
            row = [cell]
            for k in keys:
                row += [_fmt(profiles[k].mean[cell]), _fmt(profiles[k].std[cell])]
            w.writerow(row)


def read_profile_csv(path):
    """Return ``{sweep: (mean, std)}`` arrays."""
    with _open(path, "r") as f:
        rows = list(csv.reader(f))
    header = rows[0]
    data = np.array([[float(x) for x in row] for row in rows[1:]])
    out = {}
    for j in range(1, len(header), 2):
        k = int(header[j].split("_", 1)[1])
        out[k] = (data[:, j], data[:, j + 1])
    return out


def validate_profile_csv(path, n):
    with _open(path, "r") as f:
        rows = list(csv.reader(f))
    header = rows[0]
    if header[0] != "cell" or len(header) % 2 != 1 or len(header) < 3:
        raise ValueError(f"{path}: bad header")
    if [int(r[0]) for r in rows[1:]] != list(range(n)):
        raise ValueError(f"{path}: cell column must be 0..{n - 1}")
    data = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
    for j in range(0, data.shape[1], 2):
        _check_simplex(list(data[:, j]), f"{path}: column {header[j + 1]}")
        if np.any(data[:, j + 1] < 0):
            raise ValueError(f"{path}: negative std in {header[j + 2]}")


def write_kl_csv(comparison, path):
    keys = list(comparison.beliefs)
    with _open(path, "w") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["t"] + [f"kl_{k}" for k in keys] + [f"H_{k}" for k in keys] + ["H_exact"])
        for t in range(len(comparison.exact)):
            w.writerow(
                [t]
                + [_fmt(comparison.kl[k][t]) for k in keys]
                + [_fmt(comparison.entropy[k][t]) for k in keys]
                + [_fmt(comparison.exact_entropy[t])]
            )


def heatmap_pixels(matrix):
    m = np.asarray(matrix, dtype=float)
    p_max = m.max()
    if not p_max > 0:
        raise ValueError("heatmap needs at least one positive entry")
    return np.floor(255.0 * (1.0 - m / p_max) + 0.5).astype(np.uint8)


def render_heatmap(matrix, path):
    """Write ``matrix`` (one row per time step, one column per cell) as binary PGM."""
    pixels = heatmap_pixels(matrix)
    rows, cols = pixels.shape
    with _open(path, "wb") as f:
        f.write(f"P5 {cols} {rows} 255\n".encode("ascii"))
        f.write(pixels.tobytes())


def read_pgm(path):
    with _open(path, "rb") as f:
        data = f.read()
    header, _, body = data.partition(b"\n")
    magic, cols, rows, maxval = header.split()
    if magic != b"P5" or maxval != b"255":
        raise ValueError(f"{path}: not an 8-bit binary PGM")
    return np.frombuffer(body, dtype=np.uint8).reshape(int(rows), int(cols))
