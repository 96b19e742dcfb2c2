"""CSV/JSON readers and writers.

Numbers go out with 17 significant digits. Harness outputs carry the resolved
run configuration: as a ``config`` key in JSON, as a leading ``# config:``
comment line in CSV.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .approx_asymptotics import SweepRecord
from .rational_fit import DiscardedPole, InvalidInputError, PolePair, PoleSet, SampleGrid

GRID_HEADER = ["x", "re_f", "im_f"]
SWEEP_HEADER = ["tolerance", "n_pairs", "epsilon", "amplitude_ratio", "p1_distance", "relative_error"]


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def _config_line(config: dict | None) -> list[str]:
    if config is None:
        return []
    return ["# config: " + json.dumps(config, sort_keys=True)]


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence], config: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = _config_line(config) + [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_json(path, payload: dict, config: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if config is not None:
        payload = {"config": config, **payload}
    path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    return path


def _data_lines(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    return [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def write_grid_csv(path, grid: SampleGrid, config: dict | None = None) -> Path:
    rows = zip(grid.points, grid.values.real, grid.values.imag)
    return write_csv(path, GRID_HEADER, rows, config)


def read_grid_csv(path) -> SampleGrid:
    lines = _data_lines(path)
    reader = csv.DictReader(lines)
    if reader.fieldnames != GRID_HEADER:
        raise InvalidInputError(f"expected header {','.join(GRID_HEADER)}, got {reader.fieldnames}")
    x, f = [], []
    for row in reader:
        x.append(float(row["x"]))
        f.append(complex(float(row["re_f"]), float(row["im_f"])))
    return SampleGrid(np.array(x), np.array(f))


def _c(prefix: str, z: complex) -> dict:
    return {f"{prefix}_re": float(z.real), f"{prefix}_im": float(z.imag)}


def pole_set_to_dict(pole_set: PoleSet) -> dict:
    return {
        "pairs": [
            {"pair_index": p.pair_index, **_c("pole", p.pole), **_c("residue", p.residue)}
            for p in pole_set.pairs
        ],
        "discarded": [
            {**_c("pole", d.pole), **_c("residue", d.residue), "reason": d.reason}
            for d in pole_set.discarded
        ],
    }


def pole_set_from_dict(data: dict) -> PoleSet:
    pairs = tuple(
        PolePair(
            complex(d["pole_re"], d["pole_im"]),
            complex(d["residue_re"], d["residue_im"]),
            int(d["pair_index"]),
        )
        for d in data["pairs"]
    )
    discarded = tuple(
        DiscardedPole(
            complex(d["pole_re"], d["pole_im"]), complex(d["residue_re"], d["residue_im"]), d["reason"]
        )
        for d in data.get("discarded", [])
    )
    return PoleSet(pairs, discarded)


def write_pole_set_json(path, pole_set: PoleSet, config: dict | None = None, extra: dict | None = None) -> Path:
    payload = pole_set_to_dict(pole_set)
    if extra:
        payload.update(extra)
    return write_json(path, payload, config)


def read_pole_set_json(path) -> PoleSet:
    return pole_set_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_sweep_csv(path, records: Sequence[SweepRecord], config: dict | None = None) -> Path:
    rows = (
        (r.tolerance, r.n_pairs, r.epsilon, r.amplitude_ratio, r.p1_distance, r.relative_error)
        for r in records
    )
    return write_csv(path, SWEEP_HEADER, rows, config)


def read_sweep_csv(path) -> list[SweepRecord]:
    out = []
    for row in csv.DictReader(_data_lines(path)):
        out.append(
            SweepRecord(
                tolerance=float(row["tolerance"]),
                n_pairs=int(row["n_pairs"]),
                epsilon=float(row["epsilon"]),
                amplitude_ratio=float(row["amplitude_ratio"]),
                p1_distance=float(row["p1_distance"]),
                relative_error=float(row["relative_error"]),
            )
        )
    return out


def write_traces_csv(path, x, u_exp, u_hat_exp, per_pair: np.ndarray, config: dict | None = None) -> Path:
    header = ["x", "u_exp", "u_hat_exp"] + [f"pair_{k + 1}" for k in range(per_pair.shape[0])]
    rows = (
        (x[i], u_exp[i], u_hat_exp[i], *per_pair[:, i]) for i in range(len(x))
    )
    return write_csv(path, header, rows, config)


def table3_payload(direct: PoleSet, squared: PoleSet, n_pairs: int = 6) -> dict:
    """Two columns of (pole, |residue|) per pair index.

    ``residue_abs_sqrt`` is the square root of |residue|, the scale in which the
    published comparison lists its magnitudes.
    """

    def column(ps: PoleSet):
        return [
            {
                "pair_index": p.pair_index,
                **_c("pole", p.pole),
                "residue_abs": abs(p.residue),
                "residue_abs_sqrt": abs(p.residue) ** 0.5,
            }
            for p in ps.pairs[:n_pairs]
        ]

    return {"direct": column(direct), "squared": column(squared)}
