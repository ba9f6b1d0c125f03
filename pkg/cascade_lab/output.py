"""
Result files.

Every file is written to a temporary sibling and renamed into place, so a
reader never sees a half-written result. Numbers are formatted with a
fixed number of significant digits; identical results give
byte-identical files.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

from pydantic import BaseModel, ValidationError

from .errors import InputError, ParseError
from .experiments.analysis import UtilityParams, point_utility
from .experiments.results import SweepPoint, SweepResult
from .schemas import SWEEP_CSV_HEADER, RunSummary, SweepRow
from .strategies import StrategyName

PathLike = Union[str, Path]


def _format(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_atomic(path: PathLike, text: str) -> Path:
    """Write `text` to `path` through a temporary file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path: PathLike, data: Union[Dict[str, Any], BaseModel]) -> Path:
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    return write_atomic(path, json.dumps(data, indent=2, sort_keys=False) + "\n")


def write_rows(path: PathLike, header: Sequence[str], rows: Iterable[BaseModel]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        values = row.model_dump()
        writer.writerow([_format(values[name]) for name in header])
    return write_atomic(path, buffer.getvalue())


def sweep_rows(sweep: SweepResult, utility: UtilityParams) -> List[SweepRow]:
    """Rows in grid order, strategies in sweep order within each p."""
    order = {label: i for i, label in enumerate(sweep.labels())}
    points = sorted(sweep.points, key=lambda pt: (pt.p, order[pt.label]))
    return [
        SweepRow(
            p=pt.p,
            strategy=pt.label,
            median=pt.median,
            mean=pt.mean,
            se=pt.se,
            cost_steps=pt.cost_steps,
            utility=point_utility(pt, utility, sweep.n, sweep.k),
        )
        for pt in points
    ]


def write_sweep(
    directory: PathLike,
    sweep: SweepResult,
    utility: UtilityParams,
    summary: RunSummary
) -> List[Path]:
    """sweep.csv plus sweep.json (summary, network and strategy table)."""
    directory = Path(directory)
    csv_path = write_rows(directory / "sweep.csv", SWEEP_CSV_HEADER, sweep_rows(sweep, utility))
    summary.results.setdefault("sweep", sweep.describe())
    summary.results.setdefault("strategies", [
        {"label": label, "strategy": sweep.strategy_of(label).value, "M": sweep.points_for(label)[0].mass}
        for label in sweep.labels()
    ])
    json_path = write_json(directory / "sweep.json", summary)
    return [csv_path, json_path]


def read_sweep_csv(csv_path: PathLike, json_path: PathLike) -> SweepResult:
    """
    Rebuild a SweepResult from sweep.csv and its sweep.json.

    Raises:
        ParseError: header or a row does not match the sweep schema
    """
    with open(json_path, "r", encoding="utf-8") as f:
        summary = json.load(f)
    results = summary.get("results", {})
    described = results.get("sweep", {})
    strategies = {s["label"]: s for s in results.get("strategies", [])}
    if "n" not in described:
        raise InputError(f"{json_path} does not describe a sweep (no results.sweep.n)")

    points: List[SweepPoint] = []
    with open(csv_path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != SWEEP_CSV_HEADER:
            raise ParseError(f"expected header {','.join(SWEEP_CSV_HEADER)}, got {header}", 1)
        for line_number, values in enumerate(reader, start=2):
            try:
                row = SweepRow(**dict(zip(SWEEP_CSV_HEADER, values)))
            except ValidationError as e:
                raise ParseError(f"bad sweep row: {e.errors()[0]['msg']}", line_number) from None
            info = strategies.get(row.strategy, {})
            points.append(SweepPoint(
                p=row.p,
                label=row.strategy,
                strategy=StrategyName(info.get("strategy", row.strategy)),
                median=row.median,
                mean=row.mean,
                se=row.se,
                cost_steps=row.cost_steps,
                mass=info.get("M"),
            ))

    ps = tuple(sorted({pt.p for pt in points}))
    return SweepResult(
        ps=ps,
        points=points,
        k=int(described.get("k", summary.get("config", {}).get("k", 1))),
        n=int(described["n"]),
        edge_count=int(described.get("edge_count", 0)),
        trials=int(described.get("trials", 0)),
        rng_seed=int(described.get("rng_seed", summary.get("rng_seed", 0))),
        network=described.get("network", {}),
    )
