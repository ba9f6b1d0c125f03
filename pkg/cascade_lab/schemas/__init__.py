"""
Output schemas.

Rows of the CSV outputs and the envelope of every JSON summary. Column
order of each CSV follows the field order of its row model.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class SweepRow(BaseModel):
    """One line of sweep.csv."""
    p: float = Field(ge=0, le=1)
    strategy: str
    median: int = Field(ge=0)
    mean: float = Field(ge=0)
    se: float = Field(ge=0)
    cost_steps: int = Field(ge=0)
    utility: float


class WidthRow(BaseModel):
    """One line of widths.csv."""
    n: int
    size: float
    width: float = Field(ge=0)
    width_std: float = Field(ge=0)
    utility_width: Optional[float] = None
    utility_width_std: Optional[float] = None
    instances: int = Field(ge=1)


class MRatioRow(BaseModel):
    """One line of mratio.csv."""
    M: int = Field(ge=1)
    ratio: float


def csv_header(row_model: type) -> List[str]:
    return list(row_model.model_fields)


SWEEP_CSV_HEADER = csv_header(SweepRow)
WIDTH_CSV_HEADER = csv_header(WidthRow)
MRATIO_CSV_HEADER = csv_header(MRatioRow)


class RunSummary(BaseModel):
    """Envelope of every JSON output: what ran, with which config and seed, and what it found."""
    command: str
    rng_seed: int
    config: Dict[str, Any]
    results: Dict[str, Any] = Field(default_factory=dict)
    session_id: Optional[str] = None
    duration_ms: Optional[int] = None


__all__ = [
    "SweepRow",
    "WidthRow",
    "MRatioRow",
    "RunSummary",
    "csv_header",
    "SWEEP_CSV_HEADER",
    "WIDTH_CSV_HEADER",
    "MRATIO_CSV_HEADER",
]
