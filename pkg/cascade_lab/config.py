"""
Experiment configuration.

One JSON file describes a run; `--set dotted.key=value` flags override
single entries. Field-level checks are done by pydantic, cross-field
checks by `ExperimentConfig.validate()`; both are reported together as
one ConfigError listing every problem.

Example:
    {
      "config_version": 1,
      "network": {"source": "generator", "generator": {"family": "er", "n": 2000, "er_mean_degree": 3}},
      "grid": {"kind": "critical"},
      "k": 3,
      "strategies": [{"name": "hill_climb"}, {"name": "random"}, {"name": "local", "M": 100}],
      "trials": 20000,
      "rng_seed": 7,
      "output_dir": "results/er2000"
    }
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .cascade import Picture
from .errors import ConfigError
from .experiments.analysis import DEFAULT_THRESHOLD_FRACTION, UtilityParams, WidthMeasure
from .experiments.grid import COARSE_STEP, CRITICAL_HALF_WIDTH, FINE_STEP, PGrid
from .experiments.oracle import DEFAULT_PROBABILITIES
from .experiments.sweep import StrategySpec
from .generators import GeneratorSpec
from .graph import Graph
from .percolation import critical_point_from_degrees
from .strategies import DEFAULT_MASS, DEFAULT_TRIALS_PER_EVAL, StrategyName

CONFIG_VERSION = 1


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class NetworkSource(str, Enum):
    GENERATOR = "generator"
    EDGE_LIST = "edge_list"


class NetworkConfig(_Section):
    source: NetworkSource = NetworkSource.GENERATOR
    generator: GeneratorSpec = Field(default_factory=GeneratorSpec)
    edge_list: Optional[str] = None
    dominant_component: bool = True


class GridKind(str, Enum):
    UNIFORM = "uniform"
    REFINED = "refined"
    CRITICAL = "critical"
    EXPLICIT = "explicit"


class GridConfig(_Section):
    """
    uniform: `step`; refined: coarse/fine steps on [fine_lo, fine_hi];
    critical: fine steps within `half_width` of p_c (from the network's
    degrees unless `p_c` is given); explicit: `points`.
    """
    kind: GridKind = GridKind.CRITICAL
    step: float = Field(COARSE_STEP, gt=0, le=1)
    coarse_step: float = Field(COARSE_STEP, gt=0, le=1)
    fine_step: float = Field(FINE_STEP, gt=0, le=1)
    fine_lo: float = 0.0
    fine_hi: float = 1.0
    half_width: float = Field(CRITICAL_HALF_WIDTH, ge=0)
    p_c: Optional[float] = Field(None, ge=0, le=1)
    points: List[float] = Field(default_factory=list)

    def build(self, g: Optional[Graph] = None) -> PGrid:
        if self.kind == GridKind.UNIFORM:
            return PGrid.uniform(self.step)
        if self.kind == GridKind.REFINED:
            return PGrid.refined(self.coarse_step, self.fine_step, self.fine_lo, self.fine_hi)
        if self.kind == GridKind.EXPLICIT:
            return PGrid.explicit(self.points)
        p_c = self.p_c
        if p_c is None:
            if g is None:
                raise ConfigError("critical grid needs a network or an explicit grid.p_c")
            p_c = critical_point_from_degrees(g.degrees)
        return PGrid.around_critical(p_c, self.half_width, self.fine_step, self.coarse_step)


class StrategyConfig(_Section):
    name: StrategyName
    label: Optional[str] = None
    M: Optional[int] = Field(None, ge=1)
    trials_per_eval: Optional[int] = Field(None, ge=1)


def _default_strategies() -> List[StrategyConfig]:
    return [
        StrategyConfig(name=StrategyName.HILL_CLIMB),
        StrategyConfig(name=StrategyName.RANDOM),
        StrategyConfig(name=StrategyName.LOCAL, M=DEFAULT_MASS),
    ]


class CascadeConfig(_Section):
    """Either noise_sigma or noise_variance (sigma = sqrt(variance)) sets the per-edge noise."""
    picture: Picture = Picture.STATIC
    noise_sigma: float = Field(0.0, ge=0)
    noise_variance: Optional[float] = Field(None, ge=0)

    @property
    def sigma(self) -> float:
        if self.noise_variance is not None:
            return math.sqrt(self.noise_variance)
        return self.noise_sigma


class WidthConfig(_Section):
    sizes: List[int] = Field(default_factory=lambda: [500, 1000, 2000, 4000])
    instances: int = Field(3, ge=1)
    threshold_fraction: float = Field(DEFAULT_THRESHOLD_FRACTION, gt=0, le=1)
    measure: WidthMeasure = WidthMeasure.THRESHOLD  # threshold, std or fwhm of the gain curve
    size_variable: Literal["nodes", "edges"] = "nodes"
    utility: bool = True  # also measure the positive-utility width


class MRatioConfig(_Section):
    M_values: List[int] = Field(default_factory=lambda: [25, 50, 100])


class OracleConfig(_Section):
    graphs: int = Field(20, ge=1)
    max_nodes: int = Field(10, ge=2)
    max_edges: int = Field(14, ge=1, le=25)
    probabilities: List[float] = Field(default_factory=lambda: list(DEFAULT_PROBABILITIES))
    trials: int = Field(50_000, ge=1)
    max_seeds: int = Field(3, ge=1)
    picture_equivalence: bool = False


class FitConfig(_Section):
    input: Optional[str] = None  # widths.csv written by `width`
    size_variable: Literal["nodes", "edges"] = "nodes"


class ExperimentConfig(_Section):
    """Everything one CLI run needs; echoed into every JSON output."""
    config_version: int = CONFIG_VERSION
    network: NetworkConfig = Field(default_factory=NetworkConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    k: int = Field(3, ge=1)
    strategies: List[StrategyConfig] = Field(default_factory=_default_strategies)
    trials: int = Field(20_000, ge=1)
    trials_per_eval: int = Field(DEFAULT_TRIALS_PER_EVAL, ge=1)
    cascade: CascadeConfig = Field(default_factory=CascadeConfig)
    utility: UtilityParams = Field(default_factory=UtilityParams)
    width: WidthConfig = Field(default_factory=WidthConfig)
    mratio: MRatioConfig = Field(default_factory=MRatioConfig)
    oracle: OracleConfig = Field(default_factory=OracleConfig)
    fit: FitConfig = Field(default_factory=FitConfig)
    input_dir: Optional[str] = None  # sweep output read by `utility`
    rng_seed: int = Field(0, ge=0, lt=2 ** 64)
    output_dir: str = "results"
    workers: Optional[int] = Field(None, ge=1)

    def validate(self) -> List[str]:
        """Cross-field problems; empty when the config is usable."""
        issues = []

        if self.config_version != CONFIG_VERSION:
            issues.append(f"config_version {self.config_version} is not supported (expected {CONFIG_VERSION})")

        net = self.network
        if net.source == NetworkSource.EDGE_LIST:
            if not net.edge_list:
                issues.append("network.edge_list is required when network.source is 'edge_list'")
            elif not Path(net.edge_list).is_file():
                issues.append(f"network.edge_list {net.edge_list} does not exist")
        elif self.k > net.generator.n:
            issues.append(f"k={self.k} exceeds network.generator.n={net.generator.n}")

        grid = self.grid
        if grid.kind == GridKind.REFINED:
            if grid.fine_step > grid.coarse_step:
                issues.append("grid.fine_step must not exceed grid.coarse_step")
            if grid.fine_lo > grid.fine_hi:
                issues.append("grid.fine_lo must not exceed grid.fine_hi")
        elif grid.kind == GridKind.EXPLICIT:
            pts = grid.points
            if not pts:
                issues.append("grid.points is empty")
            elif any(not 0 <= p <= 1 for p in pts) or any(b <= a for a, b in zip(pts, pts[1:])):
                issues.append("grid.points must be strictly increasing values in [0, 1]")

        labels = [s.label or s.name.value for s in self.strategies]
        if not labels:
            issues.append("strategies is empty")
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            issues.append(f"strategy labels must be distinct, repeated: {', '.join(duplicates)}")
        for s in self.strategies:
            if s.M is not None and s.name != StrategyName.LOCAL:
                issues.append(f"strategy {s.label or s.name.value}: M applies to local only")

        if self.cascade.noise_variance is not None and self.cascade.noise_sigma > 0:
            issues.append("set cascade.noise_sigma or cascade.noise_variance, not both")

        if any(n < 2 for n in self.width.sizes):
            issues.append("width.sizes must all be at least 2")
        if any(m < 1 for m in self.mratio.M_values):
            issues.append("mratio.M_values must all be at least 1")
        if any(not 0 <= p <= 1 for p in self.oracle.probabilities):
            issues.append("oracle.probabilities must lie in [0, 1]")

        if self.fit.input and not Path(self.fit.input).is_file():
            issues.append(f"fit.input {self.fit.input} does not exist")
        if self.input_dir and not Path(self.input_dir).is_dir():
            issues.append(f"input_dir {self.input_dir} does not exist")

        return issues

    def strategy_specs(self) -> List[StrategySpec]:
        return [
            StrategySpec(
                name=s.name,
                label=s.label,
                mass=s.M if s.M is not None else (DEFAULT_MASS if s.name == StrategyName.LOCAL else None),
                trials_per_eval=s.trials_per_eval or self.trials_per_eval,
            )
            for s in self.strategies
        ]

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def _format_validation_error(error: ValidationError) -> List[str]:
    issues = []
    for item in error.errors():
        where = ".".join(str(part) for part in item["loc"]) or "config"
        issues.append(f"{where}: {item['msg']}")
    return issues


def parse_override(text: str) -> tuple:
    """'a.b=value' -> (['a', 'b'], value); value parsed as JSON, else kept as a string."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    path = [part for part in key.strip().split(".") if part]
    if not path:
        raise ConfigError(f"override {text!r} has an empty key")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path, value


def apply_override(data: Dict[str, Any], path: Sequence[str], value: Any) -> None:
    """Set data[path[0]][path[1]]... = value, creating dicts and indexing lists as needed."""
    node: Any = data
    for part in path[:-1]:
        if isinstance(node, list):
            node = node[int(part)]
            continue
        if not isinstance(node.get(part), (dict, list)):
            node[part] = {}
        node = node[part]
    if isinstance(node, list):
        node[int(path[-1])] = value
    else:
        node[path[-1]] = value


def build_config(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate a raw config dict; raises ConfigError listing every problem."""
    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        issues = _format_validation_error(e)
        raise ConfigError(f"invalid configuration ({len(issues)} problems)", issues) from None
    issues = config.validate()
    if issues:
        raise ConfigError(f"invalid configuration ({len(issues)} problems)", issues)
    return config


def load_config(
    path: Optional[str] = None,
    overrides: Sequence[str] = (),
    **shortcuts: Any
) -> ExperimentConfig:
    """
    Read a JSON config file (or start from defaults), apply `--set`
    overrides, then shortcut flags such as rng_seed or output_dir.
    """
    data: Dict[str, Any] = {}
    if path:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"config file {path} not found") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file {path} is not valid JSON: {e}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")

    for text in overrides:
        key_path, value = parse_override(text)
        try:
            apply_override(data, key_path, value)
        except (IndexError, ValueError, AttributeError):
            raise ConfigError(f"cannot apply override {text!r}") from None

    for key, value in shortcuts.items():
        if value is not None:
            data[key] = value

    return build_config(data)


def get_config(**overrides: Any) -> ExperimentConfig:
    """Default configuration with keyword overrides (validated)."""
    return build_config(overrides)
