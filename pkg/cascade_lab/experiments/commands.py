"""One Experiment per CLI subcommand."""

import csv
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..config import GridKind, NetworkSource
from ..errors import ConfigError, FitError, InputError, UndefinedTransitionError
from ..generators import generate, mean_degree_of
from ..graph import Graph, clustering_coefficient, connected_components, dominant_component
from ..ingest import ingest_edge_list, write_edge_list
from ..output import read_sweep_csv, write_rows, write_sweep
from ..percolation import critical_point_from_degrees
from ..schemas import MRATIO_CSV_HEADER, WIDTH_CSV_HEADER, MRatioRow, WidthRow
from ..strategies import StrategyName
from .analysis import (
    expected_added_utility_over_prior,
    fit_power_law,
    gain_curve_fwhm,
    gain_curve_std_width,
    optimization_region_width,
    peak_location,
    point_time,
    positive_utility_width,
    utility_condition,
)
from .base import Experiment
from .oracle import oracle_agreement_suite, picture_equivalence_suite
from .results import SweepResult
from .sweep import m_robustness_ratio, sweep, width_scan

logger = logging.getLogger(__name__)


def network_statistics(g: Graph) -> Dict[str, Any]:
    degrees = g.degrees
    stats: Dict[str, Any] = {
        "n": g.n,
        "edge_count": g.edge_count,
        "mean_degree": mean_degree_of(g),
        "mean_degree_squared": float((degrees.astype(np.float64) ** 2).mean()) if g.n else 0.0,
        "max_degree": int(degrees.max()) if g.n else 0,
        "components": len(connected_components(g)),
        "clustering": clustering_coefficient(g),
    }
    try:
        stats["p_c"] = critical_point_from_degrees(degrees)
    except UndefinedTransitionError:
        stats["p_c"] = None
    return stats


def _has(sweep_result: SweepResult, strategy: StrategyName) -> bool:
    return any(pt.strategy == strategy for pt in sweep_result.points)


def sweep_analysis(result: SweepResult, config) -> Dict[str, Any]:
    """Widths, peak and utility figures that a sweep supports."""
    analysis: Dict[str, Any] = {}
    if _has(result, StrategyName.RANDOM):
        if _has(result, StrategyName.HILL_CLIMB) and len(result.ps) >= 2:
            analysis["optimization_region_width"] = optimization_region_width(
                result, config.width.threshold_fraction
            )
            analysis["gain_curve_std_width"] = gain_curve_std_width(result)
            analysis["gain_curve_fwhm"] = gain_curve_fwhm(result)
            analysis["peak_p"] = peak_location(result)
            analysis["positive_utility_width"] = positive_utility_width(result, config.utility)
        if len(result.ps) >= 2:
            analysis["expected_added_utility"] = expected_added_utility_over_prior(result, config.utility)
    return analysis


class GenerateExperiment(Experiment):
    command = "generate"
    description = "Generate a synthetic network and write it as an edge list"

    def execute(self) -> Dict[str, Any]:
        net = self.config.network
        if net.source != NetworkSource.GENERATOR:
            raise ConfigError("generate needs network.source = 'generator'")
        g = generate(net.generator)
        self.record_output(write_edge_list(g, self.output_dir / "network.edges"))
        results = {"network": network_statistics(g), "generator": net.generator.model_dump(mode="json")}
        self.write_summary("network.json", results)
        return results


class IngestExperiment(Experiment):
    command = "ingest"
    description = "Clean an edge list, optionally keep its dominant component"

    def execute(self) -> Dict[str, Any]:
        net = self.config.network
        if net.source != NetworkSource.EDGE_LIST or not net.edge_list:
            raise ConfigError("ingest needs network.source = 'edge_list' and network.edge_list")
        ingested = ingest_edge_list(net.edge_list)
        g = ingested.graph
        original_ids = sorted(ingested.id_map, key=ingested.id_map.get)
        if net.dominant_component:
            g, mapping = dominant_component(g)
            original_ids = [original_ids[old] for old in sorted(mapping, key=mapping.get)]

        self.record_output(write_edge_list(g, self.output_dir / "network.edges"))
        results = {
            "cleaning": ingested.report.to_dict(),
            "dominant_component": net.dominant_component,
            "network": network_statistics(g),
            "original_ids": original_ids,
        }
        self.write_summary("ingest.json", results)
        return {key: value for key, value in results.items() if key != "original_ids"}


class SweepExperiment(Experiment):
    command = "sweep"
    description = "Run every strategy across the p grid"

    def execute(self) -> Dict[str, Any]:
        cfg = self.config
        g, descriptor = self.load_network()
        grid = cfg.grid.build(g)
        result = sweep(
            g, grid, cfg.k, cfg.strategy_specs(), cfg.trials,
            rng_seed=cfg.rng_seed,
            noise_sigma=cfg.cascade.sigma,
            picture=cfg.cascade.picture,
            registry=self.registry(),
            workers=cfg.workers,
            network=descriptor,
        )
        analysis = sweep_analysis(result, cfg)
        results = {"grid": grid.construction, "analysis": analysis}
        for path in write_sweep(self.output_dir, result, cfg.utility, self.run_summary(results)):
            self.record_output(path)
        return analysis


class WidthExperiment(Experiment):
    command = "width"
    description = "Optimization-region width across network sizes"

    def execute(self) -> Dict[str, Any]:
        cfg = self.config
        if cfg.network.source != NetworkSource.GENERATOR:
            raise ConfigError("width needs network.source = 'generator' (sizes are generated)")
        explicit_grid = None if cfg.grid.kind == GridKind.CRITICAL and cfg.grid.p_c is None else cfg.grid.build()
        measurements = width_scan(
            cfg.network.generator,
            cfg.width.sizes,
            cfg.width.instances,
            cfg.k,
            cfg.trials,
            rng_seed=cfg.rng_seed,
            strategies=[s for s in cfg.strategy_specs() if s.name != StrategyName.LOCAL],
            grid=explicit_grid,
            threshold_fraction=cfg.width.threshold_fraction,
            measure=cfg.width.measure,
            size_variable=cfg.width.size_variable,
            utility=cfg.utility if cfg.width.utility else None,
            noise_sigma=cfg.cascade.sigma,
            picture=cfg.cascade.picture,
            registry=self.registry(),
            workers=cfg.workers,
        )
        rows = [
            WidthRow(
                n=m.n,
                size=m.size,
                width=m.width,
                width_std=m.width_std,
                utility_width=m.utility_width,
                utility_width_std=m.utility_width_std,
                instances=len(m.widths),
            )
            for m in measurements
        ]
        self.record_output(write_rows(self.output_dir / "widths.csv", WIDTH_CSV_HEADER, rows))

        results: Dict[str, Any] = {
            "measure": cfg.width.measure.value,
            "measurements": [m.to_dict() for m in measurements],
        }
        try:
            results["fit"] = fit_power_law(
                [m.size for m in measurements], [m.width for m in measurements], cfg.width.size_variable
            ).to_dict()
        except FitError as e:
            logger.warning("no power-law fit: %s", e)
            results["fit"] = None
        self.write_summary("width.json", results)
        return {"widths": {m.n: m.width for m in measurements}, "fit": results["fit"]}


def read_width_table(path: Path) -> Dict[str, List[float]]:
    """Columns of a widths CSV: needs `width` and `size` (or `n`)."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        fields = reader.fieldnames or []
        size_column = "size" if "size" in fields else "n" if "n" in fields else None
        if size_column is None or "width" not in fields:
            raise InputError(f"{path} needs a 'width' column and a 'size' or 'n' column, has {fields}")
        sizes, widths = [], []
        for row in reader:
            sizes.append(float(row[size_column]))
            widths.append(float(row["width"]))
    return {"sizes": sizes, "widths": widths}


class FitExperiment(Experiment):
    command = "fit"
    description = "Power-law fit of width against size"

    def execute(self) -> Dict[str, Any]:
        if not self.config.fit.input:
            raise ConfigError("fit needs fit.input (a widths CSV)")
        table = read_width_table(Path(self.config.fit.input))
        fit = fit_power_law(table["sizes"], table["widths"], self.config.fit.size_variable)
        results = {"input": self.config.fit.input, "fit": fit.to_dict()}
        self.write_summary("fit.json", results)
        return {"amplitude": fit.amplitude, "exponent": fit.exponent}


class UtilityExperiment(Experiment):
    command = "utility"
    description = "Utility analysis of a finished sweep"

    def execute(self) -> Dict[str, Any]:
        cfg = self.config
        if not cfg.input_dir:
            raise ConfigError("utility needs input_dir (a sweep output directory)")
        directory = Path(cfg.input_dir)
        result = read_sweep_csv(directory / "sweep.csv", directory / "sweep.json")

        rand = result.curve(result.rand_label)
        per_strategy: Dict[str, Any] = {}
        for label in result.labels():
            if label == result.rand_label or result.strategy_of(label) == StrategyName.RANDOM:
                continue
            verdicts = []
            for point, r in zip(result.points_for(label), rand):
                T = point_time(point, cfg.utility, result.n, result.k)
                verdict = utility_condition(point.median, r, T, cfg.utility.cost_per_time, cfg.utility.value_per_node)
                verdicts.append({"p": point.p, "T": T, **verdict.to_dict()})
            per_strategy[label] = {
                "positive_utility_width": positive_utility_width(result, cfg.utility, opt_label=label),
                "points": verdicts,
            }

        results = {
            "input_dir": cfg.input_dir,
            "cost_ratio": cfg.utility.cost_ratio,
            "expected_added_utility": expected_added_utility_over_prior(result, cfg.utility),
            "strategies": per_strategy,
        }
        self.write_summary("utility.json", results)
        return {
            "expected_added_utility": results["expected_added_utility"],
            "positive_utility_width": {k: v["positive_utility_width"] for k, v in per_strategy.items()},
        }


class MRatioExperiment(Experiment):
    command = "mratio"
    description = "Local optimization vs hill-climbing across sub-network masses"

    def execute(self) -> Dict[str, Any]:
        cfg = self.config
        g, descriptor = self.load_network()
        grid = cfg.grid.build(g)
        outcome = m_robustness_ratio(
            g, cfg.mratio.M_values, cfg.k, grid, cfg.trials,
            rng_seed=cfg.rng_seed,
            trials_per_eval=cfg.trials_per_eval,
            noise_sigma=cfg.cascade.sigma,
            registry=self.registry(),
            workers=cfg.workers,
            network=descriptor,
        )
        rows = [MRatioRow(M=m, ratio=r) for m, r in outcome.ratios.items()]
        self.record_output(write_rows(self.output_dir / "mratio.csv", MRATIO_CSV_HEADER, rows))
        results = {"grid": grid.construction, "network": descriptor, **outcome.to_dict()}
        self.write_summary("mratio.json", results)
        return outcome.to_dict()


class OracleCheckExperiment(Experiment):
    command = "oracle-check"
    description = "Monte-Carlo influence against exact enumeration on small graphs"

    def execute(self) -> Dict[str, Any]:
        cfg = self.config
        oc = cfg.oracle
        report = oracle_agreement_suite(
            graphs=oc.graphs,
            max_nodes=oc.max_nodes,
            max_edges=oc.max_edges,
            probabilities=oc.probabilities,
            trials=oc.trials,
            max_seeds=oc.max_seeds,
            rng_seed=cfg.rng_seed,
            workers=cfg.workers,
        )
        results: Dict[str, Any] = {"agreement": report.to_dict()}
        summary: Dict[str, Any] = {"passed": report.passed, "failed": report.failed}
        if oc.picture_equivalence:
            cases = picture_equivalence_suite(
                graphs=oc.graphs,
                max_nodes=oc.max_nodes,
                max_edges=min(oc.max_edges, 12),
                trials=oc.trials,
                max_seeds=oc.max_seeds,
                rng_seed=cfg.rng_seed,
                workers=cfg.workers,
            )
            passed = sum(case.passed for case in cases)
            results["picture_equivalence"] = {
                "total": len(cases),
                "passed": passed,
                "cases": [case.to_dict() for case in cases],
            }
            summary["picture_equivalence_passed"] = passed
            summary["picture_equivalence_total"] = len(cases)
        self.write_summary("oracle.json", results)
        return summary


COMMANDS = {
    cls.command: cls
    for cls in (
        GenerateExperiment,
        IngestExperiment,
        SweepExperiment,
        WidthExperiment,
        FitExperiment,
        UtilityExperiment,
        MRatioExperiment,
        OracleCheckExperiment,
    )
}


def experiment_for(command: str) -> Optional[type]:
    return COMMANDS.get(command)
