"""
Edge-list files.

Format read by `ingest_edge_list`:
- one edge per line: two whitespace-separated integer node ids
- lines whose first non-blank character is '#' and blank lines are ignored
- self-loops and repeated pairs ((u, v) and (v, u) are the same edge) are
  dropped and counted as warnings
- ids are relabeled 0..n-1 in ascending order of the original ids

`write_edge_list` writes the same format (header comment, "u v" lines).
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Set, Tuple, Union

from .errors import EmptyGraphError, ParseError
from .graph import Graph
from .output import write_atomic

logger = logging.getLogger(__name__)


@dataclass
class IngestReport:
    """Counts from cleaning an edge list."""
    lines: int = 0
    edges: int = 0
    self_loops: int = 0
    duplicates: int = 0
    warnings: List[str] = field(default_factory=list)

    @property
    def warning_count(self) -> int:
        return self.self_loops + self.duplicates

    def to_dict(self) -> dict:
        return {
            "lines": self.lines,
            "edges": self.edges,
            "self_loops": self.self_loops,
            "duplicates": self.duplicates,
            "warning_count": self.warning_count,
        }


@dataclass
class IngestedGraph:
    graph: Graph
    id_map: Dict[int, int]  # original id -> dense id
    report: IngestReport


def parse_edge_lines(
    lines: Iterable[Union[str, bytes]],
    source: str = "<edges>"
) -> Tuple[List[Tuple[int, int]], IngestReport]:
    """
    Cleaned list of (u, v) pairs in original ids, u < v, first occurrence order.

    Byte lines are decoded as UTF-8; undecodable bytes are a parse error.
    """
    report = IngestReport()
    seen: Set[Tuple[int, int]] = set()
    pairs: List[Tuple[int, int]] = []
    for line_number, line in enumerate(lines, start=1):
        report.lines += 1
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(f"{source}: invalid UTF-8 byte at offset {e.start}", line_number) from None
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        tokens = text.split()
        if len(tokens) != 2:
            raise ParseError(f"{source}: expected two node ids, got {len(tokens)} fields", line_number)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"{source}: node ids must be integers, got {text!r}", line_number) from None
        if u == v:
            report.self_loops += 1
            report.warnings.append(f"line {line_number}: self-loop on {u} dropped")
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            report.duplicates += 1
            report.warnings.append(f"line {line_number}: duplicate edge {u}-{v} dropped")
            continue
        seen.add(key)
        pairs.append(key)
    report.edges = len(pairs)
    return pairs, report


def ingest_edge_list(path: Union[str, Path]) -> IngestedGraph:
    """
    Read an edge-list file into a Graph plus the original-to-dense id map.

    Raises:
        ParseError: malformed line (with its line number)
        EmptyGraphError: no edges left after cleaning
    """
    path = Path(path)
    with open(path, "rb") as f:
        pairs, report = parse_edge_lines(f, source=str(path))
    if not pairs:
        raise EmptyGraphError(f"{path} contains no edges")

    ids = sorted({x for pair in pairs for x in pair})
    id_map = {original: dense for dense, original in enumerate(ids)}
    graph = Graph.from_edges(len(ids), [(id_map[u], id_map[v]) for u, v in pairs])

    if report.warning_count:
        logger.warning(
            "%s: dropped %d self-loops and %d duplicate edges",
            path, report.self_loops, report.duplicates,
        )
    logger.info("%s: %d nodes, %d edges", path, graph.n, graph.edge_count)
    return IngestedGraph(graph=graph, id_map=id_map, report=report)


def write_edge_list(g: Graph, path: Union[str, Path]) -> Path:
    """Atomically write `g` as an edge list (isolated nodes are not representable)."""
    lines = [f"# nodes {g.n} edges {g.edge_count}"]
    lines += [f"{u} {v}" for u, v in g.edges.tolist()]
    return write_atomic(path, "\n".join(lines) + "\n")
