"""
Weighted graphs and their Laplacians
Edges are stored canonically: u < v, sorted by (u, v), zero weights dropped
"""
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

from brouwerlab.exceptions import (
    DuplicateEdgeError,
    GraphParseError,
    NonFiniteWeightError,
    NonIntegerVertexError,
    ParameterError,
    SelfLoopError,
    UnknownGraphKindError,
    VertexOutOfRangeError,
)
from brouwerlab.schemas.graph import GraphDocument

Edge = Tuple[int, int, float]

NAMED_KINDS = ("complete", "path", "star", "empty", "cycle")


@dataclass(frozen=True)
class WeightedGraph:
    """Vertex count plus canonical weighted edge list"""

    n: int
    edges: Tuple[Edge, ...]

    @cached_property
    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(u, v, w) as numpy arrays"""
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), np.zeros(0, dtype=float)
        u, v, w = zip(*self.edges)
        return (
            np.asarray(u, dtype=np.int64),
            np.asarray(v, dtype=np.int64),
            np.asarray(w, dtype=float),
        )


@dataclass(frozen=True)
class LaplacianMatrix:
    """Dense symmetric n x n Laplacian, read-only"""

    n: int
    entries: np.ndarray

    def trace(self) -> float:
        return float(np.trace(self.entries))

    def max_abs_entry(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.n else 0.0


def _vertex_index(x: float) -> int:
    i = int(x)
    if i != x:
        raise NonIntegerVertexError(x)
    return i


def build_graph(n: int, edges: Iterable[Sequence[float]]) -> WeightedGraph:
    """Validate and canonicalize an edge list"""
    if n < 1:
        raise ParameterError(f"vertex count must be >= 1, got {n}", field="n")

    seen = set()
    kept: List[Edge] = []
    for edge in edges:
        u, v, w = _vertex_index(edge[0]), _vertex_index(edge[1]), float(edge[2])
        if u == v:
            raise SelfLoopError(u)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRangeError(u, v, n)
        if u > v:
            u, v = v, u
        if not math.isfinite(w):
            raise NonFiniteWeightError(u, v, w)
        if (u, v) in seen:
            raise DuplicateEdgeError(u, v)
        seen.add((u, v))
        # w_uv = 0 means the pair is not an edge
        if w != 0.0:
            kept.append((u, v, w))

    kept.sort(key=lambda e: (e[0], e[1]))
    return WeightedGraph(n=n, edges=tuple(kept))


def from_pair_weights(n: int, weights: np.ndarray) -> WeightedGraph:
    """Graph from C(n,2) weights given in lexicographic pair order"""
    pairs = pair_list(n)
    if len(weights) != len(pairs):
        raise ParameterError(
            f"expected {len(pairs)} pair weights for n={n}, got {len(weights)}",
            field="weights",
        )
    weights = np.asarray(weights, dtype=float)
    if not np.all(np.isfinite(weights)):
        idx = int(np.flatnonzero(~np.isfinite(weights))[0])
        u, v = pairs[idx]
        raise NonFiniteWeightError(u, v, float(weights[idx]))
    nonzero = np.flatnonzero(weights)
    edges = tuple(
        (pairs[i][0], pairs[i][1], float(weights[i])) for i in nonzero.tolist()
    )
    return WeightedGraph(n=n, edges=edges)


def total_weight(g: WeightedGraph) -> float:
    """e(G), the sum of all edge weights"""
    return math.fsum(w for _, _, w in g.edges)


def laplacian(g: WeightedGraph) -> LaplacianMatrix:
    """L with -w_uv off the diagonal and incident weight sums on it"""
    n = g.n
    entries = np.zeros((n, n), dtype=float)
    u, v, w = g.arrays
    if len(w):
        entries[u, v] = -w
        entries[v, u] = -w
        degrees = np.zeros(n, dtype=float)
        np.add.at(degrees, u, w)
        np.add.at(degrees, v, w)
        entries[np.diag_indices(n)] = degrees
    entries.setflags(write=False)
    return LaplacianMatrix(n=n, entries=entries)


def named_graph(kind: str, n: int) -> WeightedGraph:
    """Standard unweighted graph of a named family"""
    if n < 1:
        raise ParameterError(f"vertex count must be >= 1, got {n}", field="n")

    if kind == "complete":
        edges = [(u, v, 1.0) for u, v in pair_list(n)]
    elif kind == "path":
        edges = [(i, i + 1, 1.0) for i in range(n - 1)]
    elif kind == "star":
        edges = [(0, i, 1.0) for i in range(1, n)]
    elif kind == "empty":
        edges = []
    elif kind == "cycle":
        if n < 3:
            raise ParameterError("a cycle needs at least 3 vertices", field="n")
        edges = [(i, i + 1, 1.0) for i in range(n - 1)] + [(0, n - 1, 1.0)]
    else:
        raise UnknownGraphKindError(kind)
    return build_graph(n, edges)


@lru_cache(maxsize=None)
def pair_list(n: int) -> Tuple[Tuple[int, int], ...]:
    """All pairs (i, j), i < j, in lexicographic order"""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def edges_from_mask(n: int, mask: int) -> WeightedGraph:
    """Unweighted graph whose edge b is present iff bit b of mask is set"""
    pairs = pair_list(n)
    if mask < 0 or mask >= (1 << len(pairs)):
        raise ParameterError(f"mask {mask} out of range for n={n}", field="mask")
    edges = tuple(
        (u, v, 1.0) for b, (u, v) in enumerate(pairs) if (mask >> b) & 1
    )
    return WeightedGraph(n=n, edges=edges)


def relabel(g: WeightedGraph, permutation: Sequence[int]) -> WeightedGraph:
    """Apply vertex relabeling i -> permutation[i]"""
    if sorted(permutation) != list(range(g.n)):
        raise ParameterError("relabeling must be a permutation of range(n)", field="permutation")
    return build_graph(g.n, [(permutation[u], permutation[v], w) for u, v, w in g.edges])


def add_isolated_vertex(g: WeightedGraph) -> WeightedGraph:
    return WeightedGraph(n=g.n + 1, edges=g.edges)


def graph_to_document(g: WeightedGraph) -> GraphDocument:
    return GraphDocument(n=g.n, edges=list(g.edges))


def graph_to_json(g: WeightedGraph) -> str:
    """Serialize with edges sorted by (u, v)"""
    return graph_to_document(g).model_dump_json()


def graph_from_json(text: Union[str, bytes], source: Optional[str] = None) -> WeightedGraph:
    """Parse Graph JSON; edges may come in any order"""
    try:
        document = GraphDocument.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0] if e.errors() else {}
        field = ".".join(str(loc) for loc in first.get("loc", []))
        message = first.get("msg", "validation error")
        raise GraphParseError(f"{field}: {message}" if field else message, source=source)
    return build_graph(document.n, document.edges)


def load_graph(path: Union[str, Path]) -> WeightedGraph:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GraphParseError(str(e), source=str(path))
    return graph_from_json(text, source=str(path))


def dump_graph(g: WeightedGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(graph_to_json(g) + "\n", encoding="utf-8")
