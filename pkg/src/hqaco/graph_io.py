"""TSP instance loading: a TSPLIB subset and a small sparse edge-list format.

Supported TSPLIB inputs (symmetric TSP only):

* ``EDGE_WEIGHT_TYPE: EXPLICIT`` with ``EDGE_WEIGHT_FORMAT`` one of
  ``FULL_MATRIX``, ``LOWER_DIAG_ROW``, ``UPPER_ROW``, ``UPPER_DIAG_ROW``
* ``EDGE_WEIGHT_TYPE: GEO`` with a ``NODE_COORD_SECTION``

Sparse format::

    v <count>
    e <i> <j> <cost>      # 0-indexed, undirected, one line per edge

Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "ProblemInstance",
    "EdgeWeightKind",
    "TSPLIBError",
    "UnsupportedFormatError",
    "parse_tsplib",
    "geo_distance",
    "load_sparse_graph",
    "load_instance",
    "bundled_instance",
    "GEO_DEGREE_RULES",
    "KNOWN_OPTIMA",
]

# Published optimal tour lengths for the benchmark instances.
KNOWN_OPTIMA = {
    "gr17": 2085,
    "burma14": 3323,
    "gr21": 2707,
    "bayg29": 1610,
    "bays29": 2020,
}

EARTH_RADIUS = 6378.388
TSPLIB_PI = 3.141592


class TSPLIBError(ValueError):
    """Malformed instance file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsupportedFormatError(TSPLIBError):
    """Well-formed but outside the supported TSPLIB subset."""


class EdgeWeightKind(str, Enum):
    EXPLICIT_FULL_MATRIX = "FULL_MATRIX"
    EXPLICIT_LOWER_DIAG_ROW = "LOWER_DIAG_ROW"
    EXPLICIT_UPPER_ROW = "UPPER_ROW"
    EXPLICIT_UPPER_DIAG_ROW = "UPPER_DIAG_ROW"
    GEO = "GEO"


@dataclass(frozen=True)
class ProblemInstance:
    name: str
    dimension: int
    costs: np.ndarray
    adjacency: tuple[tuple[int, ...], ...]
    lower_bound: float | None = None
    kind: str = "complete"
    edge_mask: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        costs.setflags(write=False)
        object.__setattr__(self, "costs", costs)
        if costs.shape != (self.dimension, self.dimension):
            raise ValueError(f"cost matrix shape {costs.shape} != dimension {self.dimension}")
        if not np.array_equal(costs, costs.T):
            raise ValueError("cost matrix is not symmetric")
        if np.any(np.diag(costs) != 0):
            raise ValueError("cost matrix diagonal must be zero")
        mask = np.zeros((self.dimension, self.dimension), dtype=bool)
        for i, nbrs in enumerate(self.adjacency):
            if i in nbrs:
                raise ValueError(f"self-loop at node {i}")
            mask[i, list(nbrs)] = True
        mask.setflags(write=False)
        object.__setattr__(self, "edge_mask", mask)

    @classmethod
    def complete(cls, name: str, costs, lower_bound: float | None = None) -> "ProblemInstance":
        costs = np.asarray(costs, dtype=float)
        n = costs.shape[0]
        adjacency = tuple(tuple(j for j in range(n) if j != i) for i in range(n))
        if lower_bound is None:
            lower_bound = KNOWN_OPTIMA.get(name)
        return cls(name, n, costs, adjacency, lower_bound)

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @property
    def is_complete(self) -> bool:
        return all(len(a) == self.dimension - 1 for a in self.adjacency)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.edge_mask[i, j])


GEO_DEGREE_RULES = ("truncate", "nearest")


def _tsplib_radians(x: float, degrees: str = "truncate") -> float:
    # The integer part is whole degrees, the fraction is minutes (DDD.MM).
    deg = math.trunc(x) if degrees == "truncate" else math.trunc(x + 0.5)
    minutes = x - deg
    return TSPLIB_PI * (deg + 5.0 * minutes / 3.0) / 180.0


def geo_distance(lat_lon_a, lat_lon_b, degrees: str = "truncate") -> int:
    """TSPLIB GEO distance between two ``(latitude, longitude)`` pairs in DDD.MM.

    ``degrees="truncate"`` matches TSPLIB's published optima (burma14 = 3323).
    ``degrees="nearest"`` rounds the degree part to the nearest integer
    instead, which some TSPLIB readers do; it changes burma14's optimum to 3454.
    """
    if degrees not in GEO_DEGREE_RULES:
        raise ValueError(f"degrees must be one of {GEO_DEGREE_RULES}, got {degrees!r}")
    lat_a, lon_a = (_tsplib_radians(float(v), degrees) for v in lat_lon_a)
    lat_b, lon_b = (_tsplib_radians(float(v), degrees) for v in lat_lon_b)
    q1 = math.cos(lon_a - lon_b)
    q2 = math.cos(lat_a - lat_b)
    q3 = math.cos(lat_a + lat_b)
    arg = 0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)
    arg = min(1.0, max(-1.0, arg))
    return int(EARTH_RADIUS * math.acos(arg) + 1.0)


def _expand(kind: EdgeWeightKind, values: list[float], n: int) -> np.ndarray:
    m = np.zeros((n, n))
    it = iter(values)
    if kind is EdgeWeightKind.EXPLICIT_FULL_MATRIX:
        for i in range(n):
            for j in range(n):
                m[i, j] = next(it)
        if not np.array_equal(m, m.T):
            raise TSPLIBError("FULL_MATRIX is not symmetric")
        return m
    for i in range(n):
        if kind is EdgeWeightKind.EXPLICIT_LOWER_DIAG_ROW:
            cols = range(0, i + 1)
        elif kind is EdgeWeightKind.EXPLICIT_UPPER_ROW:
            cols = range(i + 1, n)
        else:
            cols = range(i, n)
        for j in cols:
            m[i, j] = next(it)
    # Only one triangle was filled.
    m = m + m.T
    np.fill_diagonal(m, 0.0)
    return m


def _needed(kind: EdgeWeightKind, n: int) -> int:
    return {
        EdgeWeightKind.EXPLICIT_FULL_MATRIX: n * n,
        EdgeWeightKind.EXPLICIT_LOWER_DIAG_ROW: n * (n + 1) // 2,
        EdgeWeightKind.EXPLICIT_UPPER_DIAG_ROW: n * (n + 1) // 2,
        EdgeWeightKind.EXPLICIT_UPPER_ROW: n * (n - 1) // 2,
    }[kind]


_SECTIONS = {"NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION", "DISPLAY_DATA_SECTION"}


def parse_tsplib(content: str, geo_degrees: str = "truncate") -> ProblemInstance:
    """Parse TSPLIB text into a complete :class:`ProblemInstance`.

    ``geo_degrees`` is passed to :func:`geo_distance` for GEO instances.
    """
    header: dict[str, str] = {}
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    lineno = 0
    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        head = line.split(":", 1)[0].strip()
        if head in _SECTIONS:
            current = head
            sections[current] = []
            continue
        if ":" in line and head.replace("_", "").isalpha():
            header[head] = line.split(":", 1)[1].strip()
            current = None
            continue
        if current is None:
            raise TSPLIBError(f"unexpected data outside a section: {line!r}", lineno)
        sections[current].append((lineno, line))
    last_line = lineno

    for key in ("NAME", "DIMENSION", "EDGE_WEIGHT_TYPE"):
        if key not in header:
            raise TSPLIBError(f"missing {key} keyword")
    if header.get("TYPE", "TSP").split()[0] != "TSP":
        raise UnsupportedFormatError(f"TYPE {header['TYPE']!r} not supported")
    name = header["NAME"]
    try:
        n = int(header["DIMENSION"])
    except ValueError:
        raise TSPLIBError(f"bad DIMENSION {header['DIMENSION']!r}") from None
    if n < 1:
        raise TSPLIBError(f"DIMENSION must be positive, got {n}")
    wtype = header["EDGE_WEIGHT_TYPE"]

    if wtype == "GEO":
        rows = sections.get("NODE_COORD_SECTION")
        if rows is None:
            raise TSPLIBError("GEO instance without NODE_COORD_SECTION")
        if len(rows) < n:
            raise TSPLIBError(f"NODE_COORD_SECTION has {len(rows)} of {n} nodes", last_line)
        coords = []
        for lineno, line in rows[:n]:
            parts = line.split()
            if len(parts) < 3:
                raise TSPLIBError(f"bad coordinate line {line!r}", lineno)
            coords.append((float(parts[1]), float(parts[2])))
        costs = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                costs[i, j] = costs[j, i] = geo_distance(coords[i], coords[j], geo_degrees)
        return ProblemInstance.complete(name, costs)

    if wtype != "EXPLICIT":
        raise UnsupportedFormatError(f"EDGE_WEIGHT_TYPE {wtype!r} not supported")
    fmt = header.get("EDGE_WEIGHT_FORMAT")
    try:
        kind = EdgeWeightKind(fmt)
    except ValueError:
        raise UnsupportedFormatError(f"EDGE_WEIGHT_FORMAT {fmt!r} not supported") from None
    rows = sections.get("EDGE_WEIGHT_SECTION")
    if rows is None:
        raise TSPLIBError("EXPLICIT instance without EDGE_WEIGHT_SECTION")
    values: list[float] = []
    need = _needed(kind, n)
    for lineno, line in rows:
        try:
            values.extend(float(tok) for tok in line.split())
        except ValueError:
            raise TSPLIBError(f"non-numeric weight in {line!r}", lineno) from None
        if len(values) >= need:
            break
    if len(values) < need:
        at = rows[-1][0] if rows else last_line
        raise TSPLIBError(f"EDGE_WEIGHT_SECTION truncated: {len(values)} of {need} values", at)
    return ProblemInstance.complete(name, _expand(kind, values[:need], n))


def load_sparse_graph(content: str, name: str = "graph") -> ProblemInstance:
    """Parse the ``v`` / ``e`` edge-list format; absent edges are non-traversable."""
    n = None
    edges: dict[tuple[int, int], float] = {}
    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v":
            if n is not None or len(parts) != 2:
                raise TSPLIBError("expected a single 'v <count>' line", lineno)
            n = int(parts[1])
        elif parts[0] == "e":
            if n is None:
                raise TSPLIBError("edge before 'v <count>'", lineno)
            if len(parts) != 4:
                raise TSPLIBError(f"expected 'e <i> <j> <cost>', got {line!r}", lineno)
            i, j, cost = int(parts[1]), int(parts[2]), float(parts[3])
            if i == j:
                raise TSPLIBError(f"self-loop on node {i}", lineno)
            if not (0 <= i < n and 0 <= j < n):
                raise TSPLIBError(f"node index out of range 0..{n - 1}", lineno)
            if cost < 0:
                raise TSPLIBError(f"negative cost {cost}", lineno)
            key = (min(i, j), max(i, j))
            if key in edges:
                raise TSPLIBError(f"duplicate edge {key}", lineno)
            edges[key] = cost
        else:
            raise TSPLIBError(f"unknown record {parts[0]!r}", lineno)
    if n is None:
        raise TSPLIBError("missing 'v <count>' line")
    costs = np.zeros((n, n))
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for (i, j), c in sorted(edges.items()):
        costs[i, j] = costs[j, i] = c
        nbrs[i].append(j)
        nbrs[j].append(i)
    adjacency = tuple(tuple(sorted(a)) for a in nbrs)
    complete = all(len(a) == n - 1 for a in adjacency)
    return ProblemInstance(name, n, costs, adjacency, kind="complete" if complete else "sparse")


def load_instance(path, geo_degrees: str = "truncate") -> ProblemInstance:
    """Load by extension: ``.graph`` is the sparse format, anything else TSPLIB."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".graph":
        return load_sparse_graph(text, name=path.stem)
    return parse_tsplib(text, geo_degrees)


def bundled_instance(name: str, geo_degrees: str = "truncate") -> ProblemInstance:
    """Instances shipped with the package: ``gr17``, ``burma14``, plus small graphs."""
    data = resources.files("hqaco") / "data"
    for suffix in (".tsp", ".graph"):
        res = data / f"{name}{suffix}"
        if res.is_file():
            text = res.read_text()
            if suffix == ".graph":
                return load_sparse_graph(text, name)
            return parse_tsplib(text, geo_degrees)
    raise FileNotFoundError(f"no bundled instance named {name!r}")
