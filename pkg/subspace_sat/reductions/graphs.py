"""归约输入用的图与顶点划分

边表文件：第一行"V E"，之后E行"u v"（顶点从0编号）。
划分文件：每行一个部分，列出空格分隔的顶点编号。
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Tuple, Union

import networkx as nx

from ..core.errors import ReductionError

Edge = Tuple[int, int]


def _normalize(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """无向简单图，顶点为0..vertex_count-1"""
    vertex_count: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ReductionError(f"顶点数不能为负: {self.vertex_count}")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ReductionError(f"边({u}, {v})引用了不存在的顶点")
            if u == v:
                raise ReductionError(f"不允许自环: ({u}, {v})")
            edge = _normalize(u, v)
            if edge in seen:
                raise ReductionError(f"重复的边: ({u}, {v})")
            seen.add(edge)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """顶点按sorted(graph.nodes)的顺序重新编号"""
        index = {node: i for i, node in enumerate(sorted(graph.nodes))}
        return cls(len(index), tuple(_normalize(index[u], index[v]) for u, v in graph.edges))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges)
        return graph

    def has_edge(self, u: int, v: int) -> bool:
        return _normalize(u, v) in set(self.edges)

    def non_edges(self) -> List[Edge]:
        return sorted(_normalize(u, v) for u, v in nx.non_edges(self.to_networkx()))


@dataclass(frozen=True)
class PartitionedGraph:
    """带顶点划分(V_1, ..., V_t)的图"""
    graph: Graph
    parts: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(part)) for part in self.parts)
        covered = [v for part in parts for v in part]
        if sorted(covered) != list(range(self.graph.vertex_count)):
            raise ReductionError("顶点划分必须不重不漏地覆盖所有顶点")
        if any(not part for part in parts):
            raise ReductionError("划分中不允许空的部分")
        object.__setattr__(self, "parts", parts)

    @property
    def t(self) -> int:
        return len(self.parts)

    def multicolored_cliques(self) -> List[Tuple[int, ...]]:
        """每个部分恰取一个顶点的团（小规模校验用）"""
        graph = self.graph.to_networkx()
        part_of = {v: i for i, part in enumerate(self.parts) for v in part}
        cliques = []
        for clique in nx.enumerate_all_cliques(graph):
            if len(clique) == self.t and len({part_of[v] for v in clique}) == self.t:
                cliques.append(tuple(sorted(clique)))
        return sorted(cliques)


def _int_tokens(line: str, number: int) -> List[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise ReductionError(f"第{number}行: 无法解析的整数: {line}")


def parse_edge_list(text: str) -> Graph:
    """解析边表文本

    Raises:
        ReductionError: 格式错误或边数与文件头不符
    """
    lines = [(i, line.strip()) for i, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not lines:
        raise ReductionError("边表为空")
    header = _int_tokens(lines[0][1], lines[0][0])
    if len(header) != 2:
        raise ReductionError(f"第{lines[0][0]}行: 文件头应为'V E'")
    vertex_count, edge_count = header
    edges = []
    for number, line in lines[1:]:
        values = _int_tokens(line, number)
        if len(values) != 2:
            raise ReductionError(f"第{number}行: 每条边应为'u v'")
        edges.append((values[0], values[1]))
    if len(edges) != edge_count:
        raise ReductionError(f"文件头声明{edge_count}条边，实际读到{len(edges)}条")
    return Graph(vertex_count, tuple(edges))


def parse_partition(text: str) -> Tuple[Tuple[int, ...], ...]:
    return tuple(
        tuple(_int_tokens(line, number))
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    )


def serialize_edge_list(graph: Graph) -> str:
    lines = [f"{graph.vertex_count} {len(graph.edges)}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: Union[str, Path]) -> Graph:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"图文件不存在: {path}")
    return parse_edge_list(path.read_text(encoding="utf-8"))


def read_partitioned_graph(graph_path: Union[str, Path], partition_path: Union[str, Path]) -> PartitionedGraph:
    partition_path = Path(partition_path)
    if not partition_path.exists():
        raise FileNotFoundError(f"划分文件不存在: {partition_path}")
    parts = parse_partition(partition_path.read_text(encoding="utf-8"))
    return PartitionedGraph(read_graph(graph_path), parts)


def complete_multipartite(sizes: Iterable[int]) -> PartitionedGraph:
    """完全多部图及其自然划分，例如sizes=(2, 2, 2)得到K_{2,2,2}"""
    sizes = tuple(sizes)
    graph = Graph.from_networkx(nx.complete_multipartite_graph(*sizes))
    parts = []
    start = 0
    for size in sizes:
        parts.append(tuple(range(start, start + size)))
        start += size
    return PartitionedGraph(graph, tuple(parts))
