"""2-CNF蕴含图与规范满足赋值

文字节点编号：x_i 为 2i，¬x_i 为 2i+1，互补文字的节点编号相差最低位。
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import networkx as nx

from .errors import WidthError
from .f2 import BitVec
from .formula import Clause, CnfFormula, Literal


def literal_node(lit: Literal) -> int:
    return 2 * lit.variable + int(lit.negated)


def node_literal(node: int) -> Literal:
    return Literal(node >> 1, bool(node & 1))


def _build_graph(n: int, clauses: Tuple[Clause, ...]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(2 * n))
    for clause in clauses:
        if clause.width > 2:
            raise WidthError(f"蕴含图只支持宽度不超过2的子句: {clause}")
        if clause.width == 1:
            u = literal_node(clause.literals[0])
            graph.add_edge(u ^ 1, u)
        elif clause.width == 2:
            u, v = (literal_node(lit) for lit in clause.literals)
            graph.add_edge(u ^ 1, v)
            graph.add_edge(v ^ 1, u)
    return graph


@dataclass(frozen=True)
class ImplicationGraph:
    """2n个文字上的蕴含图及其强连通分量收缩"""
    phi: CnfFormula
    graph: nx.DiGraph
    condensation: nx.DiGraph
    scc_ids: Tuple[int, ...]

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def satisfiable(self) -> bool:
        if self.phi.has_empty_clause():
            return False
        return all(self.scc_ids[2 * i] != self.scc_ids[2 * i + 1] for i in range(self.n))

    def is_skew_symmetric(self) -> bool:
        return all(self.graph.has_edge(v ^ 1, u ^ 1) for u, v in self.graph.edges)

    @cached_property
    def depth(self) -> Optional[Tuple[int, ...]]:
        """每个变量在剥离过程中被赋值的轮次，不可满足时为None"""
        canonical = canonical_assignment(self.phi)
        return canonical.depth if canonical is not None else None


def implication_graph(phi: CnfFormula) -> ImplicationGraph:
    """构造蕴含图：子句(u ∨ v)给出边¬u→v与¬v→u，单位子句(u)给出边¬u→u

    Raises:
        WidthError: 存在宽度大于2的子句
    """
    graph = _build_graph(phi.n, phi.clauses)
    condensation = nx.condensation(graph)
    mapping = condensation.graph["mapping"]
    scc_ids = tuple(mapping[node] for node in range(2 * phi.n))
    return ImplicationGraph(phi, graph, condensation, scc_ids)


@dataclass(frozen=True)
class CanonicalAssignment:
    """规范满足赋值及剥离分层S_0, S_1, ...（每层是该轮被设为真的文字）"""
    assignment: BitVec
    layers: Tuple[Tuple[Literal, ...], ...]
    depth: Tuple[int, ...]


def _simplify(clauses: List[Clause], true_nodes: set) -> Optional[List[Clause]]:
    """删除已满足的子句和已为假的文字；出现空子句时返回None"""
    simplified = []
    for clause in clauses:
        nodes = [literal_node(lit) for lit in clause.literals]
        if any(node in true_nodes for node in nodes):
            continue
        remaining = tuple(lit for lit, node in zip(clause.literals, nodes) if node ^ 1 not in true_nodes)
        if not remaining:
            return None
        simplified.append(Clause(remaining))
    return simplified


def canonical_assignment(phi: CnfFormula) -> Optional[CanonicalAssignment]:
    """按剥离过程计算2-CNF的规范满足赋值

    每一轮在未赋值变量上构造蕴含图，把收缩图中所有汇点分量的文字设为真，
    化简后重新计算。同一轮中汇点分量按(最小变量, 是否含该变量的否定文字优先)
    排序；与本轮已赋值变量冲突的分量（互补分量）跳过。不出现在任何子句中的
    变量因此取0。

    Args:
        phi: 宽度不超过2的CNF公式

    Returns:
        Optional[CanonicalAssignment]: 不可满足时返回None

    Raises:
        WidthError: 存在宽度大于2的子句
    """
    n = phi.n
    if phi.has_empty_clause():
        return None
    if not implication_graph(phi).satisfiable:
        return None

    clauses = list(phi.clauses)
    unassigned = set(range(n))
    bits = 0
    depth: Dict[int, int] = {}
    layers: List[Tuple[Literal, ...]] = []

    while unassigned:
        graph = _build_graph(n, tuple(clauses))
        graph.remove_nodes_from([node for v in range(n) if v not in unassigned for node in (2 * v, 2 * v + 1)])
        condensation = nx.condensation(graph)
        members = condensation.graph["mapping"]
        components: Dict[int, List[int]] = {}
        for node, component in members.items():
            components.setdefault(component, []).append(node)

        sinks = []
        for component, nodes in components.items():
            if condensation.out_degree(component) == 0:
                low = min(node >> 1 for node in nodes)
                prefers_negative = (2 * low + 1) in nodes
                sinks.append(((low, 0 if prefers_negative else 1), sorted(nodes)))
        sinks.sort()

        round_nodes: List[int] = []
        round_vars: set = set()
        for _, nodes in sinks:
            variables = {node >> 1 for node in nodes}
            if variables & round_vars:
                continue
            round_vars |= variables
            round_nodes.extend(nodes)

        layer = tuple(sorted(node_literal(node) for node in round_nodes))
        for lit in layer:
            if not lit.negated:
                bits |= 1 << lit.variable
            depth[lit.variable] = len(layers)
            unassigned.discard(lit.variable)
        layers.append(layer)

        simplified = _simplify(clauses, set(round_nodes))
        if simplified is None:
            return None
        clauses = simplified

    return CanonicalAssignment(
        assignment=BitVec(n, bits),
        layers=tuple(layers),
        depth=tuple(depth[i] for i in range(n)),
    )
