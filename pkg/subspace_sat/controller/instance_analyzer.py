"""实例特征分析与算法推荐"""

from typing import Any, Callable, Dict, List, Optional, Tuple

from ..core.formula import SubSatInstance
from ..utils.logger import logger

# 推荐穷举的自由维数上限
BRUTE_DIM = 16
# 子集搜索类算法适用的余维上限
SMALL_CODIM = 3

Rule = Callable[[SubSatInstance, Dict[str, Any]], Optional[Tuple[str, str]]]


class InstanceAnalyzer:
    """按规则依次匹配，给出实例特征与推荐算法"""

    def __init__(self, brute_dim: int = BRUTE_DIM, small_codim: int = SMALL_CODIM):
        self.brute_dim = brute_dim
        self.small_codim = small_codim
        self.rules: List[Rule] = [
            self._check_trivial,
            self._check_brute,
            self._check_det2,
            self._check_branch,
            self._check_codim,
        ]

    def analyze(self, inst: SubSatInstance) -> Dict[str, Any]:
        """统计n、k、m、t、r、|V_in|并推荐算法

        Args:
            inst: 子空间内可满足性实例

        Returns:
            Dict[str, Any]: 特征字典，含recommended与reason两项
        """
        analysis: Dict[str, Any] = {
            "n": inst.n,
            "m": inst.phi.m,
            "k": inst.k,
            "t": inst.t if not inst.space.is_empty else None,
            "r": inst.r if not inst.space.is_empty else None,
            "v_in": len(inst.v_in),
            "trivially_unsat": inst.trivially_unsat,
            "horn": all(c.is_horn for c in inst.phi.clauses),
        }
        for rule in self.rules:
            matched = rule(inst, analysis)
            if matched:
                analysis["recommended"], analysis["reason"] = matched
                break
        else:
            analysis["recommended"] = "pluck"
            analysis["reason"] = "宽度大于2且余维较大，使用遗忘式拔除"
        logger.info(f"实例分析: n={inst.n}, k={inst.k}, 推荐算法 {analysis['recommended']}")
        return analysis

    def recommend(self, inst: SubSatInstance) -> str:
        return self.analyze(inst)["recommended"]

    def _check_trivial(self, inst, analysis):
        if analysis["trivially_unsat"]:
            return "brute", "子空间为空或含空子句，任何算法都直接判定UNSAT"
        return None

    def _check_brute(self, inst, analysis):
        if analysis["r"] <= self.brute_dim:
            return "brute", f"dim(A)={analysis['r']}不超过{self.brute_dim}，直接枚举"
        return None

    def _check_det2(self, inst, analysis):
        if analysis["k"] <= 2 and analysis["t"] <= self.small_codim:
            return "det2", "2-CNF且余维小，确定性子集搜索"
        return None

    def _check_branch(self, inst, analysis):
        if analysis["k"] <= 2:
            return "branch", "2-CNF，随机仿射分支的代价只依赖dim(A)"
        return None

    def _check_codim(self, inst, analysis):
        if analysis["t"] <= self.small_codim:
            return "codim", f"余维t={analysis['t']}较小，枚举拔除子集"
        return None
