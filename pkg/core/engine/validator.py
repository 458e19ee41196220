"""
证据校验引擎 - 负责检查各来源给出的证据互不矛盾

来源：判别表 (criteria)、Tunnell 恒等式 (tunnell)、穷举见证 (oracle)、下降 (descent)。
证据主张分三级：已证同余（有三角形）、已证非同余、条件同余（BSD 或引用定理）。
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from core.engine.constants import ErrorMessages
from core.errors import EvidenceConflictError
from shared.types import EvidenceSource, VerdictStatus

logger = logging.getLogger(__name__)

CLAIM_CONGRUENT = "congruent"
CLAIM_NON_CONGRUENT = "non_congruent"
CLAIM_CONDITIONAL = "congruent_conditional"
CLAIM_NONE = "none"


@dataclass
class Evidence:
    """单条证据"""
    source: EvidenceSource
    claim: str
    detail: Dict[str, Any] = field(default_factory=dict)
    witnessed: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source.value,
            "claim": self.claim,
            "witnessed": self.witnessed,
            "detail": self.detail,
        }


@dataclass
class EvidenceValidationResult:
    status: VerdictStatus
    conflicts: List[str]
    warnings: List[str]
    decisive: Optional[EvidenceSource]


class EvidenceValidator:
    """证据校验器"""

    def validate(self, n: int, evidence: List[Evidence]) -> EvidenceValidationResult:
        """检查矛盾并推出综合结论；发现矛盾即抛出 EvidenceConflictError"""
        conflicts = self._detect_conflicts(evidence)
        if conflicts:
            for conflict in conflicts:
                logger.error(ErrorMessages.EVIDENCE_CONFLICT.format(n, conflict))
            raise EvidenceConflictError(ErrorMessages.EVIDENCE_CONFLICT.format(n, "; ".join(conflicts)))

        warnings = []
        status, decisive = self._derive_status(evidence)
        if status == VerdictStatus.NON_CONGRUENT and not self._has_unconditional_refutation(evidence):
            warnings.append("非同余结论缺少 Tunnell 失败或判别表非同余规则支撑")
            status, decisive = VerdictStatus.UNKNOWN, None
        return EvidenceValidationResult(status, conflicts, warnings, decisive)

    @staticmethod
    def _detect_conflicts(evidence: List[Evidence]) -> List[str]:
        conflicts = []
        for i, first in enumerate(evidence):
            for second in evidence[i + 1:]:
                claims = {first.claim, second.claim}
                if CLAIM_NON_CONGRUENT not in claims:
                    continue
                other = second if first.claim == CLAIM_NON_CONGRUENT else first
                if other.claim == CLAIM_CONGRUENT:
                    conflicts.append(f"{first.source.value} 与 {second.source.value} 结论相反")
                elif other.claim == CLAIM_CONDITIONAL and {first.source, second.source} == {
                    EvidenceSource.CRITERIA, EvidenceSource.TUNNELL
                }:
                    conflicts.append("判别表与 Tunnell 恒等式结论相反")
        return conflicts

    @staticmethod
    def _has_unconditional_refutation(evidence: List[Evidence]) -> bool:
        return any(
            ev.claim == CLAIM_NON_CONGRUENT
            and ev.source in (EvidenceSource.TUNNELL, EvidenceSource.CRITERIA)
            for ev in evidence
        )

    @staticmethod
    def _derive_status(evidence: List[Evidence]):
        """按阶段顺序，最早的决定性证据胜出"""
        for ev in evidence:
            if ev.claim == CLAIM_CONGRUENT and ev.witnessed:
                return VerdictStatus.CONGRUENT_WITNESSED, ev.source
            if ev.claim == CLAIM_NON_CONGRUENT:
                return VerdictStatus.NON_CONGRUENT, ev.source
        for ev in evidence:
            if ev.claim in (CLAIM_CONDITIONAL, CLAIM_CONGRUENT):
                return VerdictStatus.CONGRUENT_ASSUMING_BSD, ev.source
        return VerdictStatus.UNKNOWN, None


# 全局证据校验器实例
evidence_validator = EvidenceValidator()
