"""
规则冲突检测与解决系统
静态分析判别表：找出签名可能同时命中的规则对，并按结论与条件分类
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Set

class ConflictType(Enum):
    """冲突类型"""
    CONTRADICTORY = "contradictory"  # 相同签名、相同条件、结论相反
    REDUNDANT = "redundant"          # 结论相同，其中一条无条件或条件相同
    OVERLAPPING = "overlapping"      # 结论相同，条件不同
    CONDITIONAL = "conditional"      # 结论相反，条件不同，未必同时命中

class ConflictSeverity(Enum):
    """冲突严重程度"""
    CRITICAL = "critical"
    MODERATE = "moderate"
    MINOR = "minor"

@dataclass
class RuleConflict:
    """规则冲突"""
    rule1_id: str
    rule2_id: str
    conflict_type: ConflictType
    severity: ConflictSeverity
    description: str
    shared_signatures: List[str]
    resolution_suggestion: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rule1_id": self.rule1_id,
            "rule2_id": self.rule2_id,
            "type": self.conflict_type.value,
            "severity": self.severity.value,
            "description": self.description,
            "shared_signatures": self.shared_signatures,
            "resolution_suggestion": self.resolution_suggestion,
        }


def _pattern_residues(pattern: Dict[str, Any]) -> Set[int]:
    """签名对应的 n mod 8 可能取值"""
    factor = 2 if pattern.get("two") else 1
    if pattern.get("any"):
        return set(range(8))
    if "odd_all" in pattern:
        c = pattern["odd_all"]
        return {factor * c ** t % 8 for t in range(1, 5)}
    value = factor
    for c in pattern.get("odd", []):
        value = value * c % 8
    return {value}


def _describe(pattern: Dict[str, Any]) -> str:
    if pattern.get("any"):
        return "*"
    prefix = "2" if pattern.get("two") else ""
    if "odd_all" in pattern:
        return f"{prefix}p_{pattern['odd_all']}^*"
    return prefix + "".join(f"p_{c}" for c in pattern.get("odd", []))


class RuleConflictDetector:
    """规则冲突检测器"""

    def __init__(self, rules: Optional[List[Dict[str, Any]]] = None):
        self.rules = rules or []

    def detect_all_conflicts(self) -> List[RuleConflict]:
        """两两比较检测所有冲突"""
        conflicts = []
        for i, rule1 in enumerate(self.rules):
            for rule2 in self.rules[i + 1:]:
                conflict = self._detect_pair_conflict(rule1, rule2)
                if conflict:
                    conflicts.append(conflict)
        return conflicts

    def _detect_pair_conflict(self, rule1: Dict, rule2: Dict) -> Optional[RuleConflict]:
        """检测两个规则间的冲突"""
        shared = self._shared_signatures(rule1, rule2)
        if not shared:
            return None

        same_condition = self._condition_key(rule1) == self._condition_key(rule2)
        opposite = rule1['verdict'] != rule2['verdict']
        id1, id2 = rule1['id'], rule2['id']

        if opposite and same_condition:
            return RuleConflict(
                id1, id2, ConflictType.CONTRADICTORY, ConflictSeverity.CRITICAL,
                f"规则 {id1} 和 {id2} 在相同签名与条件下结论相反",
                shared, "按优先级保留非同余规则，另一条永远被遮蔽",
            )
        if opposite:
            return RuleConflict(
                id1, id2, ConflictType.CONDITIONAL, ConflictSeverity.MODERATE,
                f"规则 {id1} 和 {id2} 签名重叠、结论相反但条件不同",
                shared, "用 Tunnell 恒等式在桌面规模上核对两条规则的条件是否互斥",
            )
        if same_condition or not rule1.get('condition') or not rule2.get('condition'):
            return RuleConflict(
                id1, id2, ConflictType.REDUNDANT, ConflictSeverity.MINOR,
                f"规则 {id1} 可能与 {id2} 冗余",
                shared, "保留两条规则以记录出处，优先级决定由谁触发",
            )
        return RuleConflict(
            id1, id2, ConflictType.OVERLAPPING, ConflictSeverity.MINOR,
            f"规则 {id1} 和 {id2} 签名重叠、结论相同",
            shared, "无需处理",
        )

    @staticmethod
    def _condition_key(rule: Dict) -> str:
        return json.dumps(rule.get('condition'), sort_keys=True)

    @staticmethod
    def _gate_allows(rule: Dict, pattern: Dict[str, Any]) -> bool:
        """Gross 类条件只看 n mod 8 与奇素因子个数，可以静态判断"""
        condition = rule.get('condition') or {}
        if condition.get('type') != 'gross':
            return True
        if not _pattern_residues(pattern) & set(condition['residues']):
            return False
        if 'odd' in pattern:
            return len(pattern['odd']) <= condition['max_odd_primes']
        return True

    def _shared_signatures(self, rule1: Dict, rule2: Dict) -> List[str]:
        shared = []
        for p1 in rule1['patterns']:
            for p2 in rule2['patterns']:
                signature = self._overlap(p1, p2)
                if signature is None:
                    continue
                if self._gate_allows(rule1, signature) and self._gate_allows(rule2, signature):
                    shared.append(_describe(signature))
        return shared

    @staticmethod
    def _overlap(p1: Dict[str, Any], p2: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        """两个签名的交集，取更具体的一方；不相交返回 None"""
        if p1.get('any'):
            return p2
        if p2.get('any'):
            return p1
        if bool(p1.get('two')) != bool(p2.get('two')):
            return None
        if 'odd_all' in p1 and 'odd_all' in p2:
            return p1 if p1['odd_all'] == p2['odd_all'] else None
        if 'odd_all' in p1 or 'odd_all' in p2:
            wide, narrow = (p1, p2) if 'odd_all' in p1 else (p2, p1)
            odd = narrow.get('odd', [])
            return narrow if odd and all(c == wide['odd_all'] for c in odd) else None
        return p1 if sorted(p1.get('odd', [])) == sorted(p2.get('odd', [])) else None

    def resolve_conflict(self, conflict: RuleConflict) -> Dict[str, Any]:
        """解决规则冲突：扫描顺序中靠前的规则生效"""
        order = [rule['id'] for rule in self.rules]
        first, second = sorted(
            (conflict.rule1_id, conflict.rule2_id),
            key=lambda rid: order.index(rid) if rid in order else len(order),
        )
        if conflict.conflict_type in (ConflictType.CONTRADICTORY, ConflictType.CONDITIONAL):
            return {'resolved': True, 'action': 'shadow', 'winner': first, 'rule_id': second,
                    'reason': f'规则 {first} 优先级更高'}
        return {'resolved': False, 'action': 'keep_both', 'rule_ids': [first, second],
                'reason': '结论一致，保留两条规则'}

    def get_conflict_statistics(self) -> Dict[str, Any]:
        """获取冲突统计信息"""
        conflicts = self.detect_all_conflicts()
        stats = {
            'total_conflicts': len(conflicts),
            'by_severity': {s.value: 0 for s in ConflictSeverity},
            'by_type': {t.value: 0 for t in ConflictType},
        }
        for conflict in conflicts:
            stats['by_severity'][conflict.severity.value] += 1
            stats['by_type'][conflict.conflict_type.value] += 1
        return stats
