"""
判别表引擎 - 按素数签名（p_k 表示模 8 余 k 的素数）判定同余或非同余

规则以数据形式存放在 shared/rules/criteria_rules.json，按固定优先级扫描：
非同余规则在前，同余规则在后。命中规则时记录所用的分解与每个 Legendre 值，
并可独立复核。
"""

import json
import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from math import isqrt
from typing import Any, Dict, List, Optional, Tuple

from core.arith.numth import Factorization, factorize, is_prime, legendre
from core.engine.constants import ErrorMessages, LogMessages
from core.engine.rule_conflict import RuleConflict, RuleConflictDetector
from core.errors import InconsistencyError, InvalidArgumentError, NoDecompositionError
from shared.types import CriterionOutcome

logger = logging.getLogger(__name__)

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


@dataclass
class SymbolEvaluation:
    """一次 Legendre 符号求值"""
    a: int
    p: int
    value: int

    def to_dict(self) -> Dict[str, Any]:
        return {"symbol": f"({self.a}/{self.p})", "a": str(self.a), "p": str(self.p), "value": self.value}


@dataclass
class CriterionVerdict:
    """判别表结论，附带出处与复核数据"""
    n: int
    verdict: CriterionOutcome
    rule_id: Optional[str] = None
    citation: Optional[str] = None
    factorization: Optional[Factorization] = None
    evaluations: List[SymbolEvaluation] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    shadowed: List[str] = field(default_factory=list)
    conflicts: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": str(self.n),
            "verdict": self.verdict.value,
            "rule_id": self.rule_id,
            "citation": self.citation,
            "factorization": self.factorization.to_dict() if self.factorization else None,
            "evaluations": [ev.to_dict() for ev in self.evaluations],
            "details": self.details,
            "shadowed": self.shadowed,
            "conflicts": self.conflicts,
        }


# ==================== a^2 + 4b^2 分解 ====================

def _sqrt_minus_one(p: int) -> int:
    """p ≡ 1 (mod 4) 时 -1 的一个模 p 平方根"""
    c = 2
    while legendre(c, p) != -1:
        c += 1
    return pow(c, (p - 1) // 4, p)


def a_4b_decomposition(p: int) -> Tuple[int, int]:
    """
    Cornacchia 算法求 p = x^2 + y^2，奇数部分为 a，偶数部分的一半为 b。
    表示在符号与次序之外唯一，a > 0 时 b 自然最小。
    """
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidArgumentError(ErrorMessages.NOT_PRIME.format(p))
    if p % 4 != 1:
        raise NoDecompositionError(ErrorMessages.NO_DECOMPOSITION.format(p))

    r0, r1 = p, _sqrt_minus_one(p)
    limit = isqrt(p)
    while r1 > limit:
        r0, r1 = r1, r0 % r1
    x = r1
    y = isqrt(p - x * x)
    if x * x + y * y != p:
        raise InconsistencyError(ErrorMessages.NO_DECOMPOSITION.format(p))

    a, even = (x, y) if x % 2 else (y, x)
    b = even // 2
    if a <= 0 or b <= 0 or a * a + 4 * b * b != p:
        raise InconsistencyError(ErrorMessages.NO_DECOMPOSITION.format(p))
    return a, b


# ==================== 规则表 ====================

_BUILTIN_RULES: List[Dict[str, Any]] = [
    {
        "id": "Iskra-1", "verdict": "non_congruent", "priority": 10, "source": "Iskra",
        "citation": "Iskra 1: p_3, 2p_5, p_3q_3, 2p_5q_5 (also Genocchi)",
        "patterns": [{"two": False, "odd": [3]}, {"two": True, "odd": [5]},
                     {"two": False, "odd": [3, 3]}, {"two": True, "odd": [5, 5]}],
        "condition": None,
    },
    {
        "id": "Monsky-1", "verdict": "congruent", "priority": 110, "source": "Monsky",
        "citation": "Monsky 1: p_5, p_7, 2p_7 (also Stephens)",
        "patterns": [{"two": False, "odd": [5]}, {"two": False, "odd": [7]},
                     {"two": True, "odd": [7]}],
        "condition": None,
    },
    {
        "id": "Monsky-2", "verdict": "congruent", "priority": 120, "source": "Monsky",
        "citation": "Monsky 2: 2p_3 (also Heegner, Birch)",
        "patterns": [{"two": True, "odd": [3]}],
        "condition": None,
    },
]


def pattern_matches(pattern: Dict[str, Any], fact: Factorization) -> bool:
    """签名是否匹配：含 2 与否、奇素因子剩余类多重集"""
    if pattern.get("any"):
        return True
    if bool(pattern.get("two")) != fact.has_two:
        return False
    classes = [p % 8 for p in fact.odd_primes]
    if "odd_all" in pattern:
        return bool(classes) and all(c == pattern["odd_all"] for c in classes)
    return Counter(classes) == Counter(pattern.get("odd", []))


class CriteriaTable:
    """判别规则表"""

    def __init__(self, rules_path: Optional[str] = None):
        self.rules_path = rules_path
        self.rules: List[Dict[str, Any]] = []
        self.conflicts: List[RuleConflict] = []
        self._load_rules()

    def _resolve_path(self) -> str:
        path = self.rules_path
        if path is None:
            from shared.config.config_manager import config_manager
            path = config_manager.get_rules_path()
        if not os.path.isabs(path):
            path = os.path.join(PROJECT_ROOT, path)
        return path

    def _load_rules(self):
        """加载规则表，文件缺失或损坏时回退到内置规则"""
        path = self._resolve_path()
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
            rules = data.get('rules', [])
        except (OSError, json.JSONDecodeError) as exc:
            logger.warning(LogMessages.RULES_LOAD_FAILED.format(exc))
            rules = [dict(rule) for rule in _BUILTIN_RULES]

        self.rules = sorted(
            rules,
            key=lambda r: (r['verdict'] != CriterionOutcome.NON_CONGRUENT.value, r['priority'], r['id']),
        )
        logger.info(LogMessages.RULES_LOADED.format(len(self.rules)))

        self.conflicts = RuleConflictDetector(self.rules).detect_all_conflicts()
        if self.conflicts:
            logger.info(LogMessages.RULE_CONFLICTS.format(len(self.conflicts)))

    def get_rule(self, rule_id: str) -> Dict[str, Any]:
        for rule in self.rules:
            if rule['id'] == rule_id:
                return rule
        raise KeyError(rule_id)

    # ---------- 条件求值 ----------

    def _evaluate_condition(
        self, rule: Dict[str, Any], fact: Factorization
    ) -> Tuple[bool, List[SymbolEvaluation], Dict[str, Any]]:
        condition = rule.get('condition')
        if not condition:
            return True, [], {}

        kind = condition['type']
        if kind == 'legendre':
            return self._check_legendre(condition, fact)
        if kind == 'tournament':
            return self._check_tournament(condition, fact)
        if kind == 'bastien':
            return self._check_bastien(condition, fact)
        if kind == 'gross':
            return self._check_gross(condition, fact)
        raise InvalidArgumentError(f"未知的规则条件类型: {kind}")

    @staticmethod
    def _check_legendre(condition, fact):
        top = next(p for p in fact.odd_primes if p % 8 == condition['top'])
        bottom = next(p for p in fact.odd_primes if p % 8 == condition['bottom'])
        value = legendre(top, bottom)
        return value == condition['value'], [SymbolEvaluation(top, bottom, value)], {}

    @staticmethod
    def _check_tournament(condition, fact):
        """寻找排列使 (p_m/p_n) = value 对所有 m < n 成立"""
        remaining = sorted(fact.odd_primes)
        order: List[int] = []
        while remaining:
            head = next(
                (p for p in remaining
                 if all(legendre(p, q) == condition['value'] for q in remaining if q != p)),
                None,
            )
            if head is None:
                break
            order.append(head)
            remaining.remove(head)

        evaluations = []
        if remaining:
            return False, evaluations, {"ordering": None}
        for i, p in enumerate(order):
            for q in order[i + 1:]:
                evaluations.append(SymbolEvaluation(p, q, legendre(p, q)))
        ok = all(ev.value == condition['value'] for ev in evaluations)
        return ok, evaluations, {"ordering": [str(p) for p in order]}

    @staticmethod
    def _check_bastien(condition, fact):
        p = fact.odd_primes[0]
        a, b = a_4b_decomposition(p)
        canonical = legendre(a + 2 * b, p)
        alternate = legendre(-a + 2 * b, p)
        logger.info(LogMessages.BASTIEN_ALTERNATE.format(p, canonical, alternate))
        evaluations = [SymbolEvaluation(a + 2 * b, p, canonical)]
        details = {
            "a": str(a), "b": str(b),
            "alternate": SymbolEvaluation(-a + 2 * b, p, alternate).to_dict(),
        }
        return canonical == condition['value'], evaluations, details

    @staticmethod
    def _check_gross(condition, fact):
        residue = fact.n % 8
        odd_count = len(fact.odd_primes)
        ok = residue in condition['residues'] and odd_count <= condition['max_odd_primes']
        return ok, [], {"n_mod8": residue, "odd_prime_count": odd_count}

    # ---------- 匹配与分类 ----------

    def matching_rules(self, fact: Factorization) -> List[Tuple[Dict[str, Any], List[SymbolEvaluation], Dict[str, Any]]]:
        """按优先级返回所有命中的规则"""
        matched = []
        for rule in self.rules:
            if not any(pattern_matches(pat, fact) for pat in rule['patterns']):
                continue
            ok, evaluations, details = self._evaluate_condition(rule, fact)
            if ok:
                matched.append((rule, evaluations, details))
        return matched

    def classify(self, n: int) -> CriterionVerdict:
        if not isinstance(n, int) or n < 1:
            raise InvalidArgumentError(ErrorMessages.NON_POSITIVE.format(n))
        fact = factorize(n)
        if not fact.squarefree:
            raise InvalidArgumentError(ErrorMessages.NOT_SQUAREFREE.format(n))

        matched = self.matching_rules(fact)
        if not matched:
            return CriterionVerdict(n=n, verdict=CriterionOutcome.NO_RULE, factorization=fact)

        rule, evaluations, details = matched[0]
        outcome = CriterionOutcome(rule['verdict'])
        verdict = CriterionVerdict(
            n=n,
            verdict=outcome,
            rule_id=rule['id'],
            citation=rule['citation'],
            factorization=fact,
            evaluations=evaluations,
            details=details,
        )
        for other, _, _ in matched[1:]:
            logger.debug(LogMessages.RULE_SHADOWED.format(n, other['id']))
            verdict.shadowed.append(other['id'])
            if other['verdict'] != rule['verdict']:
                verdict.conflicts.append(other['id'])

        logger.info(LogMessages.RULE_FIRED.format(
            n, rule['id'], outcome.value, fact.describe(),
            [ev.to_dict()["symbol"] + f"={ev.value}" for ev in evaluations],
        ))
        self.recheck(verdict)
        return verdict

    def recheck(self, verdict: CriterionVerdict) -> None:
        """从头重新分解并重算条件，与记录的数据比对"""
        if verdict.rule_id is None:
            return
        fact = factorize(verdict.n)
        rule = self.get_rule(verdict.rule_id)
        ok = any(pattern_matches(pat, fact) for pat in rule['patterns'])
        if ok:
            ok, evaluations, _ = self._evaluate_condition(rule, fact)
            ok = ok and [(e.a, e.p, e.value) for e in evaluations] == [
                (e.a, e.p, e.value) for e in verdict.evaluations
            ]
        for ev in verdict.evaluations:
            ok = ok and legendre(ev.a, ev.p) == ev.value
        if not ok or fact.factors != verdict.factorization.factors:
            raise InconsistencyError(ErrorMessages.RULE_RECHECK_FAILED.format(verdict.rule_id, verdict.n))


# 全局判别表实例
criteria_table = CriteriaTable()


def classify_by_tables(n: int, table: Optional[CriteriaTable] = None) -> CriterionVerdict:
    """按判别表分类无平方因子的 n"""
    return (table or criteria_table).classify(n)
