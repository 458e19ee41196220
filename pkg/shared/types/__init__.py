"""
类型定义模块 - 各引擎与命令行共享的枚举和有理数工具
JSON 输出中的数值一律使用精确字符串，从不出现浮点数
"""

from enum import Enum
from fractions import Fraction
from typing import Union


# ==================== 有理数 ====================

# 分数始终约分，分母为正
Rational = Fraction


def rational_to_str(value: Union[int, Fraction]) -> str:
    """序列化为 "p/q"，整数也带分母 1"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """解析 "p/q" 或 "p"，拒绝小数写法"""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"只接受精确有理数 p/q: {text}")
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


# ==================== 枚举类型 ====================

class TunnellForm(str, Enum):
    """Tunnell 三元二次型标签"""
    A = "A"
    B = "B"
    C = "C"
    D = "D"


class TunnellOutcome(str, Enum):
    """Tunnell 恒等式结果"""
    HOLDS = "holds"
    FAILS = "fails"


class CriterionOutcome(str, Enum):
    """判别表结论"""
    CONGRUENT = "congruent"
    NON_CONGRUENT = "non_congruent"
    NO_RULE = "no_rule"


class CaseLabel(str, Enum):
    """下降证明中按 (m, e) 奇偶与公因子划分的四种情形"""
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4 = "Case4"
    CASE4_T1 = "Case4_t1"


class DescentOutcome(str, Enum):
    """下降轨迹的终局"""
    CONTRADICTION = "contradiction"
    TERMINATED = "terminated"
    WITNESS_FOUND = "witness_found"
    NO_SEED = "no_seed"


class VerdictStatus(str, Enum):
    """综合报告结论"""
    CONGRUENT_WITNESSED = "congruent_witnessed"
    CONGRUENT_ASSUMING_BSD = "congruent_assuming_bsd"
    NON_CONGRUENT = "non_congruent"
    UNKNOWN = "unknown"


class EvidenceSource(str, Enum):
    """证据来源"""
    CRITERIA = "criteria"
    TUNNELL = "tunnell"
    ORACLE = "oracle"
    DESCENT = "descent"
