"""
无穷下降引擎 - 对满足 -1, 2 均为模 d 非剩余的素数 d，追踪参数元组的下降过程

每一层：前置整除检查 → 规范化 (m1, e1) -> (m, e) → 四种情形分类 →
Case 3 约化到下一层，其余情形给出模 d 的剩余方程（矛盾或显式解）。
轨迹以二叉树形式记录被选中与被否决的分支，可导出 JSON 与 DOT。
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from core.arith.ecparam import ParamTuple, Triangle, triangle_from_tuple
from core.arith.numth import (
    gauss_lemma_count,
    is_prime,
    legendre,
    sqrt_mod,
    square_root_exact,
)
from core.arith.pythag import TripleParam, parametrize_triple
from core.engine.constants import DescentConstants, ErrorMessages, LogMessages
from core.engine.oracle import search_tuples
from core.errors import (
    InconsistencyError,
    InvalidArgumentError,
    RecursionSafetyError,
)
from shared.types import CaseLabel, DescentOutcome

logger = logging.getLogger(__name__)


# ==================== 适用性 ====================

@dataclass
class ApplicabilityReport:
    """定理适用性：d 为大于 3 的素数，且 -1 与 2 都是模 d 的非剩余"""
    d: int
    applicable: bool
    is_prime: bool
    legendre_minus_one: Optional[int]
    legendre_two: Optional[int]
    reasons: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": str(self.d),
            "applicable": self.applicable,
            "is_prime": self.is_prime,
            "legendre_minus_one": self.legendre_minus_one,
            "legendre_two": self.legendre_two,
            "d_mod8": self.d % 8,
            "reasons": self.reasons,
        }


def theorem1_applicable(d: int) -> ApplicabilityReport:
    prime = d >= 2 and is_prime(d)
    reasons = []
    lm1 = l2 = None
    if not prime:
        reasons.append(f"{d} 不是素数")
    elif d <= 3:
        reasons.append(f"{d} <= 3")
    else:
        lm1, l2 = legendre(-1, d), legendre(2, d)
        reasons.append(f"(-1/{d}) = {lm1}: -1 ∈ {'QNR' if lm1 == -1 else 'QR'}_{d}")
        reasons.append(f"(2/{d}) = {l2}: 2 ∈ {'QNR' if l2 == -1 else 'QR'}_{d}")

    applicable = prime and d > 3 and lm1 == -1 and l2 == -1
    if applicable != (prime and d > 3 and d % 8 == 3):
        raise InconsistencyError(f"适用性与 d ≡ 3 (mod 8) 交叉校验不一致: d={d}")
    return ApplicabilityReport(d, applicable, prime, lm1, l2, reasons)


# ==================== 规范化 ====================

def descent_precheck(t: ParamTuple) -> Optional[str]:
    """开头的整除论证：d 为素数且 d ∤ k, d ∤ m1, d ∤ e1。通过返回 None"""
    d = t.d
    if not is_prime(d):
        return f"d = {d} 不是素数"
    for name, value in (("k", t.k), ("m1", t.m), ("e1", t.e)):
        if value % d == 0:
            return f"d | {name}: {d} | {value}"
    return None


def normalize_tuple(t: ParamTuple) -> Tuple[int, int]:
    """
    k 为奇数：m = (m1+e1)/2, e = (m1-e1)/2
    k 为偶数：m = m1+e1, e = m1-e1
    结果满足 j^2 (m+e)(m-e) d = k^2 m e，并进一步 k^2 = m^2-e^2, d j^2 = e m。
    """
    failure = descent_precheck(t)
    if failure:
        raise InvalidArgumentError(failure)

    m1, e1 = t.m, t.e
    if t.k % 2:
        if (m1 + e1) % 2:
            raise InconsistencyError(ErrorMessages.NORMALIZE_PARITY.format(t.k, m1, e1))
        m, e = (m1 + e1) // 2, (m1 - e1) // 2
    else:
        m, e = m1 + e1, m1 - e1

    if gcd(m, e) != 1 or not m > e > 0:
        raise InconsistencyError(ErrorMessages.NORMALIZE_GCD.format(m, e))
    if t.j ** 2 * (m + e) * (m - e) * t.d != t.k ** 2 * m * e:
        raise InconsistencyError(ErrorMessages.NORMALIZE_EQUATION)
    if t.k ** 2 != m * m - e * e or t.d * t.j ** 2 != e * m:
        raise InconsistencyError(ErrorMessages.NORMALIZE_EQUATION)
    return m, e


# ==================== 情形分类 ====================

@dataclass(frozen=True)
class CaseWitnesses:
    """情形见证数：m = d s^2 或 e = d t^2，m±e 为平方或两倍平方"""
    s: int
    t: int
    c1: int
    c2: int
    d_in_m: bool
    twice: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "s": str(self.s), "t": str(self.t), "c1": str(self.c1), "c2": str(self.c2),
            "d_carrier": "m" if self.d_in_m else "e",
            "pattern": "twice_squares" if self.twice else "squares",
        }


@dataclass(frozen=True)
class CaseResult:
    label: CaseLabel
    witnesses: CaseWitnesses

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label.value, "witnesses": self.witnesses.to_dict()}


_CASE_TABLE = {
    (True, False): CaseLabel.CASE1,
    (True, True): CaseLabel.CASE2,
    (False, False): CaseLabel.CASE3,
    (False, True): CaseLabel.CASE4,
}


def classify_case(d: int, m: int, e: int) -> CaseResult:
    """按 d 在 m 还是 e 中、m±e 是平方还是两倍平方，确定四种情形之一"""
    if m % d == 0:
        s, t = square_root_exact(m // d), square_root_exact(e)
        d_in_m = True
    elif e % d == 0:
        s, t = square_root_exact(m), square_root_exact(e // d)
        d_in_m = False
    else:
        raise InconsistencyError(ErrorMessages.NO_CASE.format(d, m, e))
    if s is None or t is None:
        raise InconsistencyError(ErrorMessages.NO_CASE.format(d, m, e))

    c1, c2 = square_root_exact(m + e), square_root_exact(m - e)
    twice = False
    if c1 is None or c2 is None:
        if (m + e) % 2 or (m - e) % 2:
            raise InconsistencyError(ErrorMessages.NO_CASE.format(d, m, e))
        c1, c2 = square_root_exact((m + e) // 2), square_root_exact((m - e) // 2)
        twice = True
        if c1 is None or c2 is None:
            raise InconsistencyError(ErrorMessages.NO_CASE.format(d, m, e))

    label = _CASE_TABLE[(d_in_m, twice)]
    if label == CaseLabel.CASE4 and t == 1:
        label = CaseLabel.CASE4_T1
    return CaseResult(label, CaseWitnesses(s, t, c1, c2, d_in_m, twice))


# ==================== 剩余方程 ====================

@dataclass
class ResidueCheck:
    """一个情形对应的模 d 剩余方程 residue ≡ X^2 及其代入数据"""
    case: CaseLabel
    residue: int
    modulus: int
    equation: str
    candidate: Optional[int]
    candidate_square: Optional[int]
    legendre: int
    derivable: bool = True
    sub_branch: Optional[str] = None
    lemma: Optional[Dict[str, str]] = None
    identity: Optional[str] = None
    identity_holds: Optional[bool] = None
    guard_triggered: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case": self.case.value,
            "residue": str(self.residue),
            "modulus": str(self.modulus),
            "equation": self.equation,
            "candidate": None if self.candidate is None else str(self.candidate),
            "candidate_square": None if self.candidate_square is None else str(self.candidate_square),
            "legendre": self.legendre,
            "derivable": self.derivable,
            "sub_branch": self.sub_branch,
            "lemma": self.lemma,
            "identity": self.identity,
            "identity_holds": self.identity_holds,
            "guard_triggered": self.guard_triggered,
        }


@dataclass
class ExclusionReason:
    """模 d 的矛盾：residue ≡ X^2 无解"""
    kind: str
    case: CaseLabel
    equation: str
    residue: int
    modulus: int
    candidate: Optional[int]
    candidate_square: Optional[int]
    legendre: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "case": self.case.value,
            "equation": self.equation,
            "residue": str(self.residue),
            "modulus": str(self.modulus),
            "candidate": None if self.candidate is None else str(self.candidate),
            "candidate_square": None if self.candidate_square is None else str(self.candidate_square),
            "legendre": self.legendre,
        }


def _inverse(x: int, d: int) -> Optional[int]:
    return pow(x, -1, d) if x % d else None


def _case4_split(d: int, w: CaseWitnesses) -> Tuple[Optional[str], Optional[str], int, int]:
    """d t^2 = (c1+c2)(c1-c2)：找出带 d 的因子，返回 (子分支, 载体, A, B)"""
    total, diff = w.c1 + w.c2, w.c1 - w.c2
    if total % d == 0:
        carrier, a_sq, b_sq = "sum", total // d, diff
    elif diff % d == 0:
        carrier, a_sq, b_sq = "difference", diff // d, total
    else:
        return None, None, 0, 0
    a, b = square_root_exact(a_sq), square_root_exact(b_sq)
    if a is None or b is None:
        return None, carrier, 0, 0
    if w.t == 1:
        branch = "t_equals_1"
    elif a == 1:
        branch = "t2_divides_sum" if carrier == "difference" else "t2_divides_difference"
    else:
        branch = "split_square"
    return branch, carrier, a, b


def residue_check(d: int, label: CaseLabel, w: CaseWitnesses) -> ResidueCheck:
    """代入见证数，构造该情形的剩余方程与候选解 X"""
    if label == CaseLabel.CASE1:
        # d s^2 - t^2 = c2^2  =>  -1 ≡ (c2 t^-1)^2
        inv = _inverse(w.t, d)
        candidate = None if inv is None else w.c2 * inv % d
        return _finish(ResidueCheck(
            case=label, residue=-1, modulus=d,
            equation=f"-1 ≡ ({w.c2}·{w.t}^-1)^2 (mod {d})",
            candidate=candidate, candidate_square=None, legendre=legendre(-1, d),
            derivable=inv is not None,
        ))

    if label == CaseLabel.CASE2:
        # t^2 ≡ 2c1^2, -t^2 ≡ 2c2^2  =>  -1 ≡ (2 c1 c2 t^-2)^2
        inv = _inverse(w.t * w.t, d)
        candidate = None if inv is None else 2 * w.c1 * w.c2 * inv % d
        return _finish(ResidueCheck(
            case=label, residue=-1, modulus=d,
            equation=f"-1 ≡ (2·{w.c1}·{w.c2}·{w.t}^-2)^2 (mod {d})",
            candidate=candidate, candidate_square=None, legendre=legendre(-1, d),
            derivable=inv is not None,
        ))

    if label == CaseLabel.CASE3:
        return ResidueCheck(
            case=label, residue=0, modulus=d,
            equation="Case 3 不产生剩余方程，转入约化",
            candidate=None, candidate_square=None, legendre=0, derivable=False,
        )

    # Case 4：(2s)^2 = (2c1)^2 + (2c2)^2
    total, diff = w.c1 + w.c2, w.c1 - w.c2
    guard = w.t > 1 and total % w.t == 0 and diff % w.t == 0
    branch, carrier, a, _ = _case4_split(d, w)
    check = ResidueCheck(
        case=label, residue=2, modulus=d, equation="", candidate=None,
        candidate_square=None, legendre=legendre(2, d), derivable=False,
        sub_branch=branch, guard_triggered=guard,
    )
    try:
        lemma = parametrize_triple(2 * w.c1, 2 * w.c2, 2 * w.s)
    except InvalidArgumentError:
        check.equation = f"2 ≡ X^2 (mod {d})"
        return check

    h, m_p, e_p = lemma.h, lemma.m, lemma.e
    check.lemma = {"h'": str(h), "e'": str(e_p), "m'": str(m_p)}
    if carrier == "difference":
        shifted = m_p - e_p
        rhs = h * (2 * e_p * e_p - shifted * shifted)
        check.identity = f"4·{d}·{a}^2 = h'(2e'^2-(m'-e')^2) = {rhs}"
        check.equation = f"2 ≡ (({m_p}-{e_p})·{e_p}^-1)^2 (mod {d})"
    else:
        shifted = m_p + e_p
        rhs = h * (shifted * shifted - 2 * e_p * e_p)
        check.identity = f"4·{d}·{a}^2 = h'((m'+e')^2-2e'^2) = {rhs}"
        check.equation = f"2 ≡ (({m_p}+{e_p})·{e_p}^-1)^2 (mod {d})"
    check.identity_holds = carrier is not None and rhs == 4 * d * a * a

    inv = _inverse(e_p, d)
    if carrier is not None and h % d and inv is not None:
        check.derivable = True
        check.candidate = shifted * inv % d
    return _finish(check)


def _finish(check: ResidueCheck) -> ResidueCheck:
    if check.candidate is not None:
        check.candidate_square = check.candidate * check.candidate % check.modulus
    return check


def case_exclusion(d: int, label: CaseLabel, witnesses: CaseWitnesses) -> Optional[ExclusionReason]:
    """剩余条件成立（-1 或 2 为模 d 非剩余）时返回具体矛盾，否则返回 None"""
    if label == CaseLabel.CASE3:
        return None
    check = residue_check(d, label, witnesses)
    if check.guard_triggered:
        return ExclusionReason(
            kind="common_factor", case=label,
            equation=f"t = {witnesses.t} > 1 同时整除 c1+c2 与 c1-c2，与 gcd(c1, t) = 1 矛盾",
            residue=check.residue, modulus=d, candidate=None, candidate_square=None,
            legendre=check.legendre,
        )
    if check.legendre == -1 and check.derivable:
        return ExclusionReason(
            kind="quadratic_nonresidue", case=label, equation=check.equation,
            residue=check.residue, modulus=d, candidate=check.candidate,
            candidate_square=check.candidate_square, legendre=-1,
        )
    return None


def verify_exclusion(reason: ExclusionReason) -> bool:
    """独立复核：residue ≡ X^2 (mod d) 确实无解"""
    if reason.kind == "common_factor":
        return True
    if legendre(reason.residue, reason.modulus) != -1:
        return False
    if reason.candidate_square is not None and reason.candidate_square == reason.residue % reason.modulus:
        return False
    return sqrt_mod(reason.residue, reason.modulus) is None


def survival_solution(check: ResidueCheck) -> Optional[int]:
    """剩余方程可解时给出显式解：优先用代入得到的候选值，否则取最小根"""
    target = check.residue % check.modulus
    if legendre(check.residue, check.modulus) != 1:
        return None
    if check.candidate is not None and check.candidate_square == target:
        return check.candidate
    return sqrt_mod(check.residue, check.modulus)


# ==================== Case 3 约化 ====================

def case3_lemma(s: int, c1: int, c2: int) -> TripleParam:
    """(2s)^2 = (c1+c2)^2 + (c1-c2)^2 的参数化"""
    try:
        return parametrize_triple(c1 + c2, c1 - c2, 2 * s)
    except InvalidArgumentError as exc:
        raise InconsistencyError(ErrorMessages.NO_CASE.format("-", c1, c2)) from exc


def case3_reduce(d: int, s: int, t: int, c1: int, c2: int) -> ParamTuple:
    """
    c1+c2 = h'e'm', c1-c2 = h'(m'^2-e'^2)/2 给出
    d = (h'e'm'/(2t))^2 (m'^2-e'^2)/(e'm')，约去 gcd(h'e'm', t) 得到下一层元组。
    """
    lemma = case3_lemma(s, c1, c2)
    slope = Fraction(lemma.h * lemma.e * lemma.m, t)
    try:
        result = ParamTuple(slope.numerator, slope.denominator, lemma.m, lemma.e, d)
    except InvalidArgumentError as exc:
        raise InconsistencyError(ErrorMessages.REDUCE_MISMATCH.format(
            (slope.numerator, slope.denominator, lemma.m, lemma.e), d)) from exc

    current = s * s
    if max(result.m, result.e) >= current:
        raise RecursionSafetyError(ErrorMessages.NOT_SHRINKING.format(current, result.m))
    return result


# ==================== 终止分析 ====================

@dataclass
class TerminalAnalysis:
    """j = 1 时 d = k^2 me/(m^2-e^2)，e m = d 只剩 (d, 1) 与 (1, d) 两支"""
    d: int
    k: int
    m: int
    e: int
    branches: List[Dict[str, Any]]
    contradiction: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": str(self.d), "k": str(self.k), "m": str(self.m), "e": str(self.e),
            "branches": self.branches, "contradiction": self.contradiction,
        }


def terminal_analysis(d: int, k: int, m: int, e: int) -> TerminalAnalysis:
    """j = 1 时的终止分析，(m, e) 是规范化之后的一对（d = e·m）"""
    branches = []
    # (m, e) = (d, 1)：k^2 = d^2 - 1 夹在两个相邻平方数之间
    diff = d * d - 1
    root = square_root_exact(diff)
    branches.append({
        "m": str(d), "e": "1",
        "m2_minus_e2": str(diff),
        "possible": root is not None,
        "reason": f"k^2 = {d}^2 - 1 = {diff}" + (" 是平方数" if root is not None else " 不是平方数"),
    })
    # (m, e) = (1, d)：m^2 - e^2 < 0
    branches.append({
        "m": "1", "e": str(d),
        "m2_minus_e2": str(1 - d * d),
        "possible": False,
        "reason": f"m = 1, e = {d}，m^2 - e^2 = {1 - d * d} < 0",
    })
    matches = (m, e) in ((d, 1), (1, d))
    return TerminalAnalysis(
        d=d, k=k, m=m, e=e, branches=branches,
        contradiction=not any(b["possible"] for b in branches) or not matches,
    )


# ==================== 轨迹 ====================

@dataclass
class BranchNode:
    """二叉分支：同一层的两个候选之一"""
    name: str
    taken: bool
    reason: str

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "taken": self.taken, "reason": self.reason}


@dataclass
class DescentState:
    d: int
    level: int
    tuple: ParamTuple
    normalized: Optional[Tuple[int, int]] = None
    case: Optional[CaseResult] = None
    residue: Optional[ResidueCheck] = None
    exclusion: Optional[ExclusionReason] = None
    solution: Optional[int] = None
    reduction: Optional[Dict[str, str]] = None
    precheck_failure: Optional[str] = None
    terminal: Optional[TerminalAnalysis] = None
    branches: List[BranchNode] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "tuple": self.tuple.to_dict(),
            "normalized": None if self.normalized is None else {
                "m": str(self.normalized[0]), "e": str(self.normalized[1])},
            "case": self.case.to_dict() if self.case else None,
            "residue": self.residue.to_dict() if self.residue else None,
            "exclusion": self.exclusion.to_dict() if self.exclusion else None,
            "solution": None if self.solution is None else str(self.solution),
            "reduction": self.reduction,
            "precheck_failure": self.precheck_failure,
            "terminal": self.terminal.to_dict() if self.terminal else None,
            "branches": [b.to_dict() for b in self.branches],
        }


@dataclass
class DescentTrace:
    d: int
    applicability: ApplicabilityReport
    outcome: DescentOutcome
    states: List[DescentState] = field(default_factory=list)
    seed: Optional[ParamTuple] = None
    seeds_found: int = 0
    bound: Optional[int] = None
    note: str = ""
    witness: Optional[Triangle] = None

    @property
    def final(self) -> Optional[DescentState]:
        return self.states[-1] if self.states else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": str(self.d),
            "applicability": self.applicability.to_dict(),
            "outcome": self.outcome.value,
            "note": self.note,
            "bound": None if self.bound is None else str(self.bound),
            "seed": self.seed.to_dict() if self.seed else None,
            "seeds_found": self.seeds_found,
            "states": [s.to_dict() for s in self.states],
            "witness": self.witness.to_dict() if self.witness else None,
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=indent)

    def to_dot(self) -> str:
        """Graphviz 二叉树：实线为选中分支，虚线为被否决的分支"""
        lines = [f'digraph descent_{self.d} {{', '  node [shape=box, fontname="monospace"];']
        for state in self.states:
            root = f"L{state.level}"
            t = state.tuple
            lines.append(f'  {root} [label="level {state.level}\\n(k,j,m,e)=({t.k},{t.j},{t.m},{t.e})"];')
            parent = root
            for i, branch in enumerate(state.branches):
                node = f"{root}_b{i}"
                style = "solid" if branch.taken else "dashed"
                label = f"{branch.name}\\n{branch.reason}".replace('"', "'")
                lines.append(f'  {node} [label="{label}", style={style}];')
                lines.append(f'  {parent} -> {node} [style={style}];')
                if branch.taken:
                    parent = node
            if state.level + 1 < len(self.states):
                lines.append(f'  {parent} -> L{state.level + 1} [label="Case 3"];')
        end = f"end_{self.outcome.value}"
        lines.append(f'  {end} [label="{self.outcome.value}", shape=ellipse];')
        if self.states:
            last = self.states[-1]
            taken = [i for i, b in enumerate(last.branches) if b.taken]
            tail = f"L{last.level}_b{taken[-1]}" if taken else f"L{last.level}"
            lines.append(f"  {tail} -> {end};")
        lines.append("}")
        return "\n".join(lines)


def _record_case_branches(state: DescentState, d: int, result: CaseResult, m: int, e: int):
    w = result.witnesses
    state.branches.append(BranchNode(
        "m = d s^2", w.d_in_m,
        f"{d} | m = {m}" if w.d_in_m else f"{d} ∤ m = {m}",
    ))
    state.branches.append(BranchNode(
        "e = d t^2", not w.d_in_m,
        f"{d} | e = {e}" if not w.d_in_m else f"{d} ∤ e = {e}",
    ))
    state.branches.append(BranchNode(
        "m±e = c^2", not w.twice,
        f"m+e = {m + e}, m-e = {m - e}" + ("" if not w.twice else " 不全是平方数"),
    ))
    state.branches.append(BranchNode(
        "m±e = 2c^2", w.twice,
        f"m+e = 2·{w.c1}^2, m-e = 2·{w.c2}^2" if w.twice else "m±e 为奇数",
    ))


def _coerce_seed(d: int, seed: Union[ParamTuple, Sequence[int]]) -> ParamTuple:
    if isinstance(seed, ParamTuple):
        if seed.d != d:
            raise InvalidArgumentError(ErrorMessages.BAD_TUPLE.format(seed.to_dict()))
        return seed
    k, j, m, e = seed
    return ParamTuple(k, j, m, e, d)


def run_descent(
    d: int,
    seed: Optional[Union[ParamTuple, Sequence[int]]] = None,
    bound: Optional[int] = None,
) -> DescentTrace:
    """
    规范化 → 分类 → (排除 | 约化) 直到矛盾、见证存活或终止分析。
    未给 seed 时在 bound 内穷举搜索第 0 层元组。
    """
    if not isinstance(d, int) or d < 2 or not is_prime(d):
        raise InvalidArgumentError(ErrorMessages.NOT_PRIME.format(d))
    applicability = theorem1_applicable(d)

    seeds_found = 0
    if seed is None:
        if bound is None:
            from shared.config.config_manager import config_manager
            bound = config_manager.get_descent_bound()
        report = search_tuples(d, bound)
        seeds_found = len(report.hits)
        if not report.hits:
            note = f"上界 {bound} 内无解"
            if applicability.applicable:
                note += "（与定理一致）"
            logger.info(LogMessages.DESCENT_DONE.format(d, DescentOutcome.NO_SEED.value))
            return DescentTrace(d, applicability, DescentOutcome.NO_SEED,
                                bound=bound, note=note)
        seed_tuple = next((t for t in report.hits if descent_precheck(t) is None), report.hits[0])
    else:
        seed_tuple = _coerce_seed(d, seed)

    trace = DescentTrace(d, applicability, DescentOutcome.WITNESS_FOUND,
                         seed=seed_tuple, seeds_found=seeds_found, bound=bound)
    trace.witness = triangle_from_tuple(seed_tuple)

    current = seed_tuple
    for level in range(DescentConstants.MAX_LEVELS):
        state = DescentState(d=d, level=level, tuple=current)
        trace.states.append(state)

        failure = descent_precheck(current)
        if failure:
            state.precheck_failure = failure
            state.branches.append(BranchNode("precheck", False, failure))
            trace.outcome = DescentOutcome.WITNESS_FOUND
            trace.note = f"第 {level} 层元组不满足前置整除条件: {failure}"
            break

        m, e = normalize_tuple(current)
        state.normalized = (m, e)

        if current.j == 1:
            state.terminal = terminal_analysis(d, current.k, m, e)
            trace.outcome = DescentOutcome.TERMINATED
            trace.note = "j = 1，进入终止分析"
            break

        result = classify_case(d, m, e)
        state.case = result
        _record_case_branches(state, d, result, m, e)
        w = result.witnesses
        logger.debug(LogMessages.DESCENT_LEVEL.format(d, level, result.label.value))

        if result.label == CaseLabel.CASE3:
            lemma = case3_lemma(w.s, w.c1, w.c2)
            nxt = case3_reduce(d, w.s, w.t, w.c1, w.c2)
            state.reduction = {
                "h'": str(lemma.h), "e'": str(lemma.e), "m'": str(lemma.m),
                "next": f"({nxt.k},{nxt.j},{nxt.m},{nxt.e})",
            }
            state.branches.append(BranchNode("reduce", True, f"(2s)^2 = ({w.c1 + w.c2})^2 + ({w.c1 - w.c2})^2"))
            current = nxt
            continue

        state.residue = residue_check(d, result.label, w)
        if state.residue.sub_branch:
            state.branches.append(BranchNode(state.residue.sub_branch, True, state.residue.identity or ""))
        reason = case_exclusion(d, result.label, w)
        if reason is not None:
            if not verify_exclusion(reason):
                raise InconsistencyError(ErrorMessages.EXCLUSION_UNSOUND.format(reason.equation))
            state.exclusion = reason
            state.branches.append(BranchNode("excluded", True, reason.equation))
            trace.outcome = DescentOutcome.CONTRADICTION
            trace.note = reason.equation
        else:
            state.solution = survival_solution(state.residue)
            if state.solution is not None and (
                state.solution * state.solution - state.residue.residue
            ) % d:
                raise InconsistencyError(ErrorMessages.EXCLUSION_UNSOUND.format(state.residue.equation))
            state.branches.append(BranchNode(
                "survives", True,
                f"X = {state.solution}: {state.solution}^2 ≡ {state.residue.residue} (mod {d})"
                if state.solution is not None else "剩余方程无法导出",
            ))
            trace.outcome = DescentOutcome.WITNESS_FOUND
            trace.note = f"{result.label.value} 不产生矛盾"
        break
    else:
        raise RecursionSafetyError(ErrorMessages.TOO_MANY_LEVELS.format(DescentConstants.MAX_LEVELS))

    logger.info(LogMessages.DESCENT_DONE.format(d, trace.outcome.value))
    return trace


def sweep(ds: Sequence[int], bound: Optional[int] = None, workers: Optional[int] = None) -> List[DescentTrace]:
    """对多个 d 并行运行下降，各自状态互相隔离，结果按输入顺序返回"""
    if workers is None:
        from shared.config.config_manager import config_manager
        workers = config_manager.get_workers()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(lambda d: run_descent(d, bound=bound), ds))


# ==================== 推论 ====================

@dataclass
class CorollaryReport:
    p: int
    residue_mod8: int
    legendre_two: int
    gauss_count: int
    closed_form: int
    predicted: Optional[int]
    asserted: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": str(self.p),
            "p_mod8": self.residue_mod8,
            "legendre_two": self.legendre_two,
            "gauss_count": self.gauss_count,
            "closed_form": self.closed_form,
            "predicted": self.predicted,
            "asserted": self.asserted,
        }


def corollary1_check(p: int) -> CorollaryReport:
    """
    p ≡ 7 (mod 8) 时断言 (2/p) = 1 且 Gauss 计数 n = 2k+2 (p = 8k+7)；
    对所有奇素数另外校验 n = (p-1)/2 - floor(p/4)。
    """
    if not isinstance(p, int) or p < 3 or not is_prime(p):
        raise InvalidArgumentError(ErrorMessages.NOT_ODD_PRIME.format(p))
    symbol = legendre(2, p)
    n = gauss_lemma_count(2, p)
    closed = (p - 1) // 2 - p // 4
    if n != closed:
        raise InconsistencyError(ErrorMessages.COROLLARY_FAILED.format(p, n, closed))

    predicted = None
    asserted = p % 8 == 7
    if asserted:
        predicted = 2 * ((p - 7) // 8) + 2
        if n != predicted or symbol != 1:
            raise InconsistencyError(ErrorMessages.COROLLARY_FAILED.format(p, n, predicted))
    return CorollaryReport(p, p % 8, symbol, n, closed, predicted, asserted)
