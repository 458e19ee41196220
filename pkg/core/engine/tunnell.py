"""
Tunnell 计数引擎 - 四个三元二次型的表示计数与恒等式检查

A: 2x^2 + y^2 + 32z^2    B: 2x^2 + y^2 + 8z^2
C: 8x^2 + 2y^2 + 64z^2   D: 8x^2 + 2y^2 + 16z^2

奇数 n 检查 2A = B，偶数 n 检查 2C = D。不成立即无条件证明 n 不是同余数；
成立只是在 BSD 猜想下的同余证据。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from core.arith.numth import exact_isqrt_array, factorize
from core.engine.constants import ErrorMessages, LogMessages, TunnellConstants
from core.errors import InvalidArgumentError
from shared.types import CriterionOutcome, TunnellForm, TunnellOutcome

logger = logging.getLogger(__name__)

VERDICT_NON_CONGRUENT = "non_congruent"
VERDICT_ASSUMING_BSD = "congruent_assuming_bsd"


@dataclass(frozen=True)
class TunnellCounts:
    """四个二次型的表示个数"""
    n: int
    a_n: int
    b_n: int
    c_n: int
    d_n: int

    def to_dict(self) -> Dict[str, str]:
        return {
            "n": str(self.n),
            "A": str(self.a_n), "B": str(self.b_n),
            "C": str(self.c_n), "D": str(self.d_n),
        }


@dataclass(frozen=True)
class TunnellResult:
    """恒等式检查结果"""
    counts: TunnellCounts
    outcome: TunnellOutcome

    @property
    def holds(self) -> bool:
        return self.outcome == TunnellOutcome.HOLDS

    @property
    def verdict(self) -> str:
        return VERDICT_ASSUMING_BSD if self.holds else VERDICT_NON_CONGRUENT

    @property
    def criterion(self) -> CriterionOutcome:
        return CriterionOutcome.CONGRUENT if self.holds else CriterionOutcome.NON_CONGRUENT

    def to_dict(self) -> Dict[str, Any]:
        n = self.counts.n
        return {
            "n": str(n),
            "counts": self.counts.to_dict(),
            "identity": "2A=B" if n % 2 else "2C=D",
            "outcome": self.outcome.value,
            "verdict": self.verdict,
        }


def _coefficients(form: Union[str, TunnellForm]) -> Tuple[int, int, int]:
    key = form.value if isinstance(form, TunnellForm) else str(form)
    try:
        return TunnellConstants.FORM_COEFFICIENTS[key]
    except KeyError:
        raise InvalidArgumentError(ErrorMessages.UNKNOWN_FORM.format(form))


def _count_stripe(n: int, coeffs: Tuple[int, int, int], xs: List[int]) -> int:
    """统计一个 x 条带内的解数，z 方向向量化"""
    cx, cy, cz = coeffs
    z_max = isqrt(n // cz)
    z = np.arange(-z_max, z_max + 1, dtype=np.int64)
    z_part = cz * z * z
    total = 0
    for x in xs:
        rest = n - cx * x * x - z_part
        usable = (rest >= 0) & (rest % cy == 0)
        if not usable.any():
            continue
        v = rest[usable] // cy
        roots = exact_isqrt_array(v)
        square = roots * roots == v
        # y = 0 只有一个解，其余 ±y 两个
        total += int(np.where(roots[square] == 0, 1, 2).sum())
    return total


def count_form(n: int, form: Union[str, TunnellForm], workers: Optional[int] = None) -> int:
    """
    统计满足所选二次型 = n 的整数三元组 (x, y, z) 个数（含符号与零）。
    按 x 条带分给工作线程，结果与线程数无关。
    """
    coeffs = _coefficients(form)
    if n < 1:
        return 0

    from shared.config.config_manager import config_manager
    tunnell_config = config_manager.get_tunnell_config()
    if n > tunnell_config["max_n"]:
        raise InvalidArgumentError(ErrorMessages.TUNNELL_TOO_LARGE.format(tunnell_config["max_n"], n))
    workers = workers or tunnell_config["workers"]

    x_max = isqrt(n // coeffs[0])
    xs = list(range(-x_max, x_max + 1))
    if workers <= 1 or len(xs) < 2 * workers:
        return _count_stripe(n, coeffs, xs)

    stripes = [xs[i::workers] for i in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        partial = pool.map(lambda stripe: _count_stripe(n, coeffs, stripe), stripes)
    return sum(partial)


def tunnell_counts(n: int, workers: Optional[int] = None) -> TunnellCounts:
    return TunnellCounts(
        n=n,
        a_n=count_form(n, TunnellForm.A, workers),
        b_n=count_form(n, TunnellForm.B, workers),
        c_n=count_form(n, TunnellForm.C, workers),
        d_n=count_form(n, TunnellForm.D, workers),
    )


def tunnell_identity(n: int, workers: Optional[int] = None) -> TunnellResult:
    """n 必须无平方因子（先按平方缩放规律约化）"""
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(ErrorMessages.NON_POSITIVE.format(n))
    if not factorize(n).squarefree:
        raise InvalidArgumentError(ErrorMessages.NOT_SQUAREFREE.format(n))

    counts = tunnell_counts(n, workers)
    if n % 2:
        holds = 2 * counts.a_n == counts.b_n
    else:
        holds = 2 * counts.c_n == counts.d_n
    outcome = TunnellOutcome.HOLDS if holds else TunnellOutcome.FAILS

    logger.info(LogMessages.TUNNELL_COUNTS.format(
        n, counts.a_n, counts.b_n, counts.c_n, counts.d_n, outcome.value
    ))
    return TunnellResult(counts=counts, outcome=outcome)
