"""
穷举搜索 - 各解析模块的独立基准

空结果一律表示"在上界内为空"，不是证明。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np

from core.arith.ecparam import ParamTuple, Triangle
from core.arith.numth import exact_isqrt_array, factorize, square_root_exact
from core.arith.pythag import TripleParam, generate_triple
from core.engine.constants import (
    ErrorMessages,
    LogMessages,
    NumthConstants,
    SearchConstants,
    TunnellConstants,
)
from core.errors import InvalidArgumentError
from shared.types import TunnellForm

logger = logging.getLogger(__name__)

Hit = Union[ParamTuple, Triangle]


@dataclass
class SearchReport:
    """一次有界搜索的结果"""
    kind: str
    target: int
    bound: int
    hits: List[Hit] = field(default_factory=list)
    exhaustive: bool = True

    @property
    def empty(self) -> bool:
        return not self.hits

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "target": str(self.target),
            "bound": str(self.bound),
            "exhaustive": self.exhaustive,
            "hits": [hit.to_dict() for hit in self.hits],
            "note": "empty up to bound" if self.empty else None,
        }


def _workers(workers: Optional[int]) -> int:
    if workers:
        return workers
    from shared.config.config_manager import config_manager
    return config_manager.get_workers()


def tuple_from_pair(d: int, m: int, e: int) -> Optional[ParamTuple]:
    """
    检查 d*e*m/(m^2-e^2) 是否为有理数平方 (r/q)^2；是则 k/j = 2r/q。
    构造 ParamTuple 时会再次精确校验参数方程。
    """
    num = d * e * m
    den = m * m - e * e
    g = gcd(num, den)
    r = square_root_exact(num // g)
    q = square_root_exact(den // g)
    if r is None or q is None:
        return None
    slope = Fraction(2 * r, q)
    return ParamTuple(slope.numerator, slope.denominator, m, e, d)


# ==================== 参数元组搜索 ====================

def _tuple_stripe(d: int, ms: Iterable[int]) -> List[ParamTuple]:
    hits = []
    for m in ms:
        e = np.arange(1, m, dtype=np.int64)
        e = e[np.gcd(e, m) == 1]
        num = d * e * m
        den = m * m - e * e
        g = np.gcd(num, den)
        top, bottom = num // g, den // g
        r_top, r_bottom = exact_isqrt_array(top), exact_isqrt_array(bottom)
        squares = (r_top * r_top == top) & (r_bottom * r_bottom == bottom)
        for e_hit in e[squares]:
            hit = tuple_from_pair(d, m, int(e_hit))
            if hit is not None:
                hits.append(hit)
    return hits


def search_tuples(d: int, bound: int, workers: Optional[int] = None) -> SearchReport:
    """扫描所有互素的 m > e > 0, m <= bound"""
    if d < 1 or bound < 1:
        raise InvalidArgumentError(ErrorMessages.NON_POSITIVE.format((d, bound)))
    if d * bound * bound >= NumthConstants.FLOAT_EXACT_LIMIT:
        raise InvalidArgumentError(f"d * bound^2 超出向量化精确范围: d={d}, bound={bound}")

    workers = _workers(workers)
    ms = list(range(2, bound + 1))
    if workers <= 1 or len(ms) < SearchConstants.STRIPE_WIDTH:
        hits = _tuple_stripe(d, ms)
    else:
        stripes = [ms[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = [hit for part in pool.map(lambda s: _tuple_stripe(d, s), stripes) for hit in part]

    hits.sort(key=lambda t: (t.m, t.e))
    logger.info(LogMessages.SEARCH_DONE.format("search_tuples", d, bound, len(hits)))
    return SearchReport(kind="tuples", target=d, bound=bound, hits=hits)


def search_tuples_structured(d: int, root_bound: int) -> SearchReport:
    """
    结构化搜索，d 无平方因子。由 gcd(em, m^2-e^2) = 1，命中必有
    m = d_m v^2, e = d_e u^2，其中 d_m d_e 整除 d。枚举 u, v <= root_bound。
    """
    fact = factorize(d)
    if not fact.squarefree:
        raise InvalidArgumentError(ErrorMessages.NOT_SQUAREFREE.format(d))

    divisors = [1]
    for p in fact.primes:
        divisors += [x * p for x in divisors]

    seen = set()
    hits: List[ParamTuple] = []
    for big in divisors:
        for d_e in (x for x in divisors if big % x == 0):
            d_m = big // d_e
            for v in range(1, root_bound + 1):
                m = d_m * v * v
                for u in range(1, root_bound + 1):
                    e = d_e * u * u
                    if e >= m:
                        break
                    if (m, e) in seen or gcd(m, e) != 1:
                        continue
                    hit = tuple_from_pair(d, m, e)
                    if hit is not None:
                        seen.add((m, e))
                        hits.append(hit)

    hits.sort(key=lambda t: (t.m, t.e))
    logger.info(LogMessages.SEARCH_DONE.format("search_tuples_structured", d, root_bound, len(hits)))
    return SearchReport(kind="tuples_structured", target=d, bound=root_bound, hits=hits)


def search_tuples_adaptive(d: int, max_root: Optional[int] = None, start: int = 16) -> SearchReport:
    """根上界从 start 起逐次翻倍，直到找到命中或超过 max_root"""
    if max_root is None:
        from shared.config.config_manager import config_manager
        max_root = config_manager.get_search_config()["adaptive_max_root"]
    root = start
    report = SearchReport(kind="tuples_structured", target=d, bound=0)
    while root <= max_root:
        logger.debug(LogMessages.ADAPTIVE_STEP.format(d, root))
        report = search_tuples_structured(d, root)
        if report.hits:
            break
        root *= 2
    return report


# ==================== 三角形搜索 ====================

def search_triangles(d: int, bound: int) -> SearchReport:
    """
    枚举 m <= bound 的本原勾股数组 (A, B, C)，
    若 2d/(AB) 是有理数平方 λ^2，则 (λA, λB, λC) 的面积恰为 d。
    """
    if d < 1 or bound < 1:
        raise InvalidArgumentError(ErrorMessages.NON_POSITIVE.format((d, bound)))

    found = {}
    for m in range(2, bound + 1):
        for e in range(1, m):
            if gcd(m, e) != 1:
                continue
            h = 1 if (m % 2 and e % 2) else 2
            a, b, c = generate_triple(TripleParam(h, m, e))
            scale_sq = Fraction(2 * d, a * b)
            num = square_root_exact(scale_sq.numerator)
            den = square_root_exact(scale_sq.denominator)
            if num is None or den is None:
                continue
            scale = Fraction(num, den)
            tri = Triangle(scale * a, scale * b, scale * c, d).canonical()
            found.setdefault((tri.a, tri.b, tri.c), tri)

    hits = sorted(found.values(), key=lambda t: (t.c, t.a))
    logger.info(LogMessages.SEARCH_DONE.format("search_triangles", d, bound, len(hits)))
    return SearchReport(kind="triangles", target=d, bound=bound, hits=hits)


# ==================== 朴素计数 ====================

def count_form_naive(n: int, form: Union[str, TunnellForm]) -> int:
    """三重循环遍历整个盒子"""
    key = form.value if isinstance(form, TunnellForm) else str(form)
    if key not in TunnellConstants.FORM_COEFFICIENTS:
        raise InvalidArgumentError(ErrorMessages.UNKNOWN_FORM.format(form))
    cx, cy, cz = TunnellConstants.FORM_COEFFICIENTS[key]
    if n < 1:
        return 0
    bx, by, bz = isqrt(n // cx), isqrt(n // cy), isqrt(n // cz)
    total = 0
    for x in range(-bx, bx + 1):
        for y in range(-by, by + 1):
            for z in range(-bz, bz + 1):
                if cx * x * x + cy * y * y + cz * z * z == n:
                    total += 1
    return total
