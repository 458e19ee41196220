"""
勾股数组参数化 - a = hem, b = h(m^2-e^2)/2, c = h(m^2+e^2)/2
两个方向均为精确整数运算，不自动交换直角边
"""

from dataclasses import dataclass
from math import gcd
from typing import Tuple

from core.arith.numth import square_root_exact
from core.engine.constants import ErrorMessages
from core.errors import (
    HalfIntegerError,
    InconsistencyError,
    InvalidArgumentError,
    NotATripleError,
    OrientationError,
)


@dataclass(frozen=True)
class TripleParam:
    """勾股数组参数 (h, m, e)"""
    h: int
    m: int
    e: int

    def __post_init__(self):
        if self.h < 1 or self.e < 0 or self.m <= self.e or gcd(self.m, self.e) != 1:
            raise InvalidArgumentError(
                ErrorMessages.BAD_TRIPLE_PARAM.format(self.h, self.m, self.e)
            )

    def to_dict(self):
        return {"h": str(self.h), "m": str(self.m), "e": str(self.e)}


def generate_triple(param: TripleParam) -> Tuple[int, int, int]:
    """由 (h, m, e) 生成正的勾股数组 (a, b, c)"""
    h, m, e = param.h, param.m, param.e
    twice_b = h * (m * m - e * e)
    if twice_b % 2:
        raise HalfIntegerError(ErrorMessages.HALF_INTEGER.format(h, m, e))
    a = h * e * m
    b = twice_b // 2
    c = h * (m * m + e * e) // 2
    return a, b, c


def parametrize_triple(a: int, b: int, c: int) -> TripleParam:
    """
    反向参数化：h = gcd(c+b, c-b)，m^2 = (c+b)/h，e^2 = (c-b)/h。
    只尝试给定方向，(c±b)/h 不全是平方数时抛出 OrientationError。
    """
    if min(a, b, c) <= 0 or a * a + b * b != c * c:
        raise NotATripleError(ErrorMessages.NOT_A_TRIPLE.format(a, b, c))

    h = gcd(c + b, c - b)
    m = square_root_exact((c + b) // h)
    e = square_root_exact((c - b) // h)
    if m is None or e is None:
        raise OrientationError(ErrorMessages.ORIENTATION.format(a, b, c))

    param = TripleParam(h, m, e)
    if generate_triple(param) != (a, b, c):
        raise InconsistencyError(ErrorMessages.ORIENTATION.format(a, b, c))
    return param


def parametrize_either(a: int, b: int, c: int) -> Tuple[TripleParam, bool]:
    """先试给定方向，失败再交换 a、b；第二项表示是否交换过"""
    try:
        return parametrize_triple(a, b, c), False
    except OrientationError:
        return parametrize_triple(b, a, c), True
