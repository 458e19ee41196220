"""
椭圆曲线参数化 - 参数元组、曲线 y^2 = x^3 - d^2 x 上的有理点、面积为 d 的有理直角三角形
三者之间的双向转换。每个构造都做精确后置校验：不存在不在曲线上的 CurvePoint。
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Dict, Tuple

from core.arith.numth import square_root_exact
from core.arith.pythag import parametrize_triple
from core.engine.constants import ErrorMessages
from core.errors import (
    DegenerateTupleError,
    ExcludedSolutionError,
    InconsistencyError,
    InvalidArgumentError,
    InvalidTriangleError,
    NotOnCurveError,
)
from shared.types import Rational, rational_to_str


def d_from_tuple(k: int, j: int, m: int, e: int) -> Rational:
    """d = (k/(2j))^2 * (m^2 - e^2) / (e m)，精确有理数"""
    if e * m == 0:
        raise DegenerateTupleError(ErrorMessages.DEGENERATE_TUPLE)
    if not (m > e > 0 and j > 0 and k > 0):
        raise InvalidArgumentError(ErrorMessages.BAD_TUPLE.format((k, j, m, e)))
    return Fraction(k, 2 * j) ** 2 * Fraction(m * m - e * e, e * m)


@dataclass(frozen=True)
class ParamTuple:
    """参数元组 (k, j, m, e, d)，满足 d = (k/(2j))^2 (m^2-e^2)/(em)"""
    k: int
    j: int
    m: int
    e: int
    d: int

    def __post_init__(self):
        if (
            self.k <= 0 or self.j <= 0 or self.d <= 0
            or not self.m > self.e > 0
            or gcd(self.m, self.e) != 1
            or gcd(self.k, self.j) != 1
        ):
            raise InvalidArgumentError(ErrorMessages.BAD_TUPLE.format(self.as_tuple()))
        if d_from_tuple(self.k, self.j, self.m, self.e) != self.d:
            raise InvalidArgumentError(ErrorMessages.BAD_TUPLE.format(self.as_tuple()))

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return self.k, self.j, self.m, self.e

    def to_dict(self) -> Dict[str, str]:
        return {
            "k": str(self.k), "j": str(self.j),
            "m": str(self.m), "e": str(self.e), "d": str(self.d),
        }


@dataclass(frozen=True)
class CurvePoint:
    """曲线 y^2 = x^3 - d^2 x 上的有理点"""
    d: int
    x: Rational
    y: Rational

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.d <= 0 or self.y ** 2 != self.x ** 3 - self.d ** 2 * self.x:
            raise NotOnCurveError(ErrorMessages.NOT_ON_CURVE.format(self.d, self.x, self.y))

    def negate(self) -> "CurvePoint":
        return CurvePoint(self.d, self.x, -self.y)

    def to_dict(self) -> Dict[str, str]:
        return {"d": str(self.d), "x": rational_to_str(self.x), "y": rational_to_str(self.y)}


@dataclass(frozen=True)
class Triangle:
    """边长为正有理数、面积为整数 area 的直角三角形，c 为斜边"""
    a: Rational
    b: Rational
    c: Rational
    area: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if (
            min(self.a, self.b, self.c) <= 0
            or self.area <= 0
            or self.a ** 2 + self.b ** 2 != self.c ** 2
            or self.a * self.b / 2 != self.area
        ):
            raise InvalidTriangleError(
                ErrorMessages.INVALID_TRIANGLE.format(self.a, self.b, self.c, self.area)
            )

    def canonical(self) -> "Triangle":
        """直角边按 a <= b 排列"""
        if self.a <= self.b:
            return self
        return Triangle(self.b, self.a, self.c, self.area)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "a": rational_to_str(self.a),
            "b": rational_to_str(self.b),
            "c": rational_to_str(self.c),
            "area": str(self.area),
        }


PointPair = Tuple[CurvePoint, CurvePoint]


def points_from_tuple(t: ParamTuple) -> Tuple[PointPair, PointPair]:
    """
    x1 = d(m+e)/(m-e), y1 = ±(k/j) x1
    x2 = -d(m-e)/(m+e), y2 = ±(k/j) x2
    返回 ((x1, +y1), (x1, -y1)), ((x2, +y2), (x2, -y2))
    """
    slope = Fraction(t.k, t.j)
    x1 = Fraction(t.d * (t.m + t.e), t.m - t.e)
    x2 = Fraction(-t.d * (t.m - t.e), t.m + t.e)
    try:
        first = CurvePoint(t.d, x1, slope * x1)
        second = CurvePoint(t.d, x2, slope * x2)
    except NotOnCurveError as exc:
        raise InconsistencyError(
            ErrorMessages.CURVE_POSTCHECK.format(t.d, x1, slope * x1)
        ) from exc
    return (first, first.negate()), (second, second.negate())


def tuple_from_point(p: CurvePoint) -> ParamTuple:
    """
    由 beta = y/x = ±k/j 还原参数元组：
    k^2 = hem, 2dj^2 = h(m^2-e^2)/2，即对勾股数组 (k^2, 2dj^2, c) 做参数化。
    """
    if p.x == 0 or p.y == 0:
        raise ExcludedSolutionError(ErrorMessages.EXCLUDED_SOLUTION.format(p.x, p.y))

    beta = abs(p.y / p.x)
    k, j = beta.numerator, beta.denominator
    a_leg = k * k
    b_leg = 2 * p.d * j * j
    c = square_root_exact(a_leg * a_leg + b_leg * b_leg)
    if c is None:
        raise InconsistencyError(ErrorMessages.CURVE_POSTCHECK.format(p.d, p.x, p.y))

    param = parametrize_triple(a_leg, b_leg, c)
    try:
        result = ParamTuple(k, j, param.m, param.e, p.d)
    except InvalidArgumentError as exc:
        raise InconsistencyError(ErrorMessages.BAD_TUPLE.format((k, j, param.m, param.e))) from exc

    pairs = points_from_tuple(result)
    if p not in (pt for pair in pairs for pt in pair):
        raise InconsistencyError(ErrorMessages.CURVE_POSTCHECK.format(p.d, p.x, p.y))
    return result


def point_from_triangle(t: Triangle) -> CurvePoint:
    """x = d(a+c)/b, y = 2d^2(a+c)/b^2"""
    if t.b == 0:
        raise DegenerateTupleError(ErrorMessages.DEGENERATE_TRIANGLE)
    d = t.area
    x = d * (t.a + t.c) / t.b
    y = 2 * d * d * (t.a + t.c) / t.b ** 2
    try:
        return CurvePoint(d, x, y)
    except NotOnCurveError as exc:
        raise InconsistencyError(ErrorMessages.CURVE_POSTCHECK.format(d, x, y)) from exc


def triangle_from_point(p: CurvePoint) -> Triangle:
    """a = |x^2-d^2|/|y|, b = |2dx/y|, c = (x^2+d^2)/|y|"""
    if p.y == 0:
        raise ExcludedSolutionError(ErrorMessages.EXCLUDED_SOLUTION.format(p.x, p.y))
    d2 = p.d * p.d
    abs_y = abs(p.y)
    a = abs(p.x ** 2 - d2) / abs_y
    b = abs(2 * p.d * p.x / p.y)
    c = (p.x ** 2 + d2) / abs_y
    try:
        return Triangle(a, b, c, p.d)
    except InvalidTriangleError as exc:
        raise InconsistencyError(
            ErrorMessages.INVALID_TRIANGLE.format(a, b, c, p.d)
        ) from exc


def triangle_from_tuple(t: ParamTuple) -> Triangle:
    return triangle_from_point(points_from_tuple(t)[0][0])


# ==================== 平方缩放 ====================

def scale_triangle(t: Triangle, s: int) -> Triangle:
    """边长乘 s，面积变为 s^2 * area"""
    return Triangle(s * t.a, s * t.b, s * t.c, s * s * t.area)


def scale_point(p: CurvePoint, s: int) -> CurvePoint:
    """(d, x, y) -> (s^2 d, s^2 x, s^3 y)"""
    return CurvePoint(s * s * p.d, s * s * p.x, s ** 3 * p.y)
