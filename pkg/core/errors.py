"""
异常定义 - 工具箱所有失败情形的统一层次

调用方输入错误继承 ValueError，内部一致性失败继承 RuntimeError，
命令行据此映射退出码 64 / 70。
"""


class CongruentError(Exception):
    """工具箱异常基类"""


# ==================== 输入错误 ====================

class InvalidArgumentError(CongruentError, ValueError):
    """参数不合法"""


class DomainError(InvalidArgumentError):
    """输入不在运算的定义域内"""


class NotATripleError(DomainError):
    """a^2 + b^2 != c^2"""


class HalfIntegerError(DomainError):
    """h(m^2 - e^2) 为奇数"""


class InvalidTriangleError(DomainError):
    """三角形边长或面积不合法"""


class NotOnCurveError(DomainError):
    """点不满足 y^2 = x^3 - d^2 x"""


class OrientationError(InvalidArgumentError):
    """勾股数组在给定方向上无法参数化，调用方可交换两条直角边"""


class ExcludedSolutionError(InvalidArgumentError):
    """x = 0 或 y = 0 的平凡解"""


class NoDecompositionError(InvalidArgumentError):
    """p 无法写成 a^2 + 4b^2"""


class DegenerateTupleError(CongruentError, ZeroDivisionError):
    """e*m = 0 或直角边为 0"""


# ==================== 内部一致性 ====================

class InconsistencyError(CongruentError, RuntimeError):
    """后置校验失败，正常输入下不可达"""


class RecursionSafetyError(InconsistencyError):
    """Case 3 约化没有严格缩小"""


class EvidenceConflictError(InconsistencyError):
    """不同证据来源给出互相矛盾的结论"""
