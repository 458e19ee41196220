"""
常量定义 - 统一管理同余数工具箱中的魔法数字和字符串
"""

# ============================================
# 数论基础相关常量
# ============================================

class NumthConstants:
    """数论基础常量"""

    # 确定性 Miller-Rabin 见证集（对 n < 3.3e24 全部正确）
    MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    MILLER_RABIN_LIMIT = 3317044064679887385961981

    # Pollard-Brent 每批乘积的步数
    POLLARD_BATCH = 128

    # float64 可精确表示的整数上界，用于向量化开方
    FLOAT_EXACT_LIMIT = 2 ** 52


# ============================================
# Tunnell 计数相关常量
# ============================================

class TunnellConstants:
    """Tunnell 三元二次型系数 (cx, cy, cz): n = cx*x^2 + cy*y^2 + cz*z^2"""

    FORM_COEFFICIENTS = {
        "A": (2, 1, 32),
        "B": (2, 1, 8),
        "C": (8, 2, 64),
        "D": (8, 2, 16),
    }

    # 奇数 n 比较 (A, B)，偶数 n 比较 (C, D)
    ODD_PAIR = ("A", "B")
    EVEN_PAIR = ("C", "D")

    DEFAULT_WORKERS = 4
    DEFAULT_MAX_N = 10 ** 7


# ============================================
# 搜索相关常量
# ============================================

class SearchConstants:
    """穷举搜索常量"""

    DEFAULT_TUPLE_BOUND = 1500
    DEFAULT_TRIANGLE_BOUND = 200
    DEFAULT_STRUCTURED_ROOT_BOUND = 256
    DEFAULT_ADAPTIVE_MAX_ROOT = 4096
    DEFAULT_REPORT_TRIANGLE_BOUND = 60

    # 每个工作线程分到的 m 条带宽度
    STRIPE_WIDTH = 64


# ============================================
# 下降法相关常量
# ============================================

class DescentConstants:
    """无穷下降引擎常量"""

    DEFAULT_BOUND = 1500

    # 递归层数硬上限（严格递减保证终止，此处只防御坏输入）
    MAX_LEVELS = 64

    # 平方剩余残差：Case1/Case2 检查 -1，Case4 检查 2
    RESIDUE_MINUS_ONE = -1
    RESIDUE_TWO = 2


# ============================================
# 命令行退出码
# ============================================

class ExitCodes:
    """退出码"""

    DECISIVE = 0
    UNKNOWN = 2
    USAGE = 64
    INCONSISTENCY = 70


# ============================================
# 错误消息常量
# ============================================

class ErrorMessages:
    """错误消息常量"""

    # 数论
    NOT_ODD_PRIME = "p 必须是奇素数: {}"
    NOT_PRIME = "输入必须是素数: {}"
    NOT_COPRIME = "a 与 p 必须互素: a={}, p={}"
    NON_POSITIVE = "输入必须是正整数: {}"
    NEGATIVE = "输入不能为负数: {}"
    PRIMALITY_OUT_OF_RANGE = "确定性素性检验仅支持 n < {}: {}"
    LEGENDRE_DISAGREE = "Euler 判别法与二次互反律结果不一致: ({}/{}) euler={} reciprocity={}"
    GAUSS_DISAGREE = "Gauss 引理计数与 Legendre 符号不一致: ({}/{}) n={} legendre={}"
    NOT_SQUAREFREE = "n 必须无平方因子: {}"

    # 勾股数
    NOT_A_TRIPLE = "不是勾股数组: ({}, {}, {})"
    HALF_INTEGER = "h(m^2-e^2) 为奇数，b 不是整数: h={}, m={}, e={}"
    ORIENTATION = "(c+b)/h 与 (c-b)/h 在此方向上不全是平方数: ({}, {}, {})"
    BAD_TRIPLE_PARAM = "参数不满足 m>e>=0 且 gcd(m,e)=1: h={}, m={}, e={}"

    # 椭圆曲线参数化
    BAD_TUPLE = "参数元组不合法: {}"
    DEGENERATE_TUPLE = "e*m = 0，对应被排除的 y=0 情形"
    NOT_ON_CURVE = "点不在曲线 y^2 = x^3 - {}^2 x 上: ({}, {})"
    EXCLUDED_SOLUTION = "x 或 y 为 0 的平凡解被排除: ({}, {})"
    INVALID_TRIANGLE = "三角形不合法: ({}, {}, {}), 面积 {}"
    DEGENERATE_TRIANGLE = "直角边 b 为 0"
    CURVE_POSTCHECK = "曲线成员后置校验失败: d={}, ({}, {})"

    # Tunnell
    UNKNOWN_FORM = "未知的二次型标签: {}"
    TUNNELL_TOO_LARGE = "n 超出桌面规模上限 {}: {}"

    # 判别表
    NO_DECOMPOSITION = "p 不满足 p≡1 (mod 4)，无法写成 a^2+4b^2: {}"
    RULE_RECHECK_FAILED = "规则 {} 复核失败: n={}"

    # 下降法
    NORMALIZE_PARITY = "k 为奇数但 m1+e1 为奇数: k={}, m1={}, e1={}"
    NORMALIZE_GCD = "规范化后 gcd(m,e) != 1: ({}, {})"
    NORMALIZE_EQUATION = "规范化结果不满足 j^2(m+e)(m-e)d = k^2 me"
    NO_CASE = "(m, e) 不匹配任何情形: d={}, m={}, e={}"
    REDUCE_MISMATCH = "Case3 约化后的元组给出 d={}，期望 {}"
    NOT_SHRINKING = "Case3 约化未严格递减: {} -> {}"
    TOO_MANY_LEVELS = "下降层数超过上限 {}"
    COROLLARY_FAILED = "推论校验失败: p={}, n={}, 期望 {}"
    EXCLUSION_UNSOUND = "排除理由的剩余方程实际可解: {}"

    # 报告
    EVIDENCE_CONFLICT = "证据来源互相矛盾: n={}, {}"
    BAD_RANGE = "范围格式应为 a..b: {}"
    BAD_TUPLE_ARG = "元组格式应为 k,j,m,e: {}"


# ============================================
# 日志消息常量
# ============================================

class LogMessages:
    """日志消息常量"""

    # 规则加载
    RULES_LOADED = "[OK] 成功加载 {} 条判别规则"
    RULES_LOAD_FAILED = "[WARN] 规则加载失败，使用内置规则: {}"
    RULE_CONFLICTS = "[Criteria] 规则表中检测到 {} 处冲突"

    # 数论
    FACTORIZED = "[Numth] {} = {}"
    FACTOR_CACHE_HIT = "[Cache] 命中分解缓存: {}"

    # 判别表
    RULE_FIRED = "[Criteria] n={} 触发规则 {} ({}), 分解={}, 符号={}"
    RULE_SHADOWED = "[Criteria] n={} 规则 {} 同样匹配但被优先级遮蔽"
    BASTIEN_ALTERNATE = "[Criteria] p={} 规范 ((a+2b)/p)={}，备选 ((-a+2b)/p)={}"

    # Tunnell
    TUNNELL_COUNTS = "[Tunnell] n={} A={} B={} C={} D={} -> {}"

    # 搜索
    SEARCH_DONE = "[Oracle] {} d={} bound={} 命中 {} 个"
    ADAPTIVE_STEP = "[Oracle] 自适应搜索 d={} 根上界 {}"

    # 下降法
    DESCENT_LEVEL = "[Descent] d={} 第 {} 层: {}"
    DESCENT_DONE = "[Descent] d={} 结果 {}"

    # 报告
    REPORT_STAGE = "[Report] n={} 阶段 {} 用时 {}us"
    REPORT_VERDICT = "[Report] n={} 结论 {}"
