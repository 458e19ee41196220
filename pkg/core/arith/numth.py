"""
数论基础 - 整数与模运算
负责素性检验、因子分解、完全平方判定、Legendre 符号与 Gauss 引理计数。
所有函数都是输入的纯函数，可被多个线程同时调用。
"""

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import count
from math import gcd, isqrt
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.engine.constants import ErrorMessages, LogMessages, NumthConstants
from core.errors import InconsistencyError, InvalidArgumentError

logger = logging.getLogger(__name__)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Factorization:
    """n 的完整素因子分解，附带各素数的模 8 剩余类"""
    n: int
    factors: Tuple[Tuple[int, int], ...]
    squarefree: bool
    residues_mod8: Tuple[Tuple[int, int], ...]

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    @property
    def odd_primes(self) -> List[int]:
        return [p for p, _ in self.factors if p != 2]

    @property
    def has_two(self) -> bool:
        return any(p == 2 for p, _ in self.factors)

    def recompose(self) -> int:
        result = 1
        for p, k in self.factors:
            result *= p ** k
        return result

    def describe(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{k}" if k > 1 else str(p) for p, k in self.factors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": str(self.n),
            "factors": [[str(p), k] for p, k in self.factors],
            "squarefree": self.squarefree,
            "residues_mod8": [[str(p), r] for p, r in self.residues_mod8],
        }


# ==================== 素性检验 ====================

def is_prime(n: int) -> bool:
    """确定性 Miller-Rabin，见证集 2..37"""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n >= NumthConstants.MILLER_RABIN_LIMIT:
        raise InvalidArgumentError(
            ErrorMessages.PRIMALITY_OUT_OF_RANGE.format(NumthConstants.MILLER_RABIN_LIMIT, n)
        )

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    for a in NumthConstants.MILLER_RABIN_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_odd_prime(p: int):
    if not isinstance(p, int) or p < 3 or not is_prime(p):
        raise InvalidArgumentError(ErrorMessages.NOT_ODD_PRIME.format(p))


# ==================== Legendre 符号 ====================

def legendre_euler(a: int, p: int) -> int:
    """Euler 判别法: a^((p-1)/2) mod p"""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def legendre_reciprocity(a: int, p: int) -> int:
    """基于二次互反律与第二补充律的迭代算法"""
    a %= p
    n = p
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre 符号 (a/p)，两种算法必须一致"""
    _require_odd_prime(p)
    euler = legendre_euler(a, p)
    recip = legendre_reciprocity(a, p)
    if euler != recip:
        raise InconsistencyError(ErrorMessages.LEGENDRE_DISAGREE.format(a, p, euler, recip))
    return euler


def gauss_lemma_count(a: int, p: int) -> int:
    """
    统计 i*a mod p (i = 1..(p-1)/2) 中大于 p/2 的个数。
    按 Gauss 引理，(-1)^n 必须等于 (a/p)。
    """
    _require_odd_prime(p)
    if gcd(a, p) != 1:
        raise InvalidArgumentError(ErrorMessages.NOT_COPRIME.format(a, p))

    half = (p - 1) // 2
    residue = a % p
    if p < 2 ** 31:
        i = np.arange(1, half + 1, dtype=np.int64)
        n = int(np.count_nonzero(2 * ((i * residue) % p) > p))
    else:
        n = sum(1 for i in range(1, half + 1) if 2 * (i * residue % p) > p)

    symbol = legendre(a, p)
    if (-1) ** n != symbol:
        raise InconsistencyError(ErrorMessages.GAUSS_DISAGREE.format(a, p, n, symbol))
    return n


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """Tonelli-Shanks：返回 x^2 ≡ a (mod p) 的较小根，无解返回 None"""
    _require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
        return min(x, p - x)

    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1

    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


# ==================== 完全平方 ====================

def square_root_exact(n: int) -> Optional[int]:
    """n 为完全平方时返回其平方根，否则返回 None"""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def exact_isqrt_array(values: np.ndarray) -> np.ndarray:
    """
    int64 数组的逐元素整数平方根，要求 0 <= v < 2^52。
    浮点开方后做 ±1 修正，结果与 math.isqrt 一致。
    """
    values = np.asarray(values, dtype=np.int64)
    roots = np.floor(np.sqrt(values.astype(np.float64))).astype(np.int64)
    roots -= (roots * roots > values).astype(np.int64)
    roots += ((roots + 1) * (roots + 1) <= values).astype(np.int64)
    return roots


# ==================== 因子分解 ====================

def _pollard_brent(n: int) -> int:
    """返回 n 的一个非平凡因子，n 为奇合数。c 依次取 1, 2, ... 以保证确定性"""
    root = square_root_exact(n)
    if root is not None:
        return root

    batch = NumthConstants.POLLARD_BATCH
    for c in count(1):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += batch
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise AssertionError("unreachable")


def _split(n: int, counter: Counter):
    if n == 1:
        return
    if is_prime(n):
        counter[n] += 1
        return
    f = _pollard_brent(n)
    _split(f, counter)
    _split(n // f, counter)


def factorize(n: int, trial_bound: Optional[int] = None) -> Factorization:
    """试除到可配置上界，其余部分用确定性 Pollard-Brent 拆分"""
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(ErrorMessages.NON_POSITIVE.format(n))
    if trial_bound is None:
        from shared.config.config_manager import config_manager
        trial_bound = config_manager.get_trial_division_bound()

    counter: Counter = Counter()
    rest = n
    while rest % 2 == 0:
        counter[2] += 1
        rest //= 2
    d = 3
    while d <= trial_bound and d * d <= rest:
        while rest % d == 0:
            counter[d] += 1
            rest //= d
        d += 2
    if rest > 1:
        if d * d > rest:
            counter[rest] += 1
        else:
            _split(rest, counter)

    factors = tuple(sorted(counter.items()))
    result = Factorization(
        n=n,
        factors=factors,
        squarefree=all(k == 1 for _, k in factors),
        residues_mod8=tuple((p, p % 8) for p, _ in factors),
    )
    logger.debug(LogMessages.FACTORIZED.format(n, result.describe()))
    return result


def squarefree_decomposition(n: int) -> Tuple[int, int]:
    """n = s^2 * q，q 无平方因子，返回 (q, s)"""
    q, s = 1, 1
    for p, k in factorize(n).factors:
        s *= p ** (k // 2)
        if k % 2:
            q *= p
    return q, s


def is_squarefree(n: int) -> bool:
    return factorize(n).squarefree
