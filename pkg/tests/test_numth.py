"""
数论基础单元测试
"""

import os
import sys
import unittest
from math import isqrt

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint, isprime, legendre_symbol, primerange

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.arith.numth import (
    exact_isqrt_array,
    factorize,
    gauss_lemma_count,
    is_prime,
    is_squarefree,
    legendre,
    legendre_euler,
    legendre_reciprocity,
    sqrt_mod,
    square_root_exact,
    squarefree_decomposition,
)
from core.engine.constants import NumthConstants
from core.errors import InvalidArgumentError

ODD_PRIMES = list(primerange(3, 10 ** 4))


class TestPrimality(unittest.TestCase):
    """测试素性检验"""

    def test_small_range_matches_sympy(self):
        """1..10000 与 sympy 一致"""
        for n in range(-5, 10 ** 4):
            self.assertEqual(is_prime(n), isprime(n), n)

    def test_large_values(self):
        """大素数与强伪素数"""
        self.assertTrue(is_prime(2 ** 61 - 1))
        self.assertTrue(is_prime(1000000007))
        self.assertFalse(is_prime(3215031751))  # 2,3,5,7 的强伪素数
        self.assertFalse(is_prime(1000003 * 1000033))

    def test_out_of_deterministic_range(self):
        """超出确定性范围时报错而不是猜测"""
        n = NumthConstants.MILLER_RABIN_LIMIT + 1
        while any(n % p == 0 for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)):
            n += 1
        with self.assertRaises(InvalidArgumentError):
            is_prime(n)


class TestLegendre(unittest.TestCase):
    """测试 Legendre 符号"""

    def test_three_way_agreement(self):
        """Euler = 互反律 = Gauss 引理奇偶性，p < 10^4"""
        for p in ODD_PRIMES:
            for a in (-1, 2, 3, 5, 7, p - 2):
                if a % p == 0:
                    continue
                euler = legendre_euler(a, p)
                self.assertEqual(euler, legendre_reciprocity(a, p), (a, p))
                self.assertEqual((-1) ** gauss_lemma_count(a, p), euler, (a, p))

    @given(st.integers(min_value=-10 ** 6, max_value=10 ** 6), st.sampled_from(ODD_PRIMES))
    @settings(max_examples=300, deadline=None)
    def test_matches_sympy(self, a, p):
        """与 sympy 独立实现一致"""
        expected = 0 if a % p == 0 else legendre_symbol(a % p, p)
        self.assertEqual(legendre(a, p), expected)

    def test_supplementary_laws(self):
        """(-1/p) 由 p mod 4 决定，(2/p) 由 p mod 8 决定"""
        for p in ODD_PRIMES[:300]:
            self.assertEqual(legendre(-1, p), 1 if p % 4 == 1 else -1)
            self.assertEqual(legendre(2, p), 1 if p % 8 in (1, 7) else -1)

    def test_zero_and_errors(self):
        """p | a 时为 0；非奇素数模数报错"""
        self.assertEqual(legendre(0, 7), 0)
        self.assertEqual(legendre(14, 7), 0)
        for bad in (1, 2, 9, 15, -7):
            with self.assertRaises(InvalidArgumentError):
                legendre(3, bad)
        with self.assertRaises(InvalidArgumentError):
            gauss_lemma_count(7, 7)

    def test_gauss_count_examples(self):
        """p = 7: 2,4,6 中大于 3.5 的有 4,6"""
        self.assertEqual(gauss_lemma_count(2, 7), 2)
        self.assertEqual(gauss_lemma_count(2, 5), 1)


class TestSqrtMod(unittest.TestCase):
    """测试模平方根"""

    def test_all_residues_small_primes(self):
        for p in primerange(3, 300):
            squares = {x * x % p for x in range(p)}
            for a in range(p):
                root = sqrt_mod(a, p)
                if a in squares:
                    self.assertIsNotNone(root, (a, p))
                    self.assertEqual(root * root % p, a)
                    if a:
                        self.assertLessEqual(root, p - root)
                else:
                    self.assertIsNone(root, (a, p))

    def test_tonelli_branch(self):
        """p ≡ 1 (mod 8) 走完整 Tonelli-Shanks 分支"""
        p = 1000000009
        for a in (2, 3, 5, 10, 12345):
            root = sqrt_mod(a, p)
            if legendre(a, p) == 1:
                self.assertEqual(root * root % p, a % p)
            else:
                self.assertIsNone(root)


class TestSquares(unittest.TestCase):
    """测试完全平方判定"""

    def test_square_root_exact(self):
        self.assertEqual(square_root_exact(0), 0)
        self.assertEqual(square_root_exact(144), 12)
        self.assertIsNone(square_root_exact(145))
        self.assertIsNone(square_root_exact(-4))

    def test_isqrt_array_near_squares(self):
        """浮点开方修正后与 math.isqrt 完全一致"""
        r = 2 ** 26 - 1
        values = [0, 1, 2, 3, 4, 15, 16, 17, r * r - 1, r * r, r * r + 1, 2 ** 52 - 1]
        for root in (10 ** 6, 3 * 10 ** 7, 6 * 10 ** 7):
            values += [root * root - 1, root * root, root * root + 1]
        got = exact_isqrt_array(np.array(values, dtype=np.int64))
        self.assertEqual([int(x) for x in got], [isqrt(v) for v in values])


class TestFactorize(unittest.TestCase):
    """测试因子分解"""

    def test_matches_sympy(self):
        for n in range(1, 3000):
            fact = factorize(n)
            self.assertEqual(dict(fact.factors), factorint(n), n)
            self.assertEqual(fact.recompose(), n)

    def test_pollard_path(self):
        """试除上界以外的因子由 Pollard-Brent 拆分"""
        for n in (1000003 * 1000033, 104729 ** 2 * 7, 2 ** 5 * 999983 * 1000003):
            fact = factorize(n)
            self.assertEqual(dict(fact.factors), factorint(n))
        fact = factorize(1000003 * 1000033, trial_bound=10)
        self.assertEqual(fact.primes, [1000003, 1000033])

    @given(st.integers(min_value=1, max_value=10 ** 12))
    @settings(max_examples=100, deadline=None)
    def test_roundtrip(self, n):
        fact = factorize(n)
        self.assertEqual(fact.recompose(), n)
        self.assertTrue(all(is_prime(p) for p in fact.primes))

    def test_residues_and_flags(self):
        fact = factorize(2 * 3 * 5 * 7)
        self.assertTrue(fact.squarefree)
        self.assertTrue(fact.has_two)
        self.assertEqual(fact.odd_primes, [3, 5, 7])
        self.assertEqual(dict(fact.residues_mod8), {2: 2, 3: 3, 5: 5, 7: 7})
        self.assertEqual(factorize(1).factors, ())

    def test_invalid(self):
        for bad in (0, -3):
            with self.assertRaises(InvalidArgumentError):
                factorize(bad)

    def test_squarefree_decomposition(self):
        """n = s^2 q"""
        self.assertEqual(squarefree_decomposition(20), (5, 2))
        self.assertEqual(squarefree_decomposition(72), (2, 6))
        self.assertEqual(squarefree_decomposition(1), (1, 1))
        self.assertEqual(squarefree_decomposition(30), (30, 1))
        self.assertTrue(is_squarefree(30))
        self.assertFalse(is_squarefree(12))


if __name__ == '__main__':
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    test_classes = [
        TestPrimality,
        TestLegendre,
        TestSqrtMod,
        TestSquares,
        TestFactorize,
    ]

    for test_class in test_classes:
        suite.addTests(loader.loadTestsFromTestCase(test_class))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    print(f"\n{'='*60}")
    print(f"测试完成: {result.testsRun} 个测试")
    print(f"成功: {result.testsRun - len(result.failures) - len(result.errors)}")
    print(f"失败: {len(result.failures)}")
    print(f"错误: {len(result.errors)}")
    print(f"{'='*60}")

    exit(0 if result.wasSuccessful() else 1)
