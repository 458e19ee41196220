"""
无穷下降引擎单元测试
"""

import json
import os
import sys
import unittest
from math import isqrt

from sympy import primerange

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.arith.ecparam import ParamTuple
from core.engine.descent import (
    CaseWitnesses,
    case3_reduce,
    case_exclusion,
    classify_case,
    corollary1_check,
    descent_precheck,
    normalize_tuple,
    residue_check,
    run_descent,
    sweep,
    terminal_analysis,
    theorem1_applicable,
    verify_exclusion,
)
from core.engine.oracle import search_tuples
from core.errors import InconsistencyError, InvalidArgumentError
from shared.types import CaseLabel, DescentOutcome

CASE3_SEED = (1519, 492, 2401, 961)


class TestApplicability(unittest.TestCase):
    """测试定理适用性"""

    def test_applicable_primes(self):
        for d in (11, 19, 43, 59):
            report = theorem1_applicable(d)
            self.assertTrue(report.applicable, d)
            self.assertEqual((report.legendre_minus_one, report.legendre_two), (-1, -1))

    def test_not_applicable(self):
        report = theorem1_applicable(5)
        self.assertFalse(report.applicable)
        self.assertEqual((report.legendre_minus_one, report.legendre_two), (1, -1))
        self.assertFalse(theorem1_applicable(7).applicable)
        self.assertFalse(theorem1_applicable(3).applicable)
        self.assertFalse(theorem1_applicable(9).is_prime)

    def test_equivalent_to_3_mod_8(self):
        for d in primerange(5, 2000):
            self.assertEqual(theorem1_applicable(d).applicable, d % 8 == 3, d)


class TestNormalization(unittest.TestCase):
    """测试规范化与分类"""

    def test_d5_example(self):
        """(3,2,9,1) -> (5,4) -> Case1, (s,t,c1,c2) = (1,2,3,1)"""
        t = ParamTuple(3, 2, 9, 1, 5)
        self.assertIsNone(descent_precheck(t))
        self.assertEqual(normalize_tuple(t), (5, 4))
        result = classify_case(5, 5, 4)
        self.assertEqual(result.label, CaseLabel.CASE1)
        w = result.witnesses
        self.assertEqual((w.s, w.t, w.c1, w.c2), (1, 2, 3, 1))

    def test_d7_example(self):
        """(24,5,16,9) -> (25,7) -> Case4 且 t = 1"""
        t = ParamTuple(24, 5, 16, 9, 7)
        self.assertEqual(normalize_tuple(t), (25, 7))
        result = classify_case(7, 25, 7)
        self.assertEqual(result.label, CaseLabel.CASE4_T1)
        w = result.witnesses
        self.assertEqual((w.s, w.t, w.c1, w.c2), (5, 1, 4, 3))

    def test_precheck_failure(self):
        t = ParamTuple(20, 3, 5, 4, 5)
        self.assertIsNotNone(descent_precheck(t))
        with self.assertRaises(InvalidArgumentError):
            normalize_tuple(t)

    def test_no_case(self):
        with self.assertRaises(InconsistencyError):
            classify_case(5, 7, 3)


class TestResidues(unittest.TestCase):
    """测试剩余方程与排除"""

    def test_d5_case1_survives(self):
        w = classify_case(5, 5, 4).witnesses
        check = residue_check(5, CaseLabel.CASE1, w)
        self.assertEqual(check.candidate, 3)
        self.assertEqual(check.candidate_square, 4)
        self.assertIsNone(case_exclusion(5, CaseLabel.CASE1, w))

    def test_d7_case4_identity(self):
        """(h',e',m') = (4,1,2)，28 = 4·(3^2-2)，3^2 ≡ 2 (mod 7)"""
        w = classify_case(7, 25, 7).witnesses
        check = residue_check(7, CaseLabel.CASE4_T1, w)
        self.assertEqual(check.lemma, {"h'": "4", "e'": "1", "m'": "2"})
        self.assertTrue(check.identity_holds)
        self.assertIn("28", check.identity)
        self.assertEqual(check.sub_branch, "t_equals_1")
        self.assertEqual(check.candidate, 3)
        self.assertEqual(check.candidate_square, 2)
        self.assertIsNone(case_exclusion(7, CaseLabel.CASE4_T1, w))

    def test_case1_excluded_when_minus_one_nonresidue(self):
        """d = 19：X = 1·2^-1 = 10，X^2 ≡ 5，而 -1 ≡ 18"""
        w = CaseWitnesses(s=1, t=2, c1=3, c2=1, d_in_m=True, twice=False)
        reason = case_exclusion(19, CaseLabel.CASE1, w)
        self.assertIsNotNone(reason)
        self.assertEqual(reason.kind, "quadratic_nonresidue")
        self.assertEqual((reason.candidate, reason.candidate_square), (10, 5))
        self.assertEqual(reason.legendre, -1)
        self.assertTrue(verify_exclusion(reason))

    def test_case2_excluded(self):
        w = CaseWitnesses(s=1, t=2, c1=3, c2=1, d_in_m=True, twice=True)
        reason = case_exclusion(19, CaseLabel.CASE2, w)
        self.assertIsNotNone(reason)
        self.assertEqual(reason.candidate, 11)
        self.assertTrue(verify_exclusion(reason))

    def test_case3_never_excluded(self):
        w = CaseWitnesses(s=41, t=12, c1=49, c2=31, d_in_m=False, twice=False)
        self.assertIsNone(case_exclusion(5, CaseLabel.CASE3, w))


class TestCase3Reduction(unittest.TestCase):
    """测试 Case 3 约化"""

    def test_reduce_example(self):
        """(1681,720)：s=41, t=12, c1=49, c2=31 -> (20,3,5,4)"""
        t = ParamTuple(*CASE3_SEED, 5)
        self.assertEqual(normalize_tuple(t), (1681, 720))
        result = classify_case(5, 1681, 720)
        self.assertEqual(result.label, CaseLabel.CASE3)
        w = result.witnesses
        self.assertEqual((w.s, w.t, w.c1, w.c2), (41, 12, 49, 31))
        self.assertEqual(case3_reduce(5, 41, 12, 49, 31).as_tuple(), (20, 3, 5, 4))

    def test_run_descent_chain(self):
        trace = run_descent(5, seed=CASE3_SEED)
        self.assertEqual(len(trace.states), 2)
        self.assertEqual(trace.states[0].case.label, CaseLabel.CASE3)
        self.assertEqual(trace.states[0].reduction["next"], "(20,3,5,4)")
        self.assertIsNotNone(trace.states[1].precheck_failure)
        self.assertEqual(trace.outcome, DescentOutcome.WITNESS_FOUND)


class TestRunDescent(unittest.TestCase):
    """测试完整下降轨迹"""

    def test_d5(self):
        trace = run_descent(5, seed=(3, 2, 9, 1))
        self.assertEqual(trace.outcome, DescentOutcome.WITNESS_FOUND)
        state = trace.states[0]
        self.assertEqual(state.normalized, (5, 4))
        self.assertEqual(state.case.label, CaseLabel.CASE1)
        self.assertIsNone(state.exclusion)
        self.assertEqual(state.solution, 3)
        self.assertEqual(trace.witness.area, 5)

    def test_d7(self):
        trace = run_descent(7, seed=ParamTuple(24, 5, 16, 9, 7))
        self.assertEqual(trace.outcome, DescentOutcome.WITNESS_FOUND)
        state = trace.states[0]
        self.assertEqual(state.normalized, (25, 7))
        self.assertEqual(state.case.label, CaseLabel.CASE4_T1)
        self.assertEqual(state.solution, 3)

    def test_bound_mode_picks_precheck_seed(self):
        """m 最小的 (20,3,5,4) 不满足前置条件，选用 (3,2,9,1)"""
        trace = run_descent(5, bound=100)
        self.assertEqual(trace.seed.as_tuple(), (3, 2, 9, 1))
        self.assertGreaterEqual(trace.seeds_found, 2)

    def test_no_seed_for_19(self):
        trace = run_descent(19, bound=2000)
        self.assertEqual(trace.outcome, DescentOutcome.NO_SEED)
        self.assertTrue(trace.applicability.applicable)
        self.assertIn("一致", trace.note)

    def test_theorem_sweep(self):
        """所有素数 d < 500, d ≡ 3 (mod 8)：上界 1500 内无解"""
        ds = [d for d in primerange(3, 500) if d % 8 == 3]
        traces = sweep(ds, bound=1500, workers=4)
        self.assertEqual([t.d for t in traces], ds)
        for trace in traces:
            self.assertEqual(trace.outcome, DescentOutcome.NO_SEED, trace.d)

    def test_sweep_keeps_order(self):
        traces = sweep([11, 5, 19], bound=200, workers=3)
        self.assertEqual([t.d for t in traces], [11, 5, 19])
        self.assertEqual(traces[1].outcome, DescentOutcome.WITNESS_FOUND)

    def test_invalid(self):
        with self.assertRaises(InvalidArgumentError):
            run_descent(9, bound=10)
        with self.assertRaises(InvalidArgumentError):
            run_descent(7, seed=ParamTuple(3, 2, 9, 1, 5))
        with self.assertRaises(InvalidArgumentError):
            run_descent(5, seed=(3, 2, 9, 2))

    def test_trace_exports(self):
        trace = run_descent(7, seed=(24, 5, 16, 9))
        data = json.loads(trace.to_json())
        self.assertEqual(data["outcome"], "witness_found")
        self.assertEqual(data["states"][0]["case"]["label"], "Case4_t1")
        dot = trace.to_dot()
        self.assertTrue(dot.startswith("digraph descent_7"))
        self.assertIn("dashed", dot)
        self.assertIn("witness_found", dot)


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _oracle_seeds(limit: int = 114, bound: int = 300):
    """素数 5 <= d < limit 在上界内搜到的全部第 0 层元组"""
    return [t for d in primerange(5, limit) for t in search_tuples(d, bound, workers=1).hits]


class TestOracleSeeds(unittest.TestCase):
    """用穷举搜索得到的每个真实元组驱动下降"""

    @classmethod
    def setUpClass(cls):
        cls.seeds = _oracle_seeds()

    def test_seeds_exist(self):
        self.assertGreater(len(self.seeds), 0)
        self.assertFalse(any(t.d % 8 == 3 for t in self.seeds))

    def test_exactly_one_case(self):
        """规范化后的 (m, e) 恰好满足四种情形之一"""
        for t in self.seeds:
            if descent_precheck(t) is not None:
                continue
            m, e = normalize_tuple(t)
            d = t.d
            d_in_m = m % d == 0 and _is_square(m // d) and _is_square(e)
            d_in_e = e % d == 0 and _is_square(m) and _is_square(e // d)
            squares = _is_square(m + e) and _is_square(m - e)
            twice = (m + e) % 2 == 0 and _is_square((m + e) // 2) and _is_square((m - e) // 2)
            matches = {
                CaseLabel.CASE1: d_in_m and squares,
                CaseLabel.CASE2: d_in_m and twice,
                CaseLabel.CASE3: d_in_e and squares,
                CaseLabel.CASE4: d_in_e and twice,
            }
            self.assertEqual(sum(matches.values()), 1, (d, m, e))
            label = classify_case(d, m, e).label
            if label == CaseLabel.CASE4_T1:
                label = CaseLabel.CASE4
            self.assertTrue(matches[label], (d, m, e, label))

    def test_descent_on_every_seed(self):
        """真实元组不会被判为矛盾，每个存活分支的解都满足剩余方程"""
        for t in self.seeds:
            trace = run_descent(t.d, seed=t)
            self.assertEqual(trace.outcome, DescentOutcome.WITNESS_FOUND, t.as_tuple())
            self.assertEqual(trace.witness.area, t.d)
            for state in trace.states:
                if state.precheck_failure is None:
                    self.assertIsNotNone(state.normalized)
                self.assertIsNone(state.exclusion)
                if state.solution is not None:
                    self.assertEqual((state.solution ** 2 - state.residue.residue) % t.d, 0)


class TestTerminalAnalysis(unittest.TestCase):
    """测试 j = 1 的终止分析"""

    def test_both_branches_impossible(self):
        for d in (7, 11, 19):
            report = terminal_analysis(d, 1, d, 1)
            self.assertTrue(report.contradiction)
            self.assertFalse(any(b["possible"] for b in report.branches))
            self.assertEqual(report.branches[0]["m2_minus_e2"], str(d * d - 1))

    def test_pair_outside_both_branches(self):
        """d = e·m 之外的 (m, e) 也判为矛盾，记录的是传入的规范化 (m, e)"""
        report = terminal_analysis(7, 24, 25, 7)
        self.assertTrue(report.contradiction)
        data = report.to_dict()
        self.assertEqual((data["m"], data["e"]), ("25", "7"))


class TestCorollary(unittest.TestCase):
    """测试 Gauss 引理推论"""

    def test_primes_7_mod_8(self):
        for p in primerange(3, 1000):
            report = corollary1_check(p)
            self.assertEqual(report.gauss_count, report.closed_form)
            if p % 8 == 7:
                self.assertTrue(report.asserted)
                self.assertEqual(report.legendre_two, 1)
                self.assertEqual(report.gauss_count, 2 * ((p - 7) // 8) + 2)
            else:
                self.assertFalse(report.asserted)
                self.assertIsNone(report.predicted)

    def test_invalid(self):
        for bad in (2, 9, 1):
            with self.assertRaises(InvalidArgumentError):
                corollary1_check(bad)

    def test_two_rejected_as_even_prime(self):
        """2 是素数，报错应指出需要奇素数"""
        with self.assertRaises(InvalidArgumentError) as ctx:
            corollary1_check(2)
        self.assertIn("奇素数", str(ctx.exception))


if __name__ == '__main__':
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    test_classes = [
        TestApplicability,
        TestNormalization,
        TestResidues,
        TestCase3Reduction,
        TestRunDescent,
        TestOracleSeeds,
        TestTerminalAnalysis,
        TestCorollary,
    ]
    for test_class in test_classes:
        suite.addTests(loader.loadTestsFromTestCase(test_class))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    print(f"\n{'='*60}")
    print(f"测试完成: {result.testsRun} 个测试")
    print(f"失败: {len(result.failures)}")
    print(f"错误: {len(result.errors)}")
    print(f"{'='*60}")

    exit(0 if result.wasSuccessful() else 1)
