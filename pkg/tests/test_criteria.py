"""
判别表单元测试
"""

import os
import sys
import unittest

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.arith.numth import is_squarefree
from core.engine.criteria import CriteriaTable, a_4b_decomposition, classify_by_tables, criteria_table
from core.engine.rule_conflict import ConflictType, RuleConflictDetector
from core.engine.tunnell import tunnell_identity
from core.errors import InvalidArgumentError, NoDecompositionError
from shared.types import CriterionOutcome


class TestDecomposition(unittest.TestCase):
    """测试 p = a^2 + 4b^2"""

    def test_examples(self):
        self.assertEqual(a_4b_decomposition(5), (1, 1))
        self.assertEqual(a_4b_decomposition(13), (3, 1))
        self.assertEqual(a_4b_decomposition(17), (1, 2))
        self.assertEqual(a_4b_decomposition(41), (5, 2))

    def test_all_primes_1_mod_4(self):
        for p in range(5, 5000, 4):
            if all(p % q for q in range(2, int(p ** 0.5) + 1)):
                a, b = a_4b_decomposition(p)
                self.assertEqual(a * a + 4 * b * b, p)
                self.assertEqual(a % 2, 1)

    def test_errors(self):
        with self.assertRaises(NoDecompositionError):
            a_4b_decomposition(7)
        with self.assertRaises(InvalidArgumentError):
            a_4b_decomposition(21)


class TestClassification(unittest.TestCase):
    """测试规则触发"""

    def test_iskra(self):
        verdict = classify_by_tables(3)
        self.assertEqual(verdict.verdict, CriterionOutcome.NON_CONGRUENT)
        self.assertEqual(verdict.rule_id, "Iskra-1")
        self.assertIn("Iskra-2", verdict.shadowed)
        self.assertEqual(classify_by_tables(10).rule_id, "Iskra-1")

    def test_iskra_tournament(self):
        """3·11：(11/3) = -1，排序 [11, 3]；Iskra-1 的 p_3q_3 先触发"""
        verdict = classify_by_tables(33)
        self.assertEqual(verdict.rule_id, "Iskra-1")
        self.assertIn("Iskra-2", verdict.shadowed)

    def test_monsky(self):
        for n, rule in ((5, "Monsky-1"), (7, "Monsky-1"), (14, "Monsky-1"),
                        (6, "Monsky-2"), (15, "Monsky-3"), (21, "Monsky-3")):
            verdict = classify_by_tables(n)
            self.assertEqual(verdict.verdict, CriterionOutcome.CONGRUENT, n)
            self.assertEqual(verdict.rule_id, rule, n)
        self.assertIn("Gross", classify_by_tables(5).shadowed)

    def test_bastien(self):
        """17 = 1 + 4·4，((1+4)/17) = -1"""
        verdict = classify_by_tables(17)
        self.assertEqual(verdict.rule_id, "Bastien-2")
        self.assertEqual(verdict.details["a"], "1")
        self.assertEqual(verdict.details["b"], "2")
        self.assertEqual([(e.a, e.p, e.value) for e in verdict.evaluations], [(5, 17, -1)])
        for p in (73, 89, 97, 193):
            self.assertEqual(classify_by_tables(p).rule_id, "Bastien-2", p)
        for p in (41, 113, 137):
            self.assertEqual(classify_by_tables(p).verdict, CriterionOutcome.NO_RULE, p)

    def test_lagrange_shadows_monsky5(self):
        """51 = 17·3，(17/3) = -1：Lagrange-1 胜出，Monsky-5 记为冲突"""
        verdict = classify_by_tables(51)
        self.assertEqual(verdict.rule_id, "Lagrange-1")
        self.assertEqual(verdict.verdict, CriterionOutcome.NON_CONGRUENT)
        self.assertIn("Monsky-5", verdict.conflicts)

    def test_no_rule(self):
        for n in (1, 2):
            self.assertEqual(classify_by_tables(n).verdict, CriterionOutcome.NO_RULE)

    def test_invalid(self):
        for bad in (0, -5, 12, 20):
            with self.assertRaises(InvalidArgumentError):
                classify_by_tables(bad)

    def test_agrees_with_tunnell(self):
        """n <= 200：判别表结论从不与 Tunnell 恒等式矛盾"""
        fired = 0
        for n in range(1, 201):
            if not is_squarefree(n):
                continue
            verdict = classify_by_tables(n)
            if verdict.verdict == CriterionOutcome.NO_RULE:
                continue
            fired += 1
            self.assertEqual(verdict.verdict, tunnell_identity(n).criterion, n)
        self.assertGreater(fired, 40)

    def test_fallback_rules(self):
        """规则文件缺失时使用内置规则"""
        table = CriteriaTable(rules_path="/nonexistent/criteria_rules.json")
        self.assertEqual(len(table.rules), 3)
        self.assertEqual(table.classify(5).rule_id, "Monsky-1")
        self.assertEqual(table.classify(17).verdict, CriterionOutcome.NO_RULE)


class TestRuleConflicts(unittest.TestCase):
    """测试规则表静态冲突检测"""

    def test_conflict_inventory(self):
        conflicts = criteria_table.conflicts
        self.assertEqual(len(conflicts), 7)
        by_type = {}
        for conflict in conflicts:
            by_type.setdefault(conflict.conflict_type, []).append(
                {conflict.rule1_id, conflict.rule2_id}
            )
        self.assertEqual(by_type[ConflictType.CONTRADICTORY], [{"Lagrange-1", "Monsky-5"}])
        self.assertEqual(len(by_type[ConflictType.REDUNDANT]), 4)
        self.assertIn({"Iskra-1", "Iskra-2"}, by_type[ConflictType.REDUNDANT])
        self.assertEqual(
            sorted(sorted(pair) for pair in by_type[ConflictType.OVERLAPPING]),
            [["Gross", "Monsky-4"], ["Gross", "Monsky-6"]],
        )
        self.assertNotIn(ConflictType.CONDITIONAL, by_type)

    def test_resolution_and_statistics(self):
        detector = RuleConflictDetector(criteria_table.rules)
        contradictory = next(
            c for c in detector.detect_all_conflicts()
            if c.conflict_type == ConflictType.CONTRADICTORY
        )
        resolution = detector.resolve_conflict(contradictory)
        self.assertEqual(resolution["action"], "shadow")
        self.assertEqual(resolution["winner"], "Lagrange-1")
        self.assertEqual(resolution["rule_id"], "Monsky-5")

        stats = detector.get_conflict_statistics()
        self.assertEqual(stats["total_conflicts"], 7)
        self.assertEqual(stats["by_type"]["contradictory"], 1)
        self.assertEqual(stats["by_severity"]["critical"], 1)

    def test_disjoint_rules(self):
        detector = RuleConflictDetector([
            {"id": "x", "verdict": "congruent", "patterns": [{"two": False, "odd": [5]}], "condition": None},
            {"id": "y", "verdict": "non_congruent", "patterns": [{"two": False, "odd": [3]}], "condition": None},
        ])
        self.assertEqual(detector.detect_all_conflicts(), [])


if __name__ == '__main__':
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    for test_class in (TestDecomposition, TestClassification, TestRuleConflicts):
        suite.addTests(loader.loadTestsFromTestCase(test_class))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    print(f"\n{'='*60}")
    print(f"测试完成: {result.testsRun} 个测试")
    print(f"失败: {len(result.failures)}")
    print(f"错误: {len(result.errors)}")
    print(f"{'='*60}")

    exit(0 if result.wasSuccessful() else 1)
