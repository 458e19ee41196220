"""
报告流水线 - 把各模块组合成一个带出处的结论

平方约化 → 判别表 → Tunnell 恒等式 → 有界穷举 → (素数且适用时) 下降。
各阶段顺序执行并全部保留证据；批量模式按 n 并行。
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Dict, Iterable, Iterator, List, Optional

from backend.schemas import (
    EvidenceModel,
    PointModel,
    ReductionModel,
    SkippedStage,
    TriangleModel,
    VerdictModel,
    WitnessModel,
)
from core.arith.ecparam import (
    Triangle,
    point_from_triangle,
    scale_triangle,
    triangle_from_tuple,
)
from core.arith.numth import Factorization, factorize, is_prime
from core.engine.constants import LogMessages, NumthConstants
from core.engine.criteria import CriteriaTable, criteria_table
from core.engine.descent import run_descent, theorem1_applicable
from core.engine.oracle import search_tuples_structured, search_triangles
from core.engine.tunnell import tunnell_identity
from core.engine.validator import (
    CLAIM_CONDITIONAL,
    CLAIM_CONGRUENT,
    CLAIM_NON_CONGRUENT,
    CLAIM_NONE,
    Evidence,
    EvidenceValidator,
    evidence_validator,
)
from core.errors import InconsistencyError, InvalidArgumentError
from core.storage.factor_cache import FactorCache
from shared.config.config_manager import ConfigManager, config_manager
from shared.types import CriterionOutcome, DescentOutcome, EvidenceSource, VerdictStatus

logger = logging.getLogger(__name__)


class ReportPipeline:
    """单个 n 的报告流水线"""

    def __init__(
        self,
        config: Optional[ConfigManager] = None,
        table: Optional[CriteriaTable] = None,
        validator: Optional[EvidenceValidator] = None,
    ):
        self.config = config or config_manager
        self.table = table or criteria_table
        self.validator = validator or evidence_validator
        cache_path = self.config.get_factor_cache_path()
        self.cache = FactorCache(cache_path, self.config.get_cache_timeout()) if cache_path else None

    @contextmanager
    def _stage(self, n: int, name: str, timing: Dict[str, int]) -> Iterator[None]:
        start = time.perf_counter_ns()
        try:
            yield
        finally:
            timing[name] = (time.perf_counter_ns() - start) // 1000
            logger.debug(LogMessages.REPORT_STAGE.format(n, name, timing[name]))

    def _factorize(self, n: int) -> Factorization:
        return self.cache.factorize(n) if self.cache else factorize(n)

    def run(self, n: int) -> VerdictModel:
        if not isinstance(n, int) or n < 1:
            raise InvalidArgumentError(f"n 必须是正整数: {n}")

        settings = self.config.get_report_config()
        timing: Dict[str, int] = {}
        evidence: List[Evidence] = []
        skipped: List[SkippedStage] = []
        witness: Optional[Triangle] = None
        witness_source: Optional[EvidenceSource] = None

        with self._stage(n, "reduce", timing):
            fact = self._factorize(n)
            q, s = 1, 1
            for p, k in fact.factors:
                s *= p ** (k // 2)
                if k % 2:
                    q *= p
        reduction = None
        if s > 1:
            reduction = ReductionModel(
                n=str(n), squarefree_part=str(q), scale=str(s),
                note=f"{n} = {s}^2 * {q}，同余性只取决于 {q}",
            )

        with self._stage(n, "criteria", timing):
            verdict = self.table.classify(q)
            claim = {
                CriterionOutcome.CONGRUENT: CLAIM_CONDITIONAL,
                CriterionOutcome.NON_CONGRUENT: CLAIM_NON_CONGRUENT,
            }.get(verdict.verdict, CLAIM_NONE)
            evidence.append(Evidence(EvidenceSource.CRITERIA, claim, verdict.to_dict()))

        tunnell_holds = None
        with self._stage(n, "tunnell", timing):
            try:
                result = tunnell_identity(q, self.config.get_tunnell_config()['workers'])
            except InvalidArgumentError as exc:
                skipped.append(SkippedStage(stage="tunnell", reason=str(exc)))
            else:
                tunnell_holds = result.holds
                evidence.append(Evidence(
                    EvidenceSource.TUNNELL,
                    CLAIM_CONDITIONAL if result.holds else CLAIM_NON_CONGRUENT,
                    result.to_dict(),
                ))

        with self._stage(n, "oracle", timing):
            report = search_triangles(q, settings['triangle_bound'])
            hits = list(report.hits)
            detail = report.to_dict()
            # 三角形搜索落空且恒等式成立时再做结构化元组搜索
            if not hits and tunnell_holds:
                tuples = search_tuples_structured(q, settings['structured_root_bound'])
                hits = [triangle_from_tuple(t) for t in tuples.hits]
                detail = {"triangles": detail, "tuples": tuples.to_dict()}
            if hits:
                witness, witness_source = hits[0], EvidenceSource.ORACLE
                evidence.append(Evidence(EvidenceSource.ORACLE, CLAIM_CONGRUENT, detail, witnessed=True))
            else:
                evidence.append(Evidence(EvidenceSource.ORACLE, CLAIM_NONE, detail))

        with self._stage(n, "descent", timing):
            descent_witness = self._descent_stage(q, settings, evidence, skipped)
            if witness is None and descent_witness is not None:
                witness, witness_source = descent_witness, EvidenceSource.DESCENT

        result = self.validator.validate(n, evidence)
        model = VerdictModel(
            n=str(n),
            status=result.status,
            decisive_source=result.decisive,
            reduction=reduction,
            evidence=[EvidenceModel(**ev.to_dict()) for ev in evidence],
            skipped=skipped,
            warnings=result.warnings,
            timing_us=timing,
        )
        if witness is not None:
            model.witness = self._lift_witness(witness, s, n, witness_source)
        if model.status == VerdictStatus.CONGRUENT_WITNESSED and model.witness is None:
            raise InconsistencyError(f"n={n} 标记为已见证但没有三角形")
        logger.info(LogMessages.REPORT_VERDICT.format(n, model.status.value))
        return model

    @staticmethod
    def _descent_stage(q: int, settings: Dict, evidence: List[Evidence],
                       skipped: List[SkippedStage]) -> Optional[Triangle]:
        if not settings.get('run_descent', True):
            skipped.append(SkippedStage(stage="descent", reason="配置关闭"))
            return None
        if q < 5 or not is_prime(q):
            skipped.append(SkippedStage(stage="descent", reason=f"{q} 不是大于 3 的素数"))
            return None
        if not theorem1_applicable(q).applicable:
            skipped.append(SkippedStage(stage="descent", reason=f"{q} 不满足 -1, 2 均为非剩余"))
            return None
        bound = settings['descent_bound']
        if q * bound * bound >= NumthConstants.FLOAT_EXACT_LIMIT:
            skipped.append(SkippedStage(stage="descent", reason=f"d={q} 超出向量化搜索范围"))
            return None

        trace = run_descent(q, bound=bound)
        if trace.outcome == DescentOutcome.NO_SEED:
            evidence.append(Evidence(EvidenceSource.DESCENT, CLAIM_NON_CONGRUENT, trace.to_dict()))
            return None
        elif trace.outcome == DescentOutcome.WITNESS_FOUND:
            evidence.append(Evidence(EvidenceSource.DESCENT, CLAIM_CONGRUENT, trace.to_dict(), witnessed=True))
            return trace.witness
        else:
            # 真实种子走到矛盾或终止，说明下降本身有错
            raise InconsistencyError(f"d={q} 的真实种子下降得到 {trace.outcome.value}")

    @staticmethod
    def _lift_witness(tri: Triangle, s: int, n: int, source: EvidenceSource) -> WitnessModel:
        """按缩放律把 q 的三角形提升到 n，并重新校验"""
        lifted = scale_triangle(tri, s) if s > 1 else tri
        if lifted.area != n:
            raise InconsistencyError(f"缩放后面积 {lifted.area} != {n}")
        point = point_from_triangle(lifted)
        data = lifted.to_dict()
        return WitnessModel(
            source=source,
            triangle=TriangleModel(**data),
            point=PointModel(**point.to_dict()),
        )


def report(n: int, pipeline: Optional[ReportPipeline] = None) -> VerdictModel:
    return (pipeline or ReportPipeline()).run(n)


def report_batch(ns: Iterable[int], workers: Optional[int] = None,
                 pipeline: Optional[ReportPipeline] = None) -> List[VerdictModel]:
    """并行生成多个报告，结果按 n 排序"""
    pipeline = pipeline or ReportPipeline()
    if workers is None:
        workers = pipeline.config.get_report_config()['batch_workers']
    ordered = sorted(ns)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(pipeline.run, ordered))
