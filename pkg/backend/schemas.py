"""
报告数据模型 - JSON 输出的稳定结构

所有数值字段都是精确的整数或 "p/q" 字符串，不出现浮点数。
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from shared.types import EvidenceSource, VerdictStatus


class EvidenceModel(BaseModel):
    source: EvidenceSource
    claim: str
    witnessed: bool = False
    detail: Dict[str, Any] = Field(default_factory=dict)


class ReductionModel(BaseModel):
    """n = s^2 q 的平方缩放记录"""
    n: str
    squarefree_part: str
    scale: str
    note: str


class TriangleModel(BaseModel):
    a: str
    b: str
    c: str
    area: str

    @field_validator("a", "b", "c", "area")
    @classmethod
    def _exact(cls, value: str) -> str:
        if "." in value or "e" in value.lower():
            raise ValueError(f"非精确数值: {value}")
        return value


class PointModel(BaseModel):
    d: str
    x: str
    y: str


class WitnessModel(BaseModel):
    source: EvidenceSource
    triangle: TriangleModel
    point: PointModel


class SkippedStage(BaseModel):
    stage: str
    reason: str


class VerdictModel(BaseModel):
    """综合结论"""
    n: str
    status: VerdictStatus
    decisive_source: Optional[EvidenceSource] = None
    reduction: Optional[ReductionModel] = None
    evidence: List[EvidenceModel] = Field(default_factory=list)
    witness: Optional[WitnessModel] = None
    skipped: List[SkippedStage] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    timing_us: Dict[str, int] = Field(default_factory=dict)

    def to_json(self) -> str:
        return self.model_dump_json(exclude_none=False)
