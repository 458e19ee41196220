#!/usr/bin/env python3
"""
同余数工具箱 - 命令行入口
每个子命令独立调用一个构造，输出只写 JSON 到 stdout，日志写 stderr。
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

# 添加项目根目录到Python路径
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

from backend.report import ReportPipeline, report_batch
from core.arith.ecparam import (
    CurvePoint,
    ParamTuple,
    Triangle,
    d_from_tuple,
    point_from_triangle,
    points_from_tuple,
    triangle_from_point,
    tuple_from_point,
)
from core.arith.numth import gauss_lemma_count, legendre, legendre_euler, legendre_reciprocity
from core.engine.constants import ErrorMessages, ExitCodes
from core.engine.criteria import classify_by_tables
from core.engine.descent import run_descent
from core.engine.oracle import search_triangles, search_tuples, search_tuples_adaptive
from core.engine.tunnell import tunnell_identity
from core.errors import CongruentError, DegenerateTupleError, InconsistencyError, InvalidArgumentError
from shared.config.config_manager import config_manager
from shared.types import CriterionOutcome, VerdictStatus, parse_rational, rational_to_str

logger = logging.getLogger(__name__)


class UsageArgumentParser(argparse.ArgumentParser):
    """参数错误统一以退出码 64 结束"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ExitCodes.USAGE, f"{self.prog}: error: {message}\n")


# ==================== 参数解析辅助 ====================

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是整数: {text}")
    if value < 1:
        raise argparse.ArgumentTypeError(ErrorMessages.NON_POSITIVE.format(value))
    return value


def parse_range(text: str) -> range:
    """"a..b" 闭区间"""
    parts = text.split("..")
    if len(parts) != 2:
        raise InvalidArgumentError(ErrorMessages.BAD_RANGE.format(text))
    try:
        low, high = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise InvalidArgumentError(ErrorMessages.BAD_RANGE.format(text)) from exc
    if low < 1 or high < low:
        raise InvalidArgumentError(ErrorMessages.BAD_RANGE.format(text))
    return range(low, high + 1)


def parse_tuple_arg(text: str) -> Tuple[int, int, int, int]:
    parts = text.split(",")
    if len(parts) != 4:
        raise InvalidArgumentError(ErrorMessages.BAD_TUPLE_ARG.format(text))
    try:
        k, j, m, e = (int(p) for p in parts)
    except ValueError as exc:
        raise InvalidArgumentError(ErrorMessages.BAD_TUPLE_ARG.format(text)) from exc
    return k, j, m, e


def read_integers(lines: Iterable[str]) -> List[int]:
    """stdin 批量模式：每行一个整数，空行忽略"""
    values = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        try:
            values.append(int(line))
        except ValueError as exc:
            raise InvalidArgumentError(f"不是整数: {line}") from exc
    return values


# ==================== 子命令 ====================

def cmd_classify(args) -> Tuple[Any, int]:
    verdict = classify_by_tables(args.n)
    tunnell = tunnell_identity(args.n)
    search = search_triangles(args.n, args.bound or config_manager.get_report_config()['triangle_bound'])
    payload = verdict.to_dict()
    payload["tunnell"] = tunnell.to_dict()
    payload["oracle"] = search.to_dict()
    decisive = (
        verdict.verdict != CriterionOutcome.NO_RULE
        or not tunnell.holds
        or not search.empty
    )
    return payload, ExitCodes.DECISIVE if decisive else ExitCodes.UNKNOWN


def cmd_tunnell(args) -> Tuple[Any, int]:
    return tunnell_identity(args.n, args.workers).to_dict(), ExitCodes.DECISIVE


def cmd_descent(args) -> Tuple[Any, int]:
    seed = parse_tuple_arg(args.seed) if args.seed else None
    trace = run_descent(args.d, seed=seed, bound=args.bound)
    if args.trace_json:
        with open(args.trace_json, "w", encoding="utf-8") as f:
            f.write(trace.to_json())
    if args.trace_dot:
        with open(args.trace_dot, "w", encoding="utf-8") as f:
            f.write(trace.to_dot())
    return trace.to_dict(), ExitCodes.DECISIVE


def cmd_search_tuples(args) -> Tuple[Any, int]:
    if args.adaptive:
        report = search_tuples_adaptive(args.d, args.bound)
    else:
        report = search_tuples(args.d, args.bound or config_manager.get_tuple_bound(), args.workers)
    return report.to_dict(), ExitCodes.DECISIVE


def cmd_search_triangles(args) -> Tuple[Any, int]:
    report = search_triangles(args.d, args.bound or config_manager.get_triangle_bound())
    return report.to_dict(), ExitCodes.DECISIVE


def _triangle_bundle(triangle: Triangle) -> Dict[str, Any]:
    point = point_from_triangle(triangle)
    return {
        "triangle": triangle.to_dict(),
        "point": point.to_dict(),
        "tuple": tuple_from_point(point).to_dict(),
    }


def convert(tuple_text: Optional[str] = None, d: Optional[int] = None,
            point_text: Optional[str] = None, triangle_text: Optional[str] = None) -> Dict[str, Any]:
    """在参数元组、曲线点、三角形之间转换"""
    if tuple_text is not None:
        k, j, m, e = parse_tuple_arg(tuple_text)
        value = d_from_tuple(k, j, m, e)
        result: Dict[str, Any] = {"d": rational_to_str(value), "d_is_integer": value.denominator == 1}
        if d is not None and value != d:
            raise InvalidArgumentError(ErrorMessages.BAD_TUPLE.format((k, j, m, e)))
        if value.denominator == 1:
            t = ParamTuple(k, j, m, e, value.numerator)
            (p1, p1_neg), (p2, p2_neg) = points_from_tuple(t)
            result["tuple"] = t.to_dict()
            result["points"] = [p.to_dict() for p in (p1, p1_neg, p2, p2_neg)]
            result["triangle"] = triangle_from_point(p1).to_dict()
        return result

    if point_text is not None:
        parts = point_text.split(",")
        if len(parts) != 3:
            raise InvalidArgumentError(f"点格式应为 d,x,y: {point_text}")
        point = CurvePoint(int(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]))
        triangle = triangle_from_point(point)
        return {
            "point": point.to_dict(),
            "triangle": triangle.to_dict(),
            "tuple": tuple_from_point(point).to_dict(),
        }

    if triangle_text is not None:
        parts = triangle_text.split(",")
        if len(parts) != 3:
            raise InvalidArgumentError(f"三角形格式应为 a,b,c: {triangle_text}")
        a, b, c = (parse_rational(p) for p in parts)
        if b == 0:
            raise DegenerateTupleError(ErrorMessages.DEGENERATE_TRIANGLE)
        area = a * b / 2
        if area.denominator != 1:
            raise InvalidArgumentError(ErrorMessages.INVALID_TRIANGLE.format(a, b, c, area))
        return _triangle_bundle(Triangle(a, b, c, area.numerator))

    raise InvalidArgumentError("convert 需要 --tuple、--point 或 --triangle 之一")


def cmd_convert(args) -> Tuple[Any, int]:
    return convert(args.tuple, args.d, args.point, args.triangle), ExitCodes.DECISIVE


def cmd_legendre(args) -> Tuple[Any, int]:
    value = legendre(args.a, args.p)
    payload = {
        "a": str(args.a),
        "p": str(args.p),
        "legendre": value,
        "euler": legendre_euler(args.a, args.p),
        "reciprocity": legendre_reciprocity(args.a, args.p),
    }
    if args.a % args.p:
        payload["gauss_count"] = gauss_lemma_count(args.a, args.p)
    return payload, ExitCodes.DECISIVE


def cmd_report(args) -> Tuple[Any, int]:
    pipeline = ReportPipeline()
    if args.range or args.stdin:
        ns = list(parse_range(args.range)) if args.range else read_integers(sys.stdin)
        verdicts = report_batch(ns, args.workers, pipeline)
        lines = [v.model_dump(mode="json") for v in verdicts]
        unknown = any(v.status == VerdictStatus.UNKNOWN for v in verdicts)
        return lines, ExitCodes.UNKNOWN if unknown else ExitCodes.DECISIVE

    if args.n is None:
        raise InvalidArgumentError("report 需要 n、--range 或 --stdin")
    verdict = pipeline.run(args.n)
    code = ExitCodes.UNKNOWN if verdict.status == VerdictStatus.UNKNOWN else ExitCodes.DECISIVE
    return verdict.model_dump(mode="json"), code


# ==================== 入口 ====================

def build_parser() -> argparse.ArgumentParser:
    parser = UsageArgumentParser(prog="congruent", description="同余数工具箱")
    parser.add_argument("--config", help="JSON 配置文件")
    parser.add_argument("--verbose", "-v", action="store_true", help="DEBUG 日志输出到 stderr")
    parser.add_argument("--workers", type=_positive_int, help="并行线程数")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=UsageArgumentParser)

    p = sub.add_parser("classify", help="判别表 + Tunnell + 三角形搜索")
    p.add_argument("n", type=_positive_int)
    p.add_argument("--bound", type=_positive_int)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("tunnell", help="Tunnell 恒等式")
    p.add_argument("n", type=_positive_int)
    p.set_defaults(handler=cmd_tunnell)

    p = sub.add_parser("descent", help="无穷下降轨迹")
    p.add_argument("d", type=_positive_int)
    p.add_argument("--bound", type=_positive_int)
    p.add_argument("--seed", help="k,j,m,e")
    p.add_argument("--trace-json", dest="trace_json")
    p.add_argument("--trace-dot", dest="trace_dot")
    p.set_defaults(handler=cmd_descent)

    p = sub.add_parser("search-tuples", help="有界参数元组搜索")
    p.add_argument("d", type=_positive_int)
    p.add_argument("--bound", type=_positive_int)
    p.add_argument("--adaptive", action="store_true", help="结构化搜索，根上界逐次翻倍")
    p.set_defaults(handler=cmd_search_tuples)

    p = sub.add_parser("search-triangles", help="有界三角形搜索")
    p.add_argument("d", type=_positive_int)
    p.add_argument("--bound", type=_positive_int)
    p.set_defaults(handler=cmd_search_triangles)

    p = sub.add_parser("convert", help="元组/点/三角形互相转换")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--tuple", help="k,j,m,e")
    group.add_argument("--point", help="d,x,y")
    group.add_argument("--triangle", help="a,b,c")
    p.add_argument("--d", type=_positive_int, help="与 --tuple 一起使用时校验 d")
    p.set_defaults(handler=cmd_convert)

    p = sub.add_parser("legendre", help="Legendre 符号")
    p.add_argument("a", type=int)
    p.add_argument("p", type=int)
    p.set_defaults(handler=cmd_legendre)

    p = sub.add_parser("report", help="综合报告")
    p.add_argument("n", type=_positive_int, nargs="?")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--range", help="a..b")
    source.add_argument("--stdin", action="store_true", help="每行一个整数")
    p.set_defaults(handler=cmd_report)
    return parser


def _configure(args):
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.config:
        config_manager.load_file(args.config)
    if args.workers:
        config_manager.override('search', 'workers', args.workers)
        config_manager.override('tunnell', 'workers', args.workers)
        config_manager.override('report', 'batch_workers', args.workers)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _configure(args)
        payload, code = args.handler(args)
    except InconsistencyError as exc:
        logger.error(str(exc))
        print(f"内部一致性校验失败: {exc}", file=sys.stderr)
        return ExitCodes.INCONSISTENCY
    except (InvalidArgumentError, DegenerateTupleError, ValueError, OSError) as exc:
        print(f"参数错误: {exc}", file=sys.stderr)
        return ExitCodes.USAGE
    except CongruentError as exc:
        print(f"内部错误: {exc}", file=sys.stderr)
        return ExitCodes.INCONSISTENCY

    if isinstance(payload, list):
        for item in payload:
            print(json.dumps(item, ensure_ascii=False))
    else:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
