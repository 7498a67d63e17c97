#!/usr/bin/env python3
"""
命令行入口 - decompose / verify / classify / paper-checks

退出码：
    0 成功
    1 证书复核失败或复现检查失败
    2 模数不是 2^k·3^l
    3 解析或参数错误
    4 GF(2) 随机回退预算耗尽
"""

import argparse
import asyncio
import json
import logging
import sys
from dataclasses import replace
from typing import List, Optional

from core.config import EngineSettings
from core.errors import (
    DocumentParseError,
    FallbackBudgetExhausted,
    InadmissibleModulus,
    InternalVerificationFailure,
    ModulusOutOfRange,
)
from main import TrinilSystem

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INADMISSIBLE = 2
EXIT_USAGE = 3
EXIT_BUDGET = 4

_EXIT_CODES = (
    (InadmissibleModulus, EXIT_INADMISSIBLE),
    (FallbackBudgetExhausted, EXIT_BUDGET),
    (InternalVerificationFailure, EXIT_FAILED),
    (DocumentParseError, EXIT_USAGE),
    (ModulusOutOfRange, EXIT_USAGE),
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """参数错误走退出码 3"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def exit_code_for(e: BaseException) -> int:
    for cls, code in _EXIT_CODES:
        if isinstance(e, cls):
            return code
    return EXIT_FAILED


def configure_logging(level: str, log_file: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="trinil",
        description="ℤ_m (m = 2^k·3^l) 上矩阵的三幂等 + 幂零分解，带可复核证书。",
    )
    parser.add_argument("--debug", action="store_true", help="输出调试日志。")
    parser.add_argument("--log-file", metavar="path", help="同时把日志追加到文件。")

    cmds = parser.add_subparsers(title="子命令", dest="call")

    cmd = cmds.add_parser("decompose", help="分解一个矩阵文档并输出证书。")
    cmd.add_argument("input", nargs="?", default="-", help="矩阵文档路径（默认 stdin）。")
    cmd.add_argument("--mod", type=int, metavar="m", help="覆盖文档中的模数。")
    cmd.add_argument("--seed", type=int, help="GF(2) 随机回退种子（默认取 TRINIL_SEED 或 0）。")
    cmd.add_argument("--budget", type=int, help="随机回退的最大采样次数（默认 100000）。")
    cmd.add_argument("--format", choices=("json", "text"), default="json", help="证书格式。")
    cmd.add_argument("-o", "--output", metavar="path", default="-", help="证书输出路径（默认 stdout）。")

    cmd = cmds.add_parser("verify", help="从头复核证书。")
    cmd.add_argument("certificate", nargs="?", default="-", help="证书路径（默认 stdin）。")

    cmd = cmds.add_parser("classify", help="穷举判定 ℤ_m 的环性质。")
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--mod", type=int, metavar="m", help="单个模数。")
    group.add_argument("--sweep", type=int, metavar="limit", help="对 2..limit 逐个分类。")
    cmd.add_argument("--format", choices=("json", "text"), default="text", help="报告格式。")

    cmd = cmds.add_parser("paper-checks", help="运行打包的正反例复现。")
    cmd.add_argument("--json", action="store_true", help="输出机器可读报告。")
    cmd.add_argument("--inject-fault", action="store_true", help="故意破坏一个检查，确认失败能被报告。")

    return parser


def _print(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    sys.stdout.flush()


def _fail(result: dict) -> int:
    error = result.get("exception")
    logger.error(f"❌ {result.get('error')}")
    sys.stderr.write(f"error: {result.get('error')}\n")
    return exit_code_for(error) if error is not None else EXIT_FAILED


async def cmd_decompose(system: TrinilSystem, opts) -> int:
    if opts.budget is not None and opts.budget < 1:
        raise UsageError("--budget 必须 ≥ 1")
    result = await system.decompose_document(
        input_path=opts.input,
        output_path=opts.output,
        modulus=opts.mod,
        seed=opts.seed,
        budget=opts.budget,
        fmt=opts.format,
    )
    if not result["success"]:
        return _fail(result)
    return EXIT_OK


async def cmd_verify(system: TrinilSystem, opts) -> int:
    result = await system.verify_document(opts.certificate)
    if "report" not in result:
        return _fail(result)
    report = result["report"]
    if report.accepted:
        _print("ok")
        return EXIT_OK
    _print(f"failed: {report.failure}")
    return EXIT_FAILED


def _classify_text(report: dict) -> str:
    return "\n".join(f"{key}: {json.dumps(value, sort_keys=True)}" for key, value in report.items())


async def cmd_classify(system: TrinilSystem, opts) -> int:
    if opts.mod is not None:
        result = await system.classify(opts.mod)
        if "reports" not in result:
            raise UsageError(result["error"])
        data = [r.to_dict() for r in result["reports"]]
        if opts.format == "json":
            _print(json.dumps(data[0], sort_keys=True, indent=2))
        else:
            _print(_classify_text(data[0]))
        return EXIT_OK

    result = await system.sweep(opts.sweep)
    if "rows" not in result:
        raise UsageError(result["error"])
    rows = result["rows"]
    if opts.format == "json":
        table = [
            {"m": r.m, "trinil_clean": r.trinil_clean, "two_three_only": r.two_three_only, "agrees": r.agrees}
            for r in rows
        ]
        _print(json.dumps(table, sort_keys=True, indent=2))
    else:
        lines = ["m\ttrinil_clean\t2^a3^b\tagrees"]
        lines += [
            f"{r.m}\t{str(r.trinil_clean).lower()}\t{str(r.two_three_only).lower()}\t{str(r.agrees).lower()}"
            for r in rows
        ]
        _print("\n".join(lines))
    return EXIT_OK


async def cmd_paper_checks(system: TrinilSystem, opts) -> int:
    result = await system.reproduce(inject_fault=opts.inject_fault)
    outcomes = result["outcomes"]
    if opts.json:
        _print(json.dumps(
            {"passed": result["success"], "checks": [o.to_dict() for o in outcomes]}, sort_keys=True, indent=2
        ))
    else:
        _print("\n".join(f"{'PASS' if o.passed else 'FAIL'} {o.name}: {o.detail}" for o in outcomes))
    return EXIT_OK if result["success"] else EXIT_FAILED


_COMMANDS = {
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "paper-checks": cmd_paper_checks,
}


def main(args: Optional[List[str]] = None) -> int:
    parser = build_parser()
    opts = parser.parse_args(sys.argv[1:] if args is None else args)
    if not opts.call:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    settings = EngineSettings.from_env()
    if opts.debug:
        settings = replace(settings, log_level="DEBUG")
    configure_logging(settings.log_level, opts.log_file)

    system = TrinilSystem(settings)
    try:
        return asyncio.run(_COMMANDS[opts.call](system, opts))
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"❌ {opts.call} 失败")
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
