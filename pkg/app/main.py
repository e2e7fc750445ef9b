"""kummer-perverse 命令行入口：python -m app.main <series|check|partitions> ..."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import ValidationError

from app.core.config import settings
from app.core.utils import load_yaml_config
from app.schemas import CheckKind, RunConfig, SeriesKind
from app.services import check_service
from app.services.series_service import partition_table, series_table
from app.services.table_service import render
from app.surfaces import SurfaceModel, surface_model
from utils.exceptions import KummerPerverseError, UsageError
from utils.response import error_payload

logger = logging.getLogger(__name__)

CASES = ("abelian", "e-times-line", "e-times-torus-quotient")
FORMATS = ("json", "csv", "latex", "text")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--case', choices=CASES, help='曲面模型')
    common.add_argument('--n', type=int, help='点数 n')
    common.add_argument('--mode', choices=('exhaustive', 'sampled'), help='检查方式')
    common.add_argument('--samples', type=int, help='抽样个数')
    common.add_argument('--seed', type=int, help='随机种子')
    common.add_argument('--format', choices=FORMATS, help='输出格式')
    common.add_argument('--jobs', type=int, help='并行进程数，0 表示物理核数')
    common.add_argument('--torsion-rank', dest='torsion_rank', type=int, help='覆盖挠秩 k（可除部分 (ℚ/ℤ)^k）')
    common.add_argument('--torsion-factors', dest='torsion_factors', type=int, nargs='+',
                        help='挠子群有限部分的不变因子 d₁ | d₂ | …（缺省为分裂形式）')
    common.add_argument('--output', type=str, help='写入文件而不是标准输出')
    common.add_argument('--config', type=str, help='YAML 运行配置，命令行参数优先')

    parser = argparse.ArgumentParser(
        prog='kummer-perverse',
        description='Hilbert 概形与广义 Kummer 簇上 perverse 滤过的计算与检查',
    )
    commands = parser.add_subparsers(dest='command', required=True)
    series = commands.add_parser('series', parents=[common], help='perverse 级数表')
    series.add_argument('target', choices=SeriesKind.__args__)
    check = commands.add_parser('check', parents=[common], help='定理检查')
    check.add_argument('target', choices=CheckKind.__args__)
    commands.add_parser('partitions', parents=[common], help='分拆表')
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """
    合并 YAML 配置与命令行参数

    Raises:
        UsageError: 配置不合法
    """
    data = load_yaml_config(getattr(args, 'config', None))
    for key, value in vars(args).items():
        if key != 'config' and value is not None:
            data[key] = value
    data.setdefault('target', None)
    try:
        return RunConfig(**data)
    except ValidationError as e:
        messages = [err['msg'] for err in e.errors()]
        raise UsageError("invalid run configuration", "; ".join(messages))


def resolve_model(config: RunConfig) -> SurfaceModel:
    rank = config.torsion_rank if config.torsion_rank is not None else settings.TORSION_RANK
    factors = config.torsion_factors if config.torsion_factors is not None else settings.TORSION_FACTORS
    return surface_model(config.case, rank, tuple(factors))


# ==================== 子命令 ====================

def cmd_series(config: RunConfig) -> Tuple[str, int]:
    _, table = series_table(config.target, resolve_model(config), config.n)
    return render(table, config.format), 0


def cmd_partitions(config: RunConfig) -> Tuple[str, int]:
    return render(partition_table(resolve_model(config), config.n), config.format), 0


def cmd_check(config: RunConfig) -> Tuple[str, int]:
    model = resolve_model(config)
    target = config.target
    if target == 'multiplicativity':
        report = check_service.check_multiplicativity(
            model, config.n, config.mode, config.samples, config.seed, config.jobs
        )
    elif target == 'strong-splitting':
        report = check_service.check_strong_splitting(
            model, config.n, config.mode, config.samples, config.seed, config.jobs
        )
    elif target == 'duality':
        report = check_service.check_duality(config.n, model)
    elif target == 'diagonal':
        report = check_service.check_diagonal(model, config.n)
    elif target == 'ring-axioms':
        report = check_service.check_ring_axioms(model, config.n, config.samples, config.seed)
    else:
        report = check_service.check_frobenius(model)
    return render(report, config.format), 0 if report.passed else 1


_COMMANDS = {
    'series': cmd_series,
    'check': cmd_check,
    'partitions': cmd_partitions,
}


def emit(text: str, output: Optional[str]) -> None:
    """
    输出到标准输出或文件

    Raises:
        UsageError: 输出文件无法写入
    """
    if output:
        try:
            Path(output).write_text(text, encoding='utf-8')
        except OSError as e:
            raise UsageError(f"cannot write output file {output}", e.strerror or str(e))
        logger.info("output written to %s", output)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
    args = build_parser().parse_args(argv)
    fmt = args.format or 'text'
    try:
        config = load_run_config(args)
        fmt = config.format
        text, status = _COMMANDS[config.command](config)
        emit(text, config.output)
        return status
    except KummerPerverseError as e:
        logger.error("%s failed: %s", args.command, e.detail)
        if fmt == 'json':
            payload = error_payload(e.detail, e.exit_code, [type(e).__name__])
            sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        else:
            print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
