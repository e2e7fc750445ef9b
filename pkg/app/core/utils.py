"""
公共工具函数模块

提供表格单元格与双分次位置的格式化、YAML 运行配置读取。
"""
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import yaml

from utils.exceptions import UsageError


# ==================== 格式化工具 ====================

def format_cell(value: Any) -> str:
    """
    把表格单元格的值格式化为字符串

    Example:
        >>> format_cell(Fraction(1, 2))
        '1/2'
        >>> format_cell(None)
        '-'
        >>> format_cell(True)
        'yes'
    """
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return str(value)


def format_positions(positions: Sequence[Sequence[int]], limit: int = 8) -> str:
    """
    把 (d, p) 位置列表格式化为一行，超过 limit 个时只列前 limit 个并注明剩余数量

    Example:
        >>> format_positions([[0, 0], [2, 1]])
        '(0,0) (2,1)'
        >>> format_positions([[d, 0] for d in range(5)], limit=2)
        '(0,0) (1,0) +3 more'
    """
    shown = " ".join("(" + ",".join(str(x) for x in pos) + ")" for pos in positions[:limit])
    rest = len(positions) - limit
    return f"{shown} +{rest} more" if rest > 0 else shown


# ==================== 配置文件工具 ====================

def load_yaml_config(path: Optional[str]) -> Dict[str, Any]:
    """
    读取 YAML 运行配置，键名中的 '-' 统一换成 '_'

    Raises:
        UsageError: 文件不存在、无法解析或顶层不是映射
    """
    if not path:
        return {}
    file = Path(path)
    if not file.is_file():
        raise UsageError(f"config file {path} not found")
    try:
        data = yaml.safe_load(file.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise UsageError(f"config file {path} is not valid YAML", str(e))
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must contain a mapping")
    return {str(k).replace("-", "_"): v for k, v in data.items()}
