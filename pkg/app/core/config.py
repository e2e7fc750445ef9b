"""
应用配置模块

通过 pydantic-settings 管理所有配置项，支持从环境变量（前缀 KP_）和 .env 文件加载。
"""
from typing import Optional, Tuple

import psutil
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """应用配置类"""

    # ==================== 基础配置 ====================
    PROJECT_NAME: str = "kummer-perverse"
    VERSION: str = "1.0.0"
    LOG_LEVEL: str = "WARNING"

    # ==================== 可行性上限 ====================
    # MAX_N 设置后覆盖下面三个上限
    MAX_N: Optional[int] = None
    MAX_EXHAUSTIVE_N: int = 3
    MAX_SAMPLED_N: int = 5
    MAX_SERIES_N: int = 12

    # ==================== 检查配置 ====================
    DEFAULT_SAMPLES: int = 10000
    DEFAULT_RING_SAMPLES: int = 1000
    DEFAULT_SEED: int = 1729
    DEFAULT_JOBS: int = 1  # 0 表示使用物理 CPU 数
    MAX_WITNESSES: int = 50

    # ==================== 曲面配置 ====================
    TORSION_RANK: Optional[int] = None
    # 挠子群有限部分的不变因子，如 KP_TORSION_FACTORS='[2, 4]'；空表示分裂形式
    TORSION_FACTORS: Tuple[int, ...] = ()

    class Config:
        env_file = ".env"
        env_prefix = "KP_"
        case_sensitive = True

    def exhaustive_bound(self) -> int:
        return self.MAX_N if self.MAX_N is not None else self.MAX_EXHAUSTIVE_N

    def sampled_bound(self) -> int:
        return self.MAX_N if self.MAX_N is not None else self.MAX_SAMPLED_N

    def series_bound(self) -> int:
        return self.MAX_N if self.MAX_N is not None else self.MAX_SERIES_N

    def resolve_jobs(self, jobs: Optional[int] = None) -> int:
        """并行度：显式参数优先，0 表示按物理核数"""
        value = self.DEFAULT_JOBS if jobs is None else jobs
        if value <= 0:
            return psutil.cpu_count(logical=False) or 1
        return value


# 全局配置实例
settings = Settings()
