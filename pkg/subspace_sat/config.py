"""全局配置

配置项可以通过环境变量（前缀 SUBSAT_）或项目根目录下的 .env 文件覆盖，
例如 SUBSAT_ENUMERATION_CAP=24。
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """求解器全局配置"""
    
    model_config = SettingsConfigDict(
        env_prefix="SUBSAT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )
    
    log_level: str = Field(default="INFO", description="日志级别")
    log_file: Optional[Path] = Field(default=None, description="日志文件路径")
    
    enumeration_cap: int = Field(default=30, ge=0, le=40, description="枚举仿射子空间的最大维数")
    unique_cap: int = Field(default=20, ge=1, description="唯一解拒绝采样允许的最大变量数")
    max_rejection_attempts: int = Field(default=10000, ge=1, description="拒绝采样最大尝试次数")
    
    det2_backstop_t_cap: int = Field(default=3, ge=0, description="2-Sub-SAT确定性算法兜底校验的余维上限")
    det2_backstop_n_cap: int = Field(default=20, ge=0, description="2-Sub-SAT确定性算法兜底校验的变量数上限")
    
    paf_density: float = Field(default=2.0, gt=0, description="降次算法中方程数与变量数之比上限c")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """获取缓存的全局配置"""
    return Settings()
