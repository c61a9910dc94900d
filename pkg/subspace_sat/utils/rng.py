"""随机数流管理

所有随机求解器只通过这里拿随机数生成器：给定(seed, 流编号...)得到的
Generator是确定的，不同流编号之间相互独立。
"""

from typing import Union

import numpy as np

RandomSource = Union[int, np.random.Generator]


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """按(seed, stream)派生独立的随机数子流
    
    Args:
        seed: 64位种子
        *stream: 子流编号，例如试验序号
        
    Returns:
        np.random.Generator: 随机数生成器
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(stream))
    return np.random.default_rng(sequence)


def ensure_rng(source: RandomSource) -> np.random.Generator:
    """把整数种子或现成的Generator统一成Generator"""
    if isinstance(source, np.random.Generator):
        return source
    return make_rng(int(source))


def random_bits(rng: np.random.Generator, width: int) -> int:
    """均匀随机的width位整数（按位打包）"""
    if width <= 0:
        return 0
    value = 0
    # 每次取32位，避免numpy整数溢出
    for offset in range(0, width, 32):
        chunk = min(32, width - offset)
        value |= int(rng.integers(0, 1 << chunk)) << offset
    return value
