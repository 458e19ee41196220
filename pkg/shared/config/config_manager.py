"""
统一配置管理器
集中管理所有配置项：内置默认值 < JSON 配置文件 < 环境变量 < 命令行参数
"""

import copy
import json
import os
from typing import Any, Dict, Optional

from .search_config import (
    CACHE_CONFIG,
    NUMTH_CONFIG,
    REPORT_CONFIG,
    RULES_CONFIG,
    SEARCH_CONFIG,
    TUNNELL_CONFIG,
)


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_path: Optional[str] = None):
        self._configs: Dict[str, Dict[str, Any]] = {
            'search': copy.deepcopy(SEARCH_CONFIG),
            'numth': copy.deepcopy(NUMTH_CONFIG),
            'tunnell': copy.deepcopy(TUNNELL_CONFIG),
            'report': copy.deepcopy(REPORT_CONFIG),
            'cache': copy.deepcopy(CACHE_CONFIG),
            'rules': copy.deepcopy(RULES_CONFIG),
        }

        config_path = config_path or os.environ.get('CONGRUENT_CONFIG')
        if config_path:
            self.load_file(config_path)

        # 环境变量覆盖
        self._load_env_overrides()

    def load_file(self, path: str):
        """从 JSON 文件合并配置，只接受已知的分区"""
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        for section, values in data.items():
            if section not in self._configs:
                raise ValueError(f"未知的配置分区: {section}")
            self._configs[section].update(values)

    def _load_env_overrides(self):
        """从环境变量加载配置覆盖"""
        if 'CONGRUENT_TUPLE_BOUND' in os.environ:
            self._configs['search']['tuple_bound'] = int(os.environ['CONGRUENT_TUPLE_BOUND'])
        if 'CONGRUENT_TRIANGLE_BOUND' in os.environ:
            self._configs['search']['triangle_bound'] = int(os.environ['CONGRUENT_TRIANGLE_BOUND'])
        if 'CONGRUENT_WORKERS' in os.environ:
            workers = int(os.environ['CONGRUENT_WORKERS'])
            self._configs['search']['workers'] = workers
            self._configs['tunnell']['workers'] = workers
            self._configs['report']['batch_workers'] = workers
        if 'CONGRUENT_FACTOR_CACHE' in os.environ:
            self._configs['cache']['factor_cache_path'] = os.environ['CONGRUENT_FACTOR_CACHE']

    def override(self, section: str, key: str, value: Any):
        """命令行参数覆盖，None 表示未指定"""
        if value is not None:
            self._configs[section][key] = value

    def get_search_config(self) -> Dict[str, Any]:
        """获取搜索配置"""
        return self._configs['search']

    def get_numth_config(self) -> Dict[str, Any]:
        """获取数论配置"""
        return self._configs['numth']

    def get_tunnell_config(self) -> Dict[str, Any]:
        """获取 Tunnell 配置"""
        return self._configs['tunnell']

    def get_report_config(self) -> Dict[str, Any]:
        """获取报告配置"""
        return self._configs['report']

    def get_tuple_bound(self) -> int:
        return self._configs['search']['tuple_bound']

    def get_triangle_bound(self) -> int:
        return self._configs['search']['triangle_bound']

    def get_descent_bound(self) -> int:
        return self._configs['search']['descent_bound']

    def get_workers(self) -> int:
        return self._configs['search']['workers']

    def get_trial_division_bound(self) -> int:
        return self._configs['numth']['trial_division_bound']

    def get_factor_cache_path(self) -> Optional[str]:
        """获取分解缓存路径"""
        return self._configs['cache']['factor_cache_path']

    def get_cache_timeout(self) -> float:
        return self._configs['cache']['timeout']

    def get_rules_path(self) -> str:
        """获取判别规则表路径"""
        return self._configs['rules']['criteria_rules_path']


# 全局配置管理器实例
config_manager = ConfigManager()
