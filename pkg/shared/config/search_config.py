"""
搜索与计算配置
"""

# 穷举搜索配置
SEARCH_CONFIG = {
    "tuple_bound": 1500,
    "triangle_bound": 200,
    "structured_root_bound": 256,
    "descent_bound": 1500,
    "adaptive_max_root": 4096,
    "workers": 4,
}

# 数论配置
NUMTH_CONFIG = {
    "trial_division_bound": 10000,
}

# Tunnell 计数配置
TUNNELL_CONFIG = {
    "workers": 4,
    "max_n": 10 ** 7,  # 桌面规模
}

# 报告流水线配置
REPORT_CONFIG = {
    "batch_workers": 4,
    "triangle_bound": 60,
    "structured_root_bound": 64,
    "run_descent": True,
    "descent_bound": 300,
}

# 分解缓存配置（None 表示关闭）
CACHE_CONFIG = {
    "factor_cache_path": None,
    "timeout": 30,
}

# 判别规则表
RULES_CONFIG = {
    "criteria_rules_path": "shared/rules/criteria_rules.json",
}
