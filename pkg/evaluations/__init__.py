# evaluations/__init__.py
from .retrieval_metrics import (
    relevant,
    relevance_matrix,
    average_precision,
    per_query_ap,
    map_at,
    topk_curve,
    pr_curve,
    interpolated_precision,
    AP_DENOMINATORS,
)
from .report import MetricsReport, evaluate_rankings, write_metrics, DEFAULT_KS, DEFAULT_MAP_M
from .benchmark import run_benchmark, scaling_ratios
from .experiment import run_experiment, run_task, DEFAULT_BIT_LENGTHS, TASKS
