import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from common.errors import ShapeError
from kernels import as_dense
from .retrieval_metrics import per_query_ap, pr_curve, relevance_matrix, topk_curve

DEFAULT_MAP_M = 100
DEFAULT_KS = (1, 10, 50, 100, 200, 500, 1000)


@dataclass
class MetricsReport:
    map_at_m: float
    m_cutoff: int
    topk_curve: list = field(default_factory=list)
    pr_curve: list = field(default_factory=list)
    per_query_ap: list = field(default_factory=list)
    no_relevant_queries: int = 0
    ap_denominator: str = 'min'

    def to_dict(self):
        return {
            "map_at_m": self.map_at_m,
            "m_cutoff": self.m_cutoff,
            "ap_denominator": self.ap_denominator,
            "no_relevant_queries": self.no_relevant_queries,
            "topk_curve": [[k, precision] for k, precision in self.topk_curve],
            "pr_curve": [[recall, precision] for recall, precision in self.pr_curve],
            "per_query_ap": list(self.per_query_ap),
        }


def evaluate_rankings(rankings, query_labels, db_labels, m=DEFAULT_MAP_M, ks=DEFAULT_KS, ap_denominator='min'):
    """
    Score a retrieval run.

    Args:
        rankings: one list per query, each of database indices or of
            (db_index, distance) pairs, best first.
        query_labels: c x q label matrix of the queries.
        db_labels: c x n label matrix of the database.
    """
    query_labels = as_dense(query_labels, "query_labels")
    db_labels = as_dense(db_labels, "db_labels")
    if query_labels.shape[1] != len(rankings):
        raise ShapeError(f"{len(rankings)} rankings but {query_labels.shape[1]} query label columns")
    indices = [[entry[0] if isinstance(entry, (tuple, list)) else entry for entry in ranking] for ranking in rankings]
    relevances = list(relevance_matrix(query_labels, db_labels))

    aps, no_relevant = per_query_ap(indices, relevances, m, ap_denominator)
    report = MetricsReport(
        map_at_m=math.fsum(aps) / len(aps) if aps else 0.0,
        m_cutoff=m,
        topk_curve=topk_curve(indices, relevances, ks),
        pr_curve=pr_curve(indices, relevances),
        per_query_ap=aps,
        no_relevant_queries=no_relevant,
        ap_denominator=ap_denominator,
    )
    logging.info(f"[metrics] mAP@{m} = {report.map_at_m:.4f} over {len(aps)} queries")
    return report


def write_metrics(out_dir, report):
    """Write metrics.json plus the two curves as pr.csv (recall, precision) and topk.csv (k, precision)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "metrics.json").write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    pd.DataFrame(report.pr_curve, columns=["recall", "precision"]).to_csv(out_dir / "pr.csv", index=False)
    pd.DataFrame(report.topk_curve, columns=["k", "precision"]).to_csv(out_dir / "topk.csv", index=False)
    logging.info(f"[metrics] Wrote metrics.json, pr.csv and topk.csv to {out_dir}")
