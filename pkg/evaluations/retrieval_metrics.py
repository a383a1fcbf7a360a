import logging
import math

import numpy as np

from common.errors import ArgumentError, ShapeError
from kernels import as_dense

AP_DENOMINATORS = ('min', 'all')
PR_LEVELS = np.arange(11) / 10


def relevant(query_labels, db_labels):
    """
    Boolean relevance of every database item for one query: item j is relevant
    when its label vector shares at least one class with the query.
    """
    query_labels = np.asarray(query_labels, dtype=np.float64).reshape(-1)
    db_labels = as_dense(db_labels, "db_labels")
    if query_labels.shape[0] != db_labels.shape[0]:
        raise ShapeError(f"query has {query_labels.shape[0]} classes, database has {db_labels.shape[0]}")
    return (query_labels @ db_labels) > 0


def relevance_matrix(query_labels, db_labels):
    """q x n boolean matrix, row i = relevant(query_labels[:, i], db_labels)."""
    query_labels = as_dense(query_labels, "query_labels")
    db_labels = as_dense(db_labels, "db_labels")
    if query_labels.shape[0] != db_labels.shape[0]:
        raise ShapeError(f"query labels have {query_labels.shape[0]} classes, database labels have {db_labels.shape[0]}")
    return (query_labels.T @ db_labels) > 0


def _ranked_hits(ranking, relevance):
    ranking = np.asarray(ranking, dtype=np.intp).reshape(-1)
    if ranking.size and (ranking.min() < 0 or ranking.max() >= relevance.shape[0]):
        raise ArgumentError(f"ranking refers to database items outside [0, {relevance.shape[0]})")
    return np.asarray(relevance, dtype=bool)[ranking]


def average_precision(ranking, relevance, m, denominator='min'):
    """
    AP at cutoff m of one ranked list.

    AP = (1/L) * sum over ranks i <= m of P(i) * rel(i), where P(i) is the
    precision of the top i items. L is min(total relevant, m) with
    denominator='min' and the total number of relevant items with 'all'.

    Args:
        ranking: database indices, best first. Must hold at least m entries
            unless it covers the whole database.
        relevance: boolean relevance of every database item.

    Returns:
        tuple: (ap, no_relevant). Queries without any relevant database item
        get AP 0 and no_relevant=True.
    """
    relevance = np.asarray(relevance, dtype=bool).reshape(-1)
    if len(ranking) == 0:
        raise ArgumentError("cannot score an empty ranking")
    if m < 1:
        raise ArgumentError(f"cutoff m must be at least 1, got {m}")
    if denominator not in AP_DENOMINATORS:
        raise ArgumentError(f"AP denominator must be one of {AP_DENOMINATORS}, got {denominator!r}")
    if len(ranking) < m and len(ranking) < relevance.shape[0]:
        raise ArgumentError(f"ranking has {len(ranking)} entries, fewer than the cutoff {m} and the database size")

    total = int(relevance.sum())
    if total == 0:
        return 0.0, True
    hits = _ranked_hits(ranking, relevance)[:m]
    positions = np.flatnonzero(hits)
    # precision at the i-th relevant position is i / rank
    precisions = [(i + 1) / (int(position) + 1) for i, position in enumerate(positions)]
    L = min(total, m) if denominator == 'min' else total
    return math.fsum(precisions) / L, False


def per_query_ap(rankings, relevances, m=100, denominator='min'):
    """AP of every query in index order; returns (list of AP, number of queries without relevant items)."""
    if len(rankings) != len(relevances):
        raise ShapeError(f"{len(rankings)} rankings but {len(relevances)} relevance rows")
    aps = []
    no_relevant = 0
    for ranking, relevance in zip(rankings, relevances):
        ap, empty = average_precision(ranking, relevance, m, denominator)
        aps.append(ap)
        no_relevant += int(empty)
    if no_relevant:
        logging.warning(f"[metrics] {no_relevant} of {len(aps)} queries have no relevant database item (AP 0)")
    return aps, no_relevant


def map_at(rankings, relevances, m=100, denominator='min'):
    """Mean of the per-query AP at cutoff m."""
    if len(rankings) < 1:
        raise ArgumentError("mAP needs at least one query")
    aps, _ = per_query_ap(rankings, relevances, m, denominator)
    return math.fsum(aps) / len(aps)


def topk_curve(rankings, relevances, ks):
    """
    Top-K precision: for each k, the mean over queries of (#relevant in top k) / k.

    k values beyond the database size are clamped to it (duplicates dropped).
    A ranking shorter than k is scored over its own length.

    Returns:
        list: (k, precision) pairs with strictly increasing k.
    """
    ks = [int(k) for k in ks]
    if not ks:
        raise ArgumentError("Top-K curve needs at least one k")
    if any(k < 1 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
        raise ArgumentError(f"Top-K cutoffs must be positive and strictly ascending, got {ks}")
    if len(rankings) < 1:
        raise ArgumentError("Top-K curve needs at least one query")
    if len(rankings) != len(relevances):
        raise ShapeError(f"{len(rankings)} rankings but {len(relevances)} relevance rows")

    db_size = len(relevances[0])
    clamped = []
    for k in ks:
        if k > db_size:
            logging.warning(f"[metrics] Top-K cutoff {k} exceeds database size {db_size}, clamped")
            k = db_size
        if not clamped or clamped[-1] < k:
            clamped.append(k)

    curve = []
    short = 0
    for k in clamped:
        values = []
        for ranking, relevance in zip(rankings, relevances):
            hits = _ranked_hits(ranking, relevance)
            depth = min(k, hits.shape[0])
            short += int(depth < k)
            values.append(int(hits[:depth].sum()) / depth if depth else 0.0)
        curve.append((k, math.fsum(values) / len(values)))
    if short:
        logging.warning(f"[metrics] {short} (query, k) pairs scored over a ranking shorter than k")
    return curve


def interpolated_precision(ranking, relevance, levels=PR_LEVELS):
    """
    Interpolated precision of one ranking at the given recall levels: the
    highest precision reached at any rank whose recall is at least the level.
    Levels that are never reached get 0.
    """
    relevance = np.asarray(relevance, dtype=bool).reshape(-1)
    total = int(relevance.sum())
    if total == 0 or len(ranking) == 0:
        return np.zeros(len(levels))
    hits = np.cumsum(_ranked_hits(ranking, relevance))
    ranks = np.arange(1, hits.shape[0] + 1)
    precision = hits / ranks
    recall = hits / total
    # running maximum from the tail
    best_after = np.maximum.accumulate(precision[::-1])[::-1]
    first = np.searchsorted(recall, levels, side='left')
    return np.where(first < hits.shape[0], best_after[np.minimum(first, hits.shape[0] - 1)], 0.0)


def pr_curve(rankings, relevances):
    """
    11-point interpolated PR curve averaged over queries. Queries with no
    relevant database item are left out.

    Returns:
        list: (recall level, precision) pairs for levels 0.0, 0.1, ..., 1.0.
    """
    if len(rankings) != len(relevances):
        raise ShapeError(f"{len(rankings)} rankings but {len(relevances)} relevance rows")
    rows = []
    skipped = 0
    for ranking, relevance in zip(rankings, relevances):
        if not np.any(relevance) or len(ranking) == 0:
            skipped += 1
            continue
        rows.append(interpolated_precision(ranking, relevance))
    if skipped:
        logging.warning(f"[metrics] {skipped} queries without relevant items left out of the PR curve")
    if not rows:
        logging.warning("[metrics] No query qualifies for the PR curve, reporting zero precision")
        return [(float(level), 0.0) for level in PR_LEVELS]
    table = np.vstack(rows)
    return [(float(level), math.fsum(table[:, i]) / table.shape[0]) for i, level in enumerate(PR_LEVELS)]
