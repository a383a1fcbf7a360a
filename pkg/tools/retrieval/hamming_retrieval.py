import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from common.errors import ArgumentError, ShapeError


def hamming(codes, i, j):
    """Number of differing bits between codes i and j (popcount of the XORed words)."""
    for index in (i, j):
        if not 0 <= index < codes.n:
            raise IndexError(f"code index {index} out of range for {codes.n} codes")
    return int(np.bitwise_count(codes.words[i] ^ codes.words[j]).sum())


def distances(query_words, db):
    """Hamming distance from one code's words to every code of `db`."""
    return np.bitwise_count(db.words ^ query_words[None, :]).sum(axis=1, dtype=np.int64)


def rank(query, db, top_m):
    """
    Rank the database by Hamming distance to a single query code.

    Returns:
        list: up to min(top_m, db.n) (index, distance) pairs, ascending by
        distance with ties broken by ascending database index.
    """
    if query.n != 1:
        raise ShapeError(f"rank expects a single query code, got {query.n}")
    if query.k != db.k:
        raise ShapeError(f"query codes have {query.k} bits, database codes have {db.k}")
    if top_m < 1:
        raise ArgumentError(f"top_m must be at least 1, got {top_m}")
    dist = distances(query.words[0], db)
    order = np.argsort(dist, kind='stable')[:top_m]
    return [(int(index), int(dist[index])) for index in order]


def rank_all(queries, db, top_m, threads=1):
    """
    Rank the database for every query code. With threads > 1 the queries are
    spread over a thread pool; the result is identical for any worker count.
    """
    if queries.k != db.k:
        raise ShapeError(f"query codes have {queries.k} bits, database codes have {db.k}")
    start_time = time.perf_counter()
    if threads > 1 and queries.n > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            futures = [executor.submit(rank, queries.code(i), db, top_m) for i in range(queries.n)]
            rankings = [f.result() for f in futures]
    else:
        rankings = [rank(queries.code(i), db, top_m) for i in range(queries.n)]
    response_time = round(time.perf_counter() - start_time, 3)
    logging.info(f"[retrieval] ranked {queries.n} queries against {db.n} codes in {response_time} seconds")
    return rankings
