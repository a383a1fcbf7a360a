import json
import logging
from pathlib import Path

from common.errors import FormatError


def save_rankings(path, rankings, k, top_m, db_size):
    """
    Write rankings as JSON: {"k", "top_m", "db_size", "rankings": [{"query_index",
    "neighbors": [[db_index, distance], ...]}]}. Keys are sorted so reruns are
    byte-identical.
    """
    document = {
        "k": int(k),
        "top_m": int(top_m),
        "db_size": int(db_size),
        "rankings": [
            {"query_index": i, "neighbors": [[int(index), int(distance)] for index, distance in ranking]}
            for i, ranking in enumerate(rankings)
        ],
    }
    Path(path).write_text(json.dumps(document, sort_keys=True) + "\n", encoding="utf-8")
    logging.info(f"[rankings_file] Wrote {len(rankings)} rankings to {path}")


def load_rankings(path):
    """
    Read a rankings file. Every neighbour index must lie in [0, db_size).

    Returns:
        tuple: (list of rankings as lists of (db_index, distance), header dict)
    """
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        _fail(path, f"not valid JSON: {e}")
    if not isinstance(document, dict) or not isinstance(document.get("rankings"), list):
        _fail(path, "missing the 'rankings' list")
    db_size = document.get("db_size")
    if not isinstance(db_size, int) or isinstance(db_size, bool) or db_size < 0:
        _fail(path, f"db_size must be a non-negative integer, got {db_size!r}")

    rankings = []
    for position, entry in enumerate(document["rankings"]):
        try:
            query_index = entry["query_index"]
            ranking = [(int(index), int(distance)) for index, distance in entry["neighbors"]]
        except (KeyError, TypeError, ValueError) as e:
            _fail(path, f"entry {position} is malformed: {e}")
        if query_index != position:
            _fail(path, f"entry {position} has query_index {query_index}")
        for index, _ in ranking:
            if not 0 <= index < db_size:
                _fail(path, f"entry {position} lists database index {index} outside [0, {db_size})")
        rankings.append(ranking)
    header = {key: document.get(key) for key in ("k", "top_m", "db_size")}
    return rankings, header


def _fail(path, message):
    logging.error(f"[rankings_file] {path}: {message}")
    raise FormatError(f"{path}: {message}", path=str(path))
