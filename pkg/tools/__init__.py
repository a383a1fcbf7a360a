# Binary code tools
from .retrieval.packing import PackedCodes, pack, unpack, words_per_code
from .retrieval.hamming_retrieval import hamming, distances, rank, rank_all
from .retrieval.query_encoding import encode, hash_projection

# Common tools
from .common.timing import get_timestamp
