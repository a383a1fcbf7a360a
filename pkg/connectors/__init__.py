# connectors/__init__.py
from .matrix_file import save_matrix, load_matrix, decode_matrix, MATRIX_MAGIC, MATRIX_SUFFIX
from .codes_file import save_codes, load_codes, decode_codes, CODES_MAGIC
from .dataset_store import save_dataset, load_dataset, load_labels, dataset_paths
from .model_store import ModelStore, save_model, load_model
from .csv_import import read_csv_matrix
from .rankings_file import save_rankings, load_rankings
