# dataset/__init__.py
from .dataset import Dataset, CenteringStats, center, apply_center, center_dataset, split
from .synthetic import SynthSpec, synth
