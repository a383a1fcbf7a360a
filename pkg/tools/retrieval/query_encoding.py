from common.errors import ShapeError
from dataset import apply_center
from kernels import as_dense, sgn
from .packing import pack


def hash_projection(model, x, modality, use_rotation=True):
    """Real-valued projection R W_m (x - mean_m), or W_m (x - mean_m) without the rotation."""
    x = as_dense(x, "features")
    w = model.w(modality)
    if x.shape[0] != w.shape[1]:
        raise ShapeError(f"modality {modality} features have {w.shape[1]} rows, got {x.shape[0]}")
    projected = w @ apply_center(x, model.centering.mean(modality))
    if use_rotation:
        projected = model.r @ projected
    return projected


def encode(model, x, modality, use_rotation=True):
    """
    Hash the columns of raw features `x` (d_m x q) into packed codes.

    Features are shifted by the training means stored in the model. With
    `use_rotation` the code is sgn(R W_m x); otherwise the plain linear hash
    sgn(W_m x). sgn(0) is +1.
    """
    return pack(sgn(hash_projection(model, x, modality, use_rotation)))
