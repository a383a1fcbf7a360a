"""
Closed-form block updates of the training objective.

Every function takes the current model and the centered training set and
returns the new value of one block; none of them mutates the model. Products
that touch the N sample columns go through `kernels.matmul`, which checks
shapes and finiteness.
"""

from kernels import identity, matmul, sgn, spd_solve, svd_small
from .constants import (
    P_RIDGE,
    UPDATE_U1, UPDATE_U2, UPDATE_P, UPDATE_V, UPDATE_R, UPDATE_B, UPDATE_W1, UPDATE_W2,
)


def update_u(model, train, modality):
    """U = X V^T (V V^T + (mu/lambda) I)^-1."""
    v = model.v
    ridge = model.hyper.mu / model.hyper.lam(modality)
    gram = matmul(v, v.T) + ridge * identity(model.k)
    rhs = matmul(train.features(modality), v.T)
    return spd_solve(gram, rhs.T).T


def update_p(model, train):
    """P = Y B^T (B B^T + eps I)^-1; eps keeps duplicate code rows solvable."""
    b = model.b
    gram = matmul(b, b.T) + P_RIDGE * identity(model.k)
    rhs = matmul(train.labels, b.T)
    return spd_solve(gram, rhs.T).T


def update_v(model, train):
    h = model.hyper
    lhs = (
        h.lambda1 * model.u1.T @ model.u1
        + h.lambda2 * model.u2.T @ model.u2
        + h.alpha * model.r.T @ model.r
        + (h.beta1 + h.beta2 + h.mu) * identity(model.k)
    )
    rhs = (
        h.lambda1 * matmul(model.u1.T, train.x1)
        + h.lambda2 * matmul(model.u2.T, train.x2)
        + h.alpha * matmul(model.r.T, model.b)
        + h.beta1 * matmul(model.w1, train.x1)
        + h.beta2 * matmul(model.w2, train.x2)
    )
    return spd_solve(lhs, rhs)


def update_r(model, train=None):
    """
    Orthogonal Procrustes step: with B V^T = S diag(sigma) Shat^T, the
    orthogonal R minimizing ||B - R V||_F is the polar factor S Shat^T.
    """
    s, _, shat = svd_small(matmul(model.b, model.v.T), method=model.hyper.svd_method)
    return s @ shat.T


def update_b(model, train):
    h = model.hyper
    return sgn(h.alpha * matmul(model.r, model.v) + h.gamma * matmul(model.p.T, train.labels))


def update_w(model, train, modality):
    """W = V X^T (X X^T + (mu/beta) I)^-1."""
    x = train.features(modality)
    ridge = model.hyper.mu / model.hyper.beta(modality)
    gram = matmul(x, x.T) + ridge * identity(x.shape[0])
    rhs = matmul(model.v, x.T)
    return spd_solve(gram, rhs.T).T


_STEPS = {
    UPDATE_U1: lambda model, train: update_u(model, train, 1),
    UPDATE_U2: lambda model, train: update_u(model, train, 2),
    UPDATE_P: update_p,
    UPDATE_V: update_v,
    UPDATE_R: update_r,
    UPDATE_B: update_b,
    UPDATE_W1: lambda model, train: update_w(model, train, 1),
    UPDATE_W2: lambda model, train: update_w(model, train, 2),
}


def get_update_step(name):
    if name not in _STEPS:
        raise ValueError(f"Unknown update step: {name}")
    return _STEPS[name]
