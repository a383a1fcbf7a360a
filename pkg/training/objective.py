import numpy as np

from common.errors import ShapeError


def _sq(a):
    return float(np.vdot(a, a))


def _check_dims(model, train):
    if train.d1 != model.d1 or train.d2 != model.d2:
        raise ShapeError(f"features are {train.d1}/{train.d2}-dimensional, model expects {model.d1}/{model.d2}")
    if train.c != model.p.shape[0]:
        raise ShapeError(f"labels have {train.c} classes, model expects {model.p.shape[0]}")
    if train.n != model.v.shape[1]:
        raise ShapeError(f"dataset has {train.n} samples, model was fitted on {model.v.shape[1]}")


def objective_terms(model, train):
    """
    Each weighted term of the training objective, keyed by name:
    recon1, recon2, label, align, hash1, hash2, reg.

    The regularizer covers U1, U2, V, W1 and W2 only; P, B and R carry none.
    """
    _check_dims(model, train)
    h = model.hyper
    return {
        "recon1": h.lambda1 * _sq(train.x1 - model.u1 @ model.v),
        "recon2": h.lambda2 * _sq(train.x2 - model.u2 @ model.v),
        "label": h.gamma * _sq(train.labels - model.p @ model.b),
        "align": h.alpha * _sq(model.b - model.r @ model.v),
        "hash1": h.beta1 * _sq(model.v - model.w1 @ train.x1),
        "hash2": h.beta2 * _sq(model.v - model.w2 @ train.x2),
        "reg": h.mu * (_sq(model.u1) + _sq(model.u2) + _sq(model.v) + _sq(model.w1) + _sq(model.w2)),
    }


def objective(model, train):
    terms = objective_terms(model, train)
    return sum(terms[name] for name in ("recon1", "recon2", "label", "align", "hash1", "hash2", "reg"))


def code_step_cost(model, train, b):
    """The part of the objective that depends on the codes b: alpha||b - RV||^2 + gamma||Y - Pb||^2."""
    h = model.hyper
    return h.alpha * _sq(b - model.r @ model.v) + h.gamma * _sq(train.labels - model.p @ b)


def code_step_surrogate(model, train, b):
    """
    Value minimized by the sign rule of the code step.

    tr(b^T b) = kN is constant over +-1 codes; the quadratic label term
    tr(b^T P^T P b) is replaced by its b-independent diagonal part
    N * tr(P^T P). What remains is linear in b, so sgn(alpha RV + gamma P^T Y)
    minimizes it exactly.
    """
    h = model.hyper
    n = b.shape[1]
    linear = h.alpha * (model.r @ model.v) + h.gamma * (model.p.T @ train.labels)
    return (h.alpha * b.size + h.gamma * n * _sq(model.p) + h.gamma * _sq(train.labels)
            - 2.0 * float(np.vdot(linear, b)))


def objective_gradients(model, train):
    """Analytic gradients of the objective with respect to u1, u2, p, v, w1 and w2."""
    _check_dims(model, train)
    h = model.hyper
    v = model.v
    grads = {}
    for m, x in ((1, train.x1), (2, train.x2)):
        u, w = model.u(m), model.w(m)
        grads[f"u{m}"] = 2.0 * h.lam(m) * (u @ v - x) @ v.T + 2.0 * h.mu * u
        grads[f"w{m}"] = 2.0 * h.beta(m) * (w @ x - v) @ x.T + 2.0 * h.mu * w
    grads["p"] = 2.0 * h.gamma * (model.p @ model.b - train.labels) @ model.b.T
    grads["v"] = (
        2.0 * h.lambda1 * model.u1.T @ (model.u1 @ v - train.x1)
        + 2.0 * h.lambda2 * model.u2.T @ (model.u2 @ v - train.x2)
        + 2.0 * h.alpha * model.r.T @ (model.r @ v - model.b)
        + 2.0 * h.beta1 * (v - model.w1 @ train.x1)
        + 2.0 * h.beta2 * (v - model.w2 @ train.x2)
        + 2.0 * h.mu * v
    )
    return grads
