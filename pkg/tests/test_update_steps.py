import numpy as np
import pytest
from scipy.optimize import minimize
from scipy.stats import ortho_group

from common.errors import NumericalError
from dataset import CenteringStats, Dataset
from training import (
    EdshModel,
    Hyperparams,
    code_step_surrogate,
    get_update_step,
    objective,
    objective_gradients,
    update_b,
    update_p,
    update_r,
    update_u,
    update_v,
    update_w,
)


def make_state(x1, x2, labels, k, hyper=None, **blocks):
    """Model with zero factors, R = I and B = +1 unless overridden, plus its dataset."""
    train = Dataset(x1, x2, labels)
    hyper = hyper or Hyperparams(k=k)
    n = train.n
    values = {
        "u1": np.zeros((train.d1, k)), "u2": np.zeros((train.d2, k)), "p": np.zeros((train.c, k)),
        "v": np.zeros((k, n)), "r": np.eye(k), "b": np.ones((k, n)),
        "w1": np.zeros((k, train.d1)), "w2": np.zeros((k, train.d2)),
    }
    values.update({name: np.asarray(value, dtype=float) for name, value in blocks.items()})
    centering = CenteringStats(np.zeros(train.d1), np.zeros(train.d2))
    return EdshModel(centering=centering, hyper=hyper, **values), train


def random_state(rng, k=3, n=5, d1=4, d2=3, c=2, hyper=None):
    labels = (rng.random((c, n)) < 0.5).astype(float)
    labels[0, labels.sum(axis=0) == 0] = 1.0
    return make_state(
        rng.standard_normal((d1, n)), rng.standard_normal((d2, n)), labels, k,
        hyper=hyper or Hyperparams(k=k, lambda1=0.7, lambda2=1.3, gamma=2.0, alpha=1.5, beta1=0.8, beta2=1.1, mu=0.6),
        u1=rng.standard_normal((d1, k)), u2=rng.standard_normal((d2, k)), p=rng.standard_normal((c, k)),
        v=rng.standard_normal((k, n)), r=ortho_group.rvs(k, random_state=rng) if k > 1 else np.eye(1),
        b=np.where(rng.random((k, n)) < 0.5, -1.0, 1.0),
        w1=rng.standard_normal((k, d1)), w2=rng.standard_normal((k, d2)),
    )


def scalar_state(**hyper_overrides):
    """The one-dimensional case with every weight 1: U=1, X=2, R=B=P=Y=1, W=0."""
    hyper = Hyperparams(k=1, lambda1=1, lambda2=1, gamma=1, alpha=1, beta1=1, beta2=1, mu=1).with_overrides(hyper_overrides)
    return make_state([[2.0]], [[2.0]], [[1.0]], 1, hyper=hyper, u1=[[1.0]], u2=[[1.0]], p=[[1.0]], v=[[5 / 6]])


class TestObjective:

    def test_only_alignment_survives(self):
        model, train = make_state([[0.0]], [[0.0]], [[0.0]], 1, hyper=Hyperparams(k=1, alpha=2.0))
        # Y = 0 is not a stored dataset, but the objective does not require labelled samples
        assert objective(model, train) == pytest.approx(2.0)

    def test_scalar_case(self):
        model, train = scalar_state()
        expected = 2 * (7 / 6) ** 2 + (1 / 6) ** 2 + 2 * (5 / 6) ** 2 + (2 + (5 / 6) ** 2)
        assert objective(model, train) == pytest.approx(expected, rel=1e-14)
        assert objective(model, train) == pytest.approx(6.8333, abs=1e-4)

    def test_mu_increases_value(self, rng):
        model, train = random_state(rng)
        heavier = model.with_block('hyper', model.hyper.with_overrides({"mu": 2 * model.hyper.mu}))
        assert objective(heavier, train) > objective(model, train)

    def test_gradients_match_finite_differences(self, rng):
        model, train = random_state(rng)
        grads = objective_gradients(model, train)
        h = 1e-6
        for name, grad in grads.items():
            block = getattr(model, name)
            numeric = np.zeros_like(block)
            for index in np.ndindex(block.shape):
                step = np.zeros_like(block)
                step[index] = h
                upper = objective(model.with_block(name, block + step), train)
                lower = objective(model.with_block(name, block - step), train)
                numeric[index] = (upper - lower) / (2 * h)
            assert np.linalg.norm(numeric - grad) <= 1e-5 * max(1.0, np.linalg.norm(grad)), name


class TestUpdateU:

    def test_ridge_example(self):
        model, train = make_state(np.eye(2), np.eye(2), np.ones((1, 2)), 2, hyper=Hyperparams(k=2, mu=1, lambda1=1),
                                  v=np.eye(2))
        np.testing.assert_allclose(update_u(model, train, 1), 0.5 * np.eye(2), atol=1e-14)

    def test_zero_v(self, rng):
        model, train = random_state(rng)
        model = model.with_block('v', np.zeros_like(model.v))
        np.testing.assert_array_equal(update_u(model, train, 2), np.zeros_like(model.u2))

    def test_non_finite_latent_rejected(self, rng):
        model, train = random_state(rng)
        v = model.v.copy()
        v[0, 1] = np.nan
        with pytest.raises(NumericalError, match="non-finite"):
            update_u(model.with_block('v', v), train, 1)

    @pytest.mark.parametrize("modality", [1, 2])
    def test_matches_ridge_least_squares(self, rng, modality):
        model, train = random_state(rng)
        x, v = train.features(modality), model.v
        shrink = np.sqrt(model.hyper.mu / model.hyper.lam(modality))
        lhs = np.hstack([v, shrink * np.eye(model.k)]).T
        rhs = np.hstack([x, np.zeros((x.shape[0], model.k))]).T
        expected = np.linalg.lstsq(lhs, rhs, rcond=None)[0].T
        np.testing.assert_allclose(update_u(model, train, modality), expected, atol=1e-10)

    def test_matches_numeric_minimizer(self, rng):
        model, train = random_state(rng, k=4, d1=3)
        lam, mu = model.hyper.lambda1, model.hyper.mu

        def cost(flat):
            u = flat.reshape(3, 4)
            return lam * np.sum((train.x1 - u @ model.v) ** 2) + mu * np.sum(u ** 2)

        result = minimize(cost, np.zeros(12), method="BFGS", options={"gtol": 1e-10})
        np.testing.assert_allclose(update_u(model, train, 1), result.x.reshape(3, 4), atol=1e-6)

    def test_stationary(self, rng):
        model, train = random_state(rng)
        model = model.with_block('u1', update_u(model, train, 1))
        grad = objective_gradients(model, train)["u1"]
        scale = 2 * model.hyper.lambda1 * np.linalg.norm(train.x1 @ model.v.T)
        assert np.linalg.norm(grad) <= 1e-8 * scale


class TestUpdateP:

    def test_hand_example(self):
        model, train = make_state(np.zeros((1, 2)), np.zeros((1, 2)), [[1.0, 0.0]], 2,
                                  b=[[1.0, -1.0], [1.0, 1.0]])
        np.testing.assert_allclose(update_p(model, train), [[0.5, 0.5]], atol=1e-6)

    def test_zero_labels(self):
        model, train = make_state(np.zeros((1, 3)), np.zeros((1, 3)), np.zeros((2, 3)), 2,
                                  b=[[1.0, -1.0, 1.0], [1.0, 1.0, -1.0]])
        np.testing.assert_array_equal(update_p(model, train), np.zeros((2, 2)))

    def test_duplicate_code_rows(self):
        model, train = make_state(np.zeros((1, 3)), np.zeros((1, 3)), [[1.0, 0.0, 1.0]], 2,
                                  b=[[1.0, -1.0, 1.0], [1.0, -1.0, 1.0]])
        p = update_p(model, train)
        assert np.all(np.isfinite(p))

    def test_least_squares(self, rng):
        model, train = random_state(rng, k=3, n=12)
        expected = np.linalg.lstsq(model.b.T, train.labels.T, rcond=None)[0].T
        np.testing.assert_allclose(update_p(model, train), expected, atol=1e-5)


class TestUpdateV:

    def test_scalar_case(self):
        model, train = scalar_state()
        assert update_v(model, train)[0, 0] == pytest.approx(5 / 6, rel=1e-14)

    def test_code_contribution_only(self):
        hyper = Hyperparams(k=1, alpha=1, beta1=1.5, beta2=2.0, mu=0.5)
        model, train = make_state([[3.0]], [[-1.0]], [[1.0]], 1, hyper=hyper)
        assert update_v(model, train)[0, 0] == pytest.approx(1 / 5)

    def test_matches_stacked_least_squares(self, rng):
        model, train = random_state(rng)
        h, k = model.hyper, model.k
        lhs = np.vstack([
            np.sqrt(h.lambda1) * model.u1, np.sqrt(h.lambda2) * model.u2, np.sqrt(h.alpha) * model.r,
            np.sqrt(h.beta1) * np.eye(k), np.sqrt(h.beta2) * np.eye(k), np.sqrt(h.mu) * np.eye(k),
        ])
        rhs = np.vstack([
            np.sqrt(h.lambda1) * train.x1, np.sqrt(h.lambda2) * train.x2, np.sqrt(h.alpha) * model.b,
            np.sqrt(h.beta1) * model.w1 @ train.x1, np.sqrt(h.beta2) * model.w2 @ train.x2,
            np.zeros((k, train.n)),
        ])
        expected = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
        np.testing.assert_allclose(update_v(model, train), expected, atol=1e-10)

    def test_stationary(self, rng):
        model, train = random_state(rng)
        model = model.with_block('v', update_v(model, train))
        grad = objective_gradients(model, train)["v"]
        scale = 2 * model.hyper.alpha * np.linalg.norm(model.b) + 2 * np.linalg.norm(model.u1.T @ train.x1)
        assert np.linalg.norm(grad) <= 1e-8 * scale


class TestUpdateR:

    def test_aligned_codes(self):
        b = np.array([[1.0, -1.0], [1.0, 1.0]])
        model, train = make_state(np.zeros((1, 2)), np.zeros((1, 2)), np.ones((1, 2)), 2, b=b, v=b)
        np.testing.assert_allclose(update_r(model, train), np.eye(2), atol=1e-12)

    def test_polar_factor(self):
        b = np.array([[1.0, 1.0], [-1.0, 1.0]])
        model, train = make_state(np.zeros((1, 2)), np.zeros((1, 2)), np.ones((1, 2)), 2, b=b, v=np.eye(2))
        half = np.sqrt(2) / 2
        np.testing.assert_allclose(update_r(model, train), [[half, half], [-half, half]], atol=1e-12)

    @pytest.mark.parametrize("svd_method", ["lapack", "jacobi"])
    def test_beats_rotation_sweep(self, rng, svd_method):
        model, train = random_state(rng, k=2, n=9, hyper=Hyperparams(k=2, svd_method=svd_method))
        best = np.linalg.norm(model.b - update_r(model, train) @ model.v)
        for theta in np.deg2rad(np.arange(360)):
            c, s = np.cos(theta), np.sin(theta)
            for rotation in ([[c, -s], [s, c]], [[c, s], [s, -c]]):
                assert best <= np.linalg.norm(model.b - np.array(rotation) @ model.v) + 1e-12

    def test_beats_random_orthogonal(self, rng):
        model, train = random_state(rng, k=4, n=20)
        r = update_r(model, train)
        np.testing.assert_allclose(r @ r.T, np.eye(4), atol=1e-8)
        best = np.linalg.norm(model.b - r @ model.v)
        for candidate in ortho_group.rvs(4, size=1000, random_state=rng):
            assert best <= np.linalg.norm(model.b - candidate @ model.v) + 1e-12


class TestUpdateB:

    def test_dominant_term(self):
        hyper = Hyperparams(k=1, alpha=1.0, gamma=1e-12)
        model, train = make_state(np.zeros((1, 2)), np.zeros((1, 2)), np.ones((1, 2)), 1, hyper=hyper,
                                  v=[[0.5, -0.2]])
        np.testing.assert_array_equal(update_b(model, train), [[1.0, -1.0]])

    def test_zero_argument_is_positive(self):
        model, train = make_state(np.zeros((1, 1)), np.zeros((1, 1)), np.ones((1, 1)), 1, v=[[0.0]])
        np.testing.assert_array_equal(update_b(model, train), [[1.0]])

    def test_scalar_arithmetic(self):
        hyper = Hyperparams(k=1, alpha=2.0, gamma=1.0)
        model, train = make_state(np.zeros((1, 1)), np.zeros((1, 1)), np.ones((1, 1)), 1, hyper=hyper,
                                  v=[[0.1]], p=[[-0.5]])
        np.testing.assert_array_equal(update_b(model, train), [[-1.0]])

    def test_single_flips_never_help(self, rng):
        model, train = random_state(rng)
        b = update_b(model, train)
        base = code_step_surrogate(model, train, b)
        for index in np.ndindex(b.shape):
            flipped = b.copy()
            flipped[index] = -flipped[index]
            assert code_step_surrogate(model, train, flipped) >= base - 1e-12


class TestUpdateW:

    def test_ridge_example(self):
        model, train = make_state(np.eye(2), np.eye(2), np.ones((1, 2)), 2, hyper=Hyperparams(k=2, mu=1, beta2=1),
                                  v=np.eye(2))
        np.testing.assert_allclose(update_w(model, train, 2), 0.5 * np.eye(2), atol=1e-14)

    def test_zero_v(self, rng):
        model, train = random_state(rng)
        model = model.with_block('v', np.zeros_like(model.v))
        np.testing.assert_array_equal(update_w(model, train, 1), np.zeros_like(model.w1))

    @pytest.mark.parametrize("modality", [1, 2])
    def test_matches_numeric_minimizer(self, rng, modality):
        model, train = random_state(rng)
        x = train.features(modality)
        beta, mu = model.hyper.beta(modality), model.hyper.mu
        shape = model.w(modality).shape

        def cost(flat):
            w = flat.reshape(shape)
            return beta * np.sum((model.v - w @ x) ** 2) + mu * np.sum(w ** 2)

        result = minimize(cost, np.zeros(np.prod(shape)), method="BFGS", options={"gtol": 1e-10})
        np.testing.assert_allclose(update_w(model, train, modality), result.x.reshape(shape), atol=1e-6)

    def test_stationary(self, rng):
        model, train = random_state(rng)
        model = model.with_block('w2', update_w(model, train, 2))
        grad = objective_gradients(model, train)["w2"]
        scale = 2 * model.hyper.beta2 * np.linalg.norm(model.v @ train.x2.T)
        assert np.linalg.norm(grad) <= 1e-8 * scale


class TestLocalOptimality:

    @pytest.mark.parametrize("name", ["u1", "u2", "p", "v", "w1", "w2"])
    def test_perturbations_never_help(self, rng, name):
        model, train = random_state(rng)
        model = model.with_block(name, get_update_step(name)(model, train))
        base = objective(model, train)
        block = getattr(model, name)
        for index in np.ndindex(block.shape):
            for delta in (1e-4, -1e-4):
                moved = block.copy()
                moved[index] += delta
                assert objective(model.with_block(name, moved), train) >= base - 1e-8

    def test_unknown_step(self):
        with pytest.raises(ValueError):
            get_update_step("q")


@pytest.mark.parametrize("seed", range(50))
def test_tiny_instances(seed):
    """Code step and rotation step on many random tiny problems."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 4))
    model, train = random_state(rng, k=k, n=int(rng.integers(1, 6)), d1=int(rng.integers(1, 5)), d2=int(rng.integers(1, 5)))
    b = update_b(model, train)
    base = code_step_surrogate(model, train, b)
    for index in np.ndindex(b.shape):
        flipped = b.copy()
        flipped[index] = -flipped[index]
        assert code_step_surrogate(model, train, flipped) >= base - 1e-12

    r = update_r(model, train)
    best = np.linalg.norm(model.b - r @ model.v)
    candidates = ortho_group.rvs(k, size=1000, random_state=rng).reshape(-1, k, k) if k > 1 else [np.eye(1), -np.eye(1)]
    for candidate in candidates:
        assert best <= np.linalg.norm(model.b - candidate @ model.v) + 1e-12
