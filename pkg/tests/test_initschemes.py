import numpy as np
import pytest

from trickbench.initschemes import SCHEMES, InitScheme, init_layer, init_mlp, orthogonalize
from trickbench.numcore import SeededRng


def test_lecun_bounds():
    w = init_layer(InitScheme("lecun"), 4, 8, SeededRng(0))
    assert np.all(np.abs(w) <= 0.5)  # sqrt(1/4)


def test_xavier_bounds():
    w = init_layer(InitScheme("xavier"), 10, 14, SeededRng(0))
    assert np.all(np.abs(w) <= np.sqrt(6.0 / 24.0))


def test_kaiming_std_monte_carlo():
    w = init_layer(InitScheme("kaiming"), 200, 500, SeededRng(1))
    assert w.std() == pytest.approx(0.1, rel=0.02)  # sqrt(2/200)


def test_orthogonal_rows_orthonormal():
    w = init_layer(InitScheme("orthogonal"), 5, 2, SeededRng(2))
    assert np.max(np.abs(w @ w.T - np.eye(2))) < 1e-10


def test_orthogonal_gain():
    w = init_layer(InitScheme("orthogonal", gain=1.7), 10, 4, SeededRng(3))
    assert np.max(np.abs(w @ w.T - 1.7 ** 2 * np.eye(4))) < 1e-8


def test_orthogonal_tall_columns_orthonormal():
    w = init_layer(InitScheme("orthogonal"), 3, 7, SeededRng(4))
    assert np.max(np.abs(w.T @ w - np.eye(3))) < 1e-10


def test_nonpositive_fan_rejected():
    with pytest.raises(ValueError):
        init_layer(InitScheme("lecun"), 0, 4, SeededRng(0))


def test_unknown_scheme_rejected():
    with pytest.raises(ValueError):
        InitScheme("sparse")


@pytest.mark.parametrize("kind", SCHEMES)
def test_finite_and_reproducible(kind):
    a = init_layer(InitScheme(kind), 6, 9, SeededRng(12, "w"))
    b = init_layer(InitScheme(kind), 6, 9, SeededRng(12, "w"))
    assert np.all(np.isfinite(a))
    assert np.array_equal(a, b)


@pytest.mark.parametrize("kind", SCHEMES)
def test_empirical_mean_near_zero(kind):
    # 1e5 draws: mean within 3 standard errors of zero
    w = init_layer(InitScheme(kind), 250, 400, SeededRng(8, kind))
    se = w.std() / np.sqrt(w.size)
    assert abs(w.mean()) < 3 * se


@pytest.mark.parametrize("kind", SCHEMES)
def test_init_mlp_zero_biases(kind):
    net = init_mlp((5, 16, 2), "tanh", InitScheme(kind), SeededRng(4))
    for layer in net.layers:
        assert np.all(layer.bias.data == 0.0)
        assert np.all(np.isfinite(layer.weight.data))


class TestOrthogonalize:
    def test_1x1_positive(self):
        assert orthogonalize(np.array([[2.5]]))[0, 0] == pytest.approx(1.0)

    def test_1x1_negative(self):
        assert orthogonalize(np.array([[-0.3]]))[0, 0] == pytest.approx(-1.0)

    def test_3x3_orthogonality(self):
        r = orthogonalize(SeededRng(5).standard_normal((3, 3)))
        assert np.max(np.abs(r.T @ r - np.eye(3))) < 1e-10

    def test_2x2_determinant_is_unit(self):
        for seed in range(10):
            r = orthogonalize(SeededRng(seed, "det").standard_normal((2, 2)))
            assert abs(abs(np.linalg.det(r)) - 1.0) < 1e-10

    def test_haar_sign_symmetry(self):
        # sign-corrected QR: the (0, 0) entry should not be biased positive
        signs = [np.sign(orthogonalize(
            SeededRng(s, "haar").standard_normal((4, 4)))[0, 0])
            for s in range(400)]
        assert 0.4 < np.mean(np.array(signs) > 0) < 0.6

    def test_rejects_non_matrix(self):
        with pytest.raises(ValueError):
            orthogonalize(np.ones(3))
