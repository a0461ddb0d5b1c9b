import math

import numpy as np
import pytest

from choi_witness.choi import (
    LindbladGenerator,
    Superoperator,
    choi_from_superop,
    intermediate_map,
    lindblad_action,
    matrix_units,
    max_entangled_state,
    random_cptp,
    random_kraus,
    unvec,
    vec,
)
from choi_witness.dephasing import DephasingParams, choi_closed_form, generator
from choi_witness.linalg import hermitian_eigen
from choi_witness.witnesses import linear_entropy

from conftest import I2, X, Y, Z, random_hermitian, random_state


def dephasing_with_rate(gamma):
    return LindbladGenerator(dim=2, jumps=[(lambda t: gamma, Z)])


def test_vec_convention():
    rng = np.random.default_rng(0)
    a, x, b = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
    np.testing.assert_allclose(vec(a @ x @ b), np.kron(b.T, a) @ vec(x))
    np.testing.assert_array_equal(unvec(vec(x), 3), x)
    np.testing.assert_array_equal(vec([[1, 2], [3, 4]]), [1, 3, 2, 4])


def test_matrix_units_ordering():
    for k, e in enumerate(matrix_units(3)):
        expected = np.zeros(9)
        expected[k] = 1
        np.testing.assert_array_equal(vec(e), expected)


def test_max_entangled_state():
    m = max_entangled_state(2)
    expected = np.zeros((4, 4))
    expected[np.ix_([0, 3], [0, 3])] = 0.5
    np.testing.assert_allclose(m, expected)
    assert np.trace(m) == pytest.approx(1)
    eig = hermitian_eigen(max_entangled_state(3)).eigenvalues
    np.testing.assert_allclose(eig, [0] * 8 + [1], atol=1e-12)
    assert np.trace(max_entangled_state(3)).real == pytest.approx(1)
    with pytest.raises(ValueError):
        max_entangled_state(1)


@pytest.mark.parametrize("d", [2, 3])
def test_choi_of_identity(d):
    choi = choi_from_superop(Superoperator.identity(d)).matrix
    assert np.max(np.abs(choi - max_entangled_state(d))) < 1e-12


def test_choi_of_depolarizing_channel():
    # rho -> Tr(rho) I/2, Kraus set {P/2 : P in I, X, Y, Z}
    s = Superoperator.from_kraus([p / 2 for p in (I2, X, Y, Z)])
    np.testing.assert_allclose(s.apply([[0.3, 0.1j], [-0.1j, 0.7]]), I2 / 2, atol=1e-15)
    np.testing.assert_allclose(choi_from_superop(s).matrix, np.eye(4) / 4, atol=1e-15)


def test_choi_matches_kron_definition():
    # (id kron L)(|psi><psi|) = (1/d) sum_ij E_ij kron L(E_ij)
    s = random_cptp(3, 2, seed=5)
    d = 3
    direct = np.zeros((9, 9), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d))
            e[i, j] = 1
            direct += np.kron(e, s.apply(e)) / d
    np.testing.assert_allclose(choi_from_superop(s).matrix, direct, atol=1e-14)


def test_lindblad_action_examples():
    g = dephasing_with_rate(0.7)
    np.testing.assert_array_equal(lindblad_action(g, 0.0, I2 / 2), np.zeros((2, 2)))
    plus = np.full((2, 2), 0.5)
    np.testing.assert_allclose(lindblad_action(g, 0.0, plus), [[0, -0.7], [-0.7, 0]])
    with pytest.raises(ValueError):
        lindblad_action(g, 0.0, np.eye(3))


def test_lindblad_action_traceless_general():
    rng = np.random.default_rng(11)
    h = random_hermitian(rng, 3)
    ops = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2)]
    g = LindbladGenerator(3, hamiltonian=lambda t: h * math.cos(t), jumps=[(lambda t: -0.4, ops[0]), (math.sin, ops[1])])
    for t in (0.0, 0.3, 2.0):
        out = lindblad_action(g, t, random_state(rng, 3))
        assert abs(np.trace(out)) < 1e-12


def test_lindblad_rejects_non_hermitian_hamiltonian():
    g = LindbladGenerator(2, hamiltonian=lambda t: np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        lindblad_action(g, 0.0, I2 / 2)


def test_zero_generator_gives_identity():
    s = intermediate_map(LindbladGenerator(2), 0.3, 1e-2, 4)
    np.testing.assert_array_equal(s.matrix, np.eye(4))


def test_intermediate_map_argument_checks():
    g = LindbladGenerator(2)
    with pytest.raises(ValueError):
        intermediate_map(g, 0.0, 0.0)
    with pytest.raises(ValueError):
        intermediate_map(g, 0.0, 1e-3, 0)


def test_intermediate_map_at_pi(paper_params):
    # gamma(pi) = 2 for g0 = lam = 1, so chi = -4e-4
    s = intermediate_map(generator(paper_params), math.pi, 1e-4, 16)
    choi = choi_from_superop(s).matrix
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = 0.5
    expected[0, 3] = expected[3, 0] = 0.5 * math.exp(-4e-4)
    assert np.max(np.abs(choi - expected)) < 1e-6


def test_dephasing_preserves_populations(paper_params):
    gen = generator(paper_params)
    for t in (0.5, 4.8, 7.0):
        s = intermediate_map(gen, t, 1e-4)
        for k in (0, 3):
            e = matrix_units(2)[k]
            assert np.max(np.abs(s.apply(e) - e)) < 1e-12


def test_intermediate_map_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(4)
    h = random_hermitian(rng, 3)
    op = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    g = LindbladGenerator(3, hamiltonian=lambda t: h, jumps=[(lambda t: 0.3 - t, op)])
    s = intermediate_map(g, 0.1, 0.05, 16)
    assert s.trace_preservation_error() < 1e-10
    assert s.hermiticity_preservation_error() < 1e-10


def test_composition_of_dephasing_maps(paper_params):
    gen = generator(paper_params)
    eps = paper_params.epsilon
    t = 2.5
    whole = intermediate_map(gen, t, 2 * eps, 32)
    split = intermediate_map(gen, t + eps, eps, 16).compose(intermediate_map(gen, t, eps, 16))
    assert np.max(np.abs(whole.matrix - split.matrix)) < 1e-9


def test_rk4_order_against_exact_solution():
    # constant-in-structure generator: coherence decays as exp(-2 int gamma)
    gamma = math.sin
    g = LindbladGenerator(2, jumps=[(gamma, Z)])
    t, eps = 0.2, 1.0
    exact = math.exp(-2 * (math.cos(t) - math.cos(t + eps)))
    e01 = np.array([[0, 1], [0, 0]])
    errors = [abs(intermediate_map(g, t, eps, n).apply(e01)[0, 1] - exact) for n in (8, 16)]
    assert 14 < errors[0] / errors[1] < 18


def test_random_cptp_is_reproducible():
    np.testing.assert_array_equal(random_cptp(2, 3, seed=9).matrix, random_cptp(2, 3, seed=9).matrix)
    assert not np.array_equal(random_cptp(2, 3, seed=9).matrix, random_cptp(2, 3, seed=10).matrix)


@pytest.mark.parametrize("kraus_count", [1, 2, 3, 4])
def test_random_kraus_completeness(kraus_count):
    ks = random_kraus(2, kraus_count, np.random.default_rng(kraus_count))
    assert np.max(np.abs(sum(k.conj().T @ k for k in ks) - I2)) < 1e-10


def test_random_cptp_unitary_case_is_pure():
    choi = choi_from_superop(random_cptp(2, 1, seed=3)).matrix
    assert abs(linear_entropy(choi)) < 1e-9


def test_random_cptp_choi_spectrum():
    rng = np.random.default_rng(123)
    for i in range(200):
        s = random_cptp(2, 1 + i % 4, rng)
        assert s.trace_preservation_error() < 1e-10
        choi = choi_from_superop(s)
        eig = choi.eigenvalues()
        assert eig[0] >= -1e-10 and eig[-1] <= 1 + 1e-10
        assert abs(choi.trace - 1) < 1e-9


def test_random_cptp_rejects_bad_count():
    for bad in (0, 5):
        with pytest.raises(ValueError):
            random_cptp(2, bad, seed=0)


def test_rk4_choi_against_closed_form_near_pi():
    p = DephasingParams()
    for t in (0.5, 2.0, 3.0, 6.0, 9.0):
        num = choi_from_superop(intermediate_map(generator(p), t, p.epsilon, 16)).matrix
        assert np.max(np.abs(num - choi_closed_form(p, t).matrix)) < 1e-5
