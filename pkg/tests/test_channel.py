import numpy as np
import pytest

from margulis.channel import (IntertwiningReport, KrausChannel, apply_channel,
                              expander_lambda, margulis_channel,
                              random_hermitian, superoperator, unvectorize,
                              vectorize, verify_wigner_intertwining)
from margulis.phasespace import (PhaseSpaceContext, inverse_wigner,
                                 phase_point_basis, wigner)
from margulis.walk import GridDist, spectral_report, walk_matrix, walk_step


def random_density(N, rng):
    g = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


class TestChannelConstruction:
    def test_degree_eight(self):
        ch = margulis_channel(PhaseSpaceContext(5))
        assert ch.degree == 8 and ch.dim == 5

    @pytest.mark.parametrize("N", [3, 5, 7])
    def test_kraus_completeness(self, N):
        ch = margulis_channel(PhaseSpaceContext(N))
        total = sum(K.conj().T @ K for K in ch.kraus_operators())
        assert np.max(np.abs(total - np.eye(N))) < 1e-10

    def test_unital(self):
        N = 7
        ch = margulis_channel(PhaseSpaceContext(N))
        out = apply_channel(ch, np.eye(N) / N)
        assert np.allclose(out, np.eye(N) / N, atol=1e-14)

    def test_trace_and_hermiticity_preserved(self):
        N = 5
        ch = margulis_channel(PhaseSpaceContext(N))
        rng = np.random.default_rng(20)
        for _ in range(20):
            rho = random_density(N, rng)
            out = apply_channel(ch, rho)
            assert np.trace(out) == pytest.approx(1.0, abs=1e-12)
            assert np.max(np.abs(out - out.conj().T)) < 1e-12

    def test_dimension_mismatch(self):
        ch = margulis_channel(PhaseSpaceContext(5))
        with pytest.raises(ValueError, match="shape"):
            apply_channel(ch, np.eye(7))

    def test_empty_channel_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            KrausChannel(3, ())


class TestActionOnPhasePoints:
    def test_matches_classical_step_coefficients_n7(self):
        # One application of the channel to A(0,0) spreads exactly like one
        # walk step applied to a point mass.
        N = 7
        ctx = PhaseSpaceContext(N)
        ch = margulis_channel(ctx)
        basis = phase_point_basis(ctx)
        out = apply_channel(ch, basis[0])
        expected = 0.5 * basis[0] + 0.125 * (
            basis[1 * N + 0] + basis[6 * N + 0] + basis[0 * N + 1] + basis[0 * N + 6])
        assert np.max(np.abs(out - expected)) < 1e-12

    @pytest.mark.parametrize("N", [3, 5])
    def test_phase_point_image_equals_walk_row(self, N):
        ctx = PhaseSpaceContext(N)
        ch = margulis_channel(ctx)
        basis = phase_point_basis(ctx)
        M = walk_matrix(N)
        for v in range(N * N):
            out = apply_channel(ch, basis[v])
            expected = np.einsum("u,uij->ij", M[:, v], basis)
            assert np.max(np.abs(out - expected)) < 1e-12


class TestSuperoperator:
    def test_vectorization_convention(self):
        # Column stacking: vec(A X B^dag) = (conj(B) kron A) vec(X).
        rng = np.random.default_rng(21)
        A, B, X = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
                   for _ in range(3))
        lhs = vectorize(A @ X @ B.conj().T)
        rhs = np.kron(B.conj(), A) @ vectorize(X)
        assert np.allclose(lhs, rhs, atol=1e-12)
        assert np.allclose(unvectorize(vectorize(X), 4), X, atol=0)

    @pytest.mark.parametrize("N", [3, 5, 7])
    def test_hermitian_and_fixes_identity(self, N):
        ch = margulis_channel(PhaseSpaceContext(N))
        M = superoperator(ch)
        assert np.max(np.abs(M - M.conj().T)) < 1e-12
        v = vectorize(np.eye(N, dtype=complex))
        assert np.allclose(M @ v, v, atol=1e-12)

    @pytest.mark.parametrize("N", [3, 5, 7])
    def test_spectrum_matches_classical_walk(self, N):
        ch = margulis_channel(PhaseSpaceContext(N))
        qs = np.sort(np.linalg.eigvalsh(superoperator(ch)))
        cs = np.sort(np.linalg.eigvalsh(walk_matrix(N)))
        assert np.max(np.abs(qs - cs)) < 1e-8

    def test_superoperator_reproduces_channel(self):
        N = 5
        ch = margulis_channel(PhaseSpaceContext(N))
        M = superoperator(ch)
        rng = np.random.default_rng(22)
        rho = random_density(N, rng)
        assert np.allclose(unvectorize(M @ vectorize(rho), N),
                           apply_channel(ch, rho), atol=1e-12)

    def test_cap_guard(self):
        ch = margulis_channel(PhaseSpaceContext(11))
        with pytest.raises(ValueError, match="cap"):
            superoperator(ch)
        M = superoperator(ch, max_dim=11)
        assert M.shape == (121, 121)


class TestExpanderLambda:
    def test_equals_classical_n3(self):
        ch = margulis_channel(PhaseSpaceContext(3))
        classical = spectral_report(walk_matrix(3), modulus=3).lam
        assert expander_lambda(ch) == pytest.approx(classical, abs=1e-8)

    def test_below_bound_n7(self):
        ch = margulis_channel(PhaseSpaceContext(7))
        assert expander_lambda(ch) <= 0.8839

    def test_identity_channel_degenerate(self):
        ch = KrausChannel(3, (np.eye(3, dtype=complex),))
        assert expander_lambda(ch) == pytest.approx(1.0, abs=1e-12)


class TestMixing:
    def test_one_step_contraction_on_traceless(self):
        N = 7
        ctx = PhaseSpaceContext(N)
        ch = margulis_channel(ctx)
        lam = spectral_report(walk_matrix(N), modulus=N).lam
        rng = np.random.default_rng(23)
        for _ in range(20):
            X = random_hermitian(N, rng)
            X -= np.trace(X) / N * np.eye(N)
            assert (np.linalg.norm(apply_channel(ch, X))
                    <= lam * np.linalg.norm(X) + 1e-10)

    def test_iterates_decay_at_rate_lambda(self):
        N = 7
        ctx = PhaseSpaceContext(N)
        ch = margulis_channel(ctx)
        lam = spectral_report(walk_matrix(N), modulus=N).lam
        rng = np.random.default_rng(24)
        rho = random_density(N, rng)
        d0 = np.linalg.norm(rho - np.eye(N) / N)
        cur = rho
        for n in range(1, 51):
            cur = apply_channel(ch, cur)
            assert np.linalg.norm(cur - np.eye(N) / N) <= 1.01 * lam**n * d0

    def test_maximally_mixed_fixed_at_every_iterate(self):
        N = 5
        ch = margulis_channel(PhaseSpaceContext(N))
        cur = np.eye(N) / N
        for _ in range(10):
            cur = apply_channel(ch, cur)
            assert np.allclose(cur, np.eye(N) / N, atol=1e-13)


class TestIntertwining:
    def test_report_n7(self):
        report = verify_wigner_intertwining(PhaseSpaceContext(7), trials=20, seed=42)
        assert isinstance(report, IntertwiningReport)
        assert report.max_table_deviation < 1e-10
        assert report.max_eigen_residual < 1e-8
        assert report.passed
        d = report.as_dict()
        assert d["passed"] is True and d["modulus"] == 7

    def test_uniform_eigenvector_lifts_to_maximally_mixed(self):
        N = 5
        ctx = PhaseSpaceContext(N)
        op = inverse_wigner(ctx, GridDist.uniform(N))
        assert np.allclose(op, np.eye(N) / N, atol=1e-12)
        ch = margulis_channel(ctx)
        assert np.allclose(apply_channel(ch, op), op, atol=1e-13)

    def test_second_eigenpair_lifts_n5(self):
        N = 5
        ctx = PhaseSpaceContext(N)
        ch = margulis_channel(ctx)
        M = walk_matrix(N)
        eigvals, eigvecs = np.linalg.eigh(M)
        order = np.argsort(np.abs(eigvals))[::-1]
        lam2, f2 = eigvals[order[1]], eigvecs[:, order[1]]
        op = inverse_wigner(ctx, GridDist.from_flat(N, f2))
        assert np.linalg.norm(apply_channel(ch, op) - lam2 * op) < 1e-8

    @pytest.mark.parametrize("N", [3, 5, 7])
    def test_wigner_vec_intertwines_channel_and_walk(self, N):
        ctx = PhaseSpaceContext(N)
        ch = margulis_channel(ctx)
        M = walk_matrix(N)
        rng = np.random.default_rng(25)
        for _ in range(5):
            rho = random_hermitian(N, rng)
            left = wigner(ctx, apply_channel(ch, rho)).flatten()
            right = M @ wigner(ctx, rho).flatten()
            assert np.max(np.abs(left - right)) < 1e-12

    def test_random_hermitian_matches_walk_table(self):
        N = 9
        ctx = PhaseSpaceContext(N)
        ch = margulis_channel(ctx)
        rng = np.random.default_rng(26)
        rho = random_hermitian(N, rng)
        assert np.allclose(wigner(ctx, apply_channel(ch, rho)).values,
                           walk_step(wigner(ctx, rho)).values, atol=1e-11)


class TestKrausValidation:
    def test_non_unitary_member_rejected(self):
        with pytest.raises(ValueError, match="unitary"):
            KrausChannel(3, (0.5 * np.eye(3, dtype=complex),))
