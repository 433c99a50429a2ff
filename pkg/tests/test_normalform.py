"""Factorizations and dilations: isometry completion with uniqueness
witnesses, Bratteli recovery, Stinespring round trips, equivalence of
normal forms."""

from __future__ import annotations

import numpy as np
import pytest

from qbiperm import algebra as al
from qbiperm import linalg as la
from qbiperm import normalform as nf
from qbiperm import sampling as sp
from qbiperm.errors import (
    NotSingleBlockCodomain,
    NotStarHom,
    WitnessInfeasible,
)

KET0 = np.array([[1.0], [0.0]], dtype=complex)


def amplitude_damping(gamma: float = 0.5) -> al.Channel:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return al.channel_from_kraus((2,), (2,), [[[k0, k1]]])


def perturbed_form(rng, form: nf.NormalForm) -> nf.NormalForm:
    """A different unitary presenting the same map: stabilizer action."""
    qs = [sp.random_unitary(rng, s) for s in form.sbar]
    hidden = sp.random_unitary(rng, form.q - form.p)
    u_new = (
        la.direct_sum(la.identity(form.p), hidden)
        @ form.u
        @ la.direct_sum_all(la.kron(q, la.identity(m)) for q, m in zip(qs, form.mbar))
    )
    return nf.NormalForm(
        q=form.q, p=form.p, mbar=form.mbar, sbar=form.sbar, u=u_new, picture=form.picture
    )


class TestFactorIsometry:
    def test_unitary_input(self):
        rng = sp.rng_for(1)
        u = sp.random_unitary(rng, 4)
        fac = nf.factor_isometry(u)
        assert fac.m == 4 and fac.p == 0
        assert la.frob(fac.u - u) == 0.0

    def test_basis_vector(self):
        fac = nf.factor_isometry(KET0)
        assert (fac.m, fac.p) == (1, 1)
        assert np.array_equal(fac.u, la.identity(2))

    def test_random_residuals(self):
        rng = sp.rng_for(2)
        for _ in range(200):
            n = int(rng.integers(1, 9))
            m = int(rng.integers(1, n + 1))
            v = sp.random_isometry(rng, n, m)
            fac = nf.factor_isometry(v)
            assert la.frob(fac.u @ nf.iota(m, n) - v) <= 1e-9


class TestIsometryWitness:
    def test_same_unitary(self):
        rng = sp.rng_for(3)
        u = sp.random_unitary(rng, 5)
        w = nf.isometry_witness(u, u, 3)
        assert la.frob(w - la.identity(2)) < 1e-10

    def test_construct_then_recover(self):
        rng = sp.rng_for(4)
        for _ in range(50):
            n = int(rng.integers(2, 8))
            m = int(rng.integers(1, n))
            u1 = sp.random_unitary(rng, n)
            w0 = sp.random_unitary(rng, n - m)
            u2 = u1 @ la.direct_sum(la.identity(m), w0)
            w = nf.isometry_witness(u1, u2, m)
            assert la.frob(u1 @ la.direct_sum(la.identity(m), w) - u2) <= 1e-8
            assert la.is_unitary(w, tol=1e-8)

    def test_phase_ratio_2x2(self):
        h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        phase = np.exp(0.321j)
        u2 = h @ la.direct_sum(la.identity(1), [[phase]])
        w = nf.isometry_witness(h, u2, 1)
        assert abs(w[0, 0] - phase) < 1e-12

    def test_infeasible(self):
        rng = sp.rng_for(5)
        u1, u2 = sp.random_unitary(rng, 3), sp.random_unitary(rng, 3)
        with pytest.raises(WitnessInfeasible):
            nf.isometry_witness(u1, u2, 2)


class TestBratteli:
    def test_unitary_conjugation(self):
        rng = sp.rng_for(6)
        u = sp.random_unitary(rng, 4)
        bf = nf.bratteli_form(al.conjugation_channel(u))
        assert bf.sbar == (1,)
        assert nf.choi_distance(nf.eval_bratteli(bf), al.conjugation_channel(u)) <= 1e-8

    def test_diagonal_embedding(self):
        diag = sp.star_hom_channel((1, 1), (1, 1), la.identity(2))
        bf = nf.bratteli_form(diag)
        assert bf.sbar == (1, 1)
        assert np.allclose(bf.u, la.identity(2))

    def test_construct_then_recover(self):
        rng = sp.rng_for(7)
        for _ in range(40):
            k = int(rng.integers(1, 4))
            mbar = tuple(int(rng.integers(1, 4)) for _ in range(k))
            budget = 12
            sbar = []
            for m in mbar[:-1]:
                sbar.append(int(rng.integers(0, budget // m + 1)))
                budget -= sbar[-1] * m
            sbar.append(budget // mbar[-1])
            n = sum(s * m for s, m in zip(sbar, mbar))
            if n == 0:
                continue
            f, sbar_used, _ = sp.random_star_hom(rng, mbar, n, sbar=tuple(sbar))
            bf = nf.bratteli_form(f)
            assert bf.sbar == tuple(sbar)
            assert nf.choi_distance(nf.eval_bratteli(bf), f) <= 1e-8

    def test_rejects_non_star_hom(self):
        with pytest.raises(NotStarHom):
            nf.bratteli_form(al.dualize(amplitude_damping()))

    def test_rejects_multi_block_codomain(self):
        diag = sp.star_hom_channel((1, 1), (1, 1), la.identity(2))
        two = al.dualize(al.oplus(al.dualize(diag), al.dualize(diag)))
        with pytest.raises(NotSingleBlockCodomain):
            nf.bratteli_form(two)

    def test_sbar_stable_under_presentation(self):
        rng = sp.rng_for(8)
        mbar, n = (1, 2), 5
        f, sbar, u = sp.random_star_hom(rng, mbar, n)
        v = sp.random_unitary(rng, n)
        g = al.compose(al.conjugation_channel(v), f)
        assert nf.bratteli_form(g).sbar == nf.bratteli_form(f).sbar == sbar


class TestStinespring:
    def test_isometry_conjugation(self):
        rng = sp.rng_for(9)
        v = sp.random_isometry(rng, 4, 2)
        heis = al.dualize(al.embed_E(v))
        form = nf.stinespring(heis)
        assert form.sbar == (1,)
        assert form.q == form.mbar[0]
        assert nf.choi_distance(nf.eval_normal_form(form), heis) <= 1e-8

    def test_amplitude_damping_dual(self):
        form = nf.stinespring(al.dualize(amplitude_damping()))
        assert form.q == 4 and form.sbar == (2,) and form.mbar == (2,)

    def test_measure_dual_components(self):
        meas = al.measure_phi((1, 1))
        forms = nf.stinespring_components(al.dualize(meas))
        assert len(forms) == 1  # codomain of the dual is [2]
        assert forms[0].q == 2 and forms[0].sbar == (1, 1)

    def test_schrodinger_convenience(self):
        ad = amplitude_damping()
        form = nf.stinespring(ad)
        assert form.picture == al.SCHRODINGER
        assert nf.choi_distance(nf.eval_normal_form(form), ad) <= 1e-8

    def test_round_trip_random_cpu(self):
        rng = sp.rng_for(10)
        for _ in range(100):
            k = int(rng.integers(1, 3))
            mbar = tuple(int(rng.integers(1, 4)) for _ in range(k))
            p = int(rng.integers(1, 4))
            h = sp.random_cpu(rng, mbar, (p,))
            form = nf.stinespring(h)
            assert nf.choi_distance(nf.eval_normal_form(form), h) <= 1e-8
            ranks = [len(ops) for ops in al.kraus_from_choi(h)[0]]
            assert form.q == sum(r * m for r, m in zip(ranks, mbar))
            assert form.q <= sum(m * m for m in mbar) * p

    def test_minimality_against_padding(self):
        rng = sp.rng_for(11)
        h = sp.random_cpu(rng, (2,), (2,))
        form = nf.stinespring(h)
        kraus = al.kraus_from_choi(h)[0][0]
        padded = kraus + [la.zeros(2, 2) + 1e-30]
        fat = nf.dilation_from_kraus([padded], 2, (2,), al.HEISENBERG)
        assert fat.q >= form.q

    def test_multi_block_codomain_distribution(self):
        rng = sp.rng_for(12)
        h = sp.random_cpu(rng, (2,), (1, 2))
        forms = nf.stinespring_components(h)
        assert len(forms) == 2
        assert forms[0].p == 1 and forms[1].p == 2


class TestEvalNormalForm:
    def test_pure_corner(self):
        form = nf.NormalForm(q=2, p=1, mbar=(2,), sbar=(1,), u=la.identity(2), picture=al.HEISENBERG)
        ch = nf.eval_normal_form(form)
        out = al.apply_channel(ch, [np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)])[0]
        assert out.shape == (1, 1) and out[0, 0] == 1.0

    def test_unitary_case(self):
        rng = sp.rng_for(13)
        u = sp.random_unitary(rng, 3)
        form = nf.NormalForm(q=3, p=3, mbar=(3,), sbar=(1,), u=u, picture=al.HEISENBERG)
        got = nf.eval_normal_form(form)
        want = al.conjugation_channel(u)  # trivial corner: A -> u A u^*
        assert nf.choi_distance(got, want) < 1e-10


class TestChannelEqual:
    def test_reflexive(self):
        ad = amplitude_damping()
        eq, dist = nf.channel_equal(ad, ad)
        assert eq and dist == 0.0

    def test_phase_collapse(self):
        rng = sp.rng_for(14)
        v = sp.random_isometry(rng, 3, 2)
        eq, dist = nf.channel_equal(al.embed_E(v), al.embed_E(np.exp(0.9j) * v), tol=1e-12)
        assert eq, dist

    def test_identity_vs_bitflip(self):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        eq, dist = nf.channel_equal(al.identity_channel((2,)), al.embed_E(x))
        assert not eq
        assert abs(dist - 2.0 * np.sqrt(2.0)) < 1e-12


class TestEquivalenceWitness:
    def test_same_form(self):
        rng = sp.rng_for(15)
        h = sp.random_cpu(rng, (2,), (2,))
        form = nf.stinespring(h)
        p, qs = nf.equivalence_witness(form, form)
        assert la.frob(p - la.identity(form.q - form.p)) < 1e-8
        for q, s in zip(qs, form.sbar):
            assert la.frob(q - la.identity(s)) < 1e-8

    def test_recover_stabilizer_action(self):
        rng = sp.rng_for(16)
        for _ in range(20):
            mbar = tuple(int(rng.integers(1, 3)) for _ in range(int(rng.integers(1, 3))))
            h = sp.random_cpu(rng, mbar, (int(rng.integers(1, 4)),))
            f1 = nf.stinespring(h)
            f2 = perturbed_form(rng, f1)
            p, qs = nf.equivalence_witness(f1, f2)
            rebuilt = (
                la.direct_sum(la.identity(f1.p), p)
                @ f1.u
                @ la.direct_sum_all(la.kron(q, la.identity(m)) for q, m in zip(qs, f1.mbar))
            )
            assert la.frob(rebuilt - f2.u) <= 1e-7

    def test_independent_kraus_orderings(self):
        rng = sp.rng_for(17)
        h = sp.random_cpu(rng, (2, 1), (3,))
        f1 = nf.stinespring(h)
        kraus = al.kraus_from_choi(h)[0]
        flipped = [list(reversed(ops)) for ops in kraus]
        f2 = nf.dilation_from_kraus(flipped, 3, (2, 1), al.HEISENBERG)
        p, qs = nf.equivalence_witness(f1, f2)
        rebuilt = (
            la.direct_sum(la.identity(f1.p), p)
            @ f1.u
            @ la.direct_sum_all(la.kron(q, la.identity(m)) for q, m in zip(qs, f1.mbar))
        )
        assert la.frob(rebuilt - f2.u) <= 1e-7

    def test_mismatched_shapes_rejected(self):
        rng = sp.rng_for(18)
        h1 = sp.random_cpu(rng, (2,), (2,))
        h2 = sp.random_cpu(rng, (2,), (3,))
        with pytest.raises(WitnessInfeasible):
            nf.equivalence_witness(nf.stinespring(h1), nf.stinespring(h2))


class TestNormalFormJson:
    def test_round_trip(self):
        rng = sp.rng_for(19)
        form = nf.stinespring(sp.random_cpu(rng, (2,), (2,)))
        back = nf.normal_form_from_json(nf.normal_form_to_json(form))
        assert back.q == form.q and back.sbar == form.sbar
        assert la.frob(back.u - form.u) == 0.0
