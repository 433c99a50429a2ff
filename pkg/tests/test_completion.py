"""Universal lifts: triangle identities, strictness, well-definedness
across dilation choices, builtin targets."""

from __future__ import annotations

import numpy as np
import pytest

from qbiperm import algebra as al
from qbiperm import completion as co
from qbiperm import linalg as la
from qbiperm import normalform as nf
from qbiperm import sampling as sp
from qbiperm.errors import NotCPTP, NotStarHom, ShapeError

KET0 = np.array([[1.0], [0.0]], dtype=complex)
KET1 = np.array([[0.0], [1.0]], dtype=complex)


def amplitude_damping(gamma: float = 0.5) -> al.Channel:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return al.channel_from_kraus((2,), (2,), [[[k0, k1]]])


class TestLiftIsometry:
    def test_unitary_maps_to_itself(self):
        rng = sp.rng_for(1)
        u = sp.random_unitary(rng, 3)
        F = co.builtin_target("isometry")
        assert la.frob(co.lift_isometry(F, u) - u) == 0.0

    def test_inclusion_triangle(self):
        rng = sp.rng_for(2)
        F = co.builtin_target("isometry")
        for _ in range(50):
            n = int(rng.integers(1, 5))
            m = int(rng.integers(1, n + 1))
            v = sp.random_isometry(rng, n, m)
            assert la.frob(co.lift_isometry(F, v) - v) <= 1e-9

    def test_conjugation_functor(self):
        rng = sp.rng_for(3)
        F = co.builtin_target("isometry_conjugate")
        v = sp.random_isometry(rng, 4, 2)
        assert la.frob(co.lift_isometry(F, v) - v.conj()) <= 1e-9


class TestLiftStarhom:
    def test_unitary_conjugation(self):
        rng = sp.rng_for(4)
        u = sp.random_unitary(rng, 3)
        F = co.builtin_target("cptp")
        lifted = co.lift_starhom(F, al.conjugation_channel(u))
        want = al.dualize(al.conjugation_channel(u))  # the schrodinger counterpart
        eq, dist = F.target.equal(lifted, want, tol=1e-8)
        assert eq, dist

    def test_diagonal_embedding_lifts_to_measurement(self):
        diag = sp.star_hom_channel((1, 1), (1, 1), la.identity(2))
        F = co.builtin_target("cptp")
        lifted = co.lift_starhom(F, diag)
        eq, dist = F.target.equal(lifted, al.measure_phi((1, 1)), tol=1e-8)
        assert eq, dist

    def test_conjugate_target(self):
        rng = sp.rng_for(5)
        f, _, _ = sp.random_star_hom(rng, (2,), 4)
        F = co.builtin_target("cptp")
        Fc = co.builtin_target("cptp_conjugate")
        plain = co.lift_starhom(F, f)
        conj = co.lift_starhom(Fc, f)
        eq, dist = F.target.equal(conj, al.conjugate_channel(plain), tol=1e-8)
        assert eq, dist

    def test_rejects_non_star_hom(self):
        F = co.builtin_target("cptp")
        with pytest.raises(NotStarHom):
            co.lift_starhom(F, al.dualize(amplitude_damping()))

    def test_multi_block_codomain(self):
        diag = sp.star_hom_channel((1, 1), (1, 1), la.identity(2))
        f = al.dualize(al.oplus(al.dualize(diag), al.measure_phi((1, 1))))
        F = co.builtin_target("cptp")
        lifted = co.lift_starhom(F, f)
        eq, dist = F.target.equal(lifted, al.dualize(f), tol=1e-8)
        assert eq, dist


class TestLiftChannel:
    CORPUS_TOL = 1e-8

    def corpus(self, goldens):
        from qbiperm import circuits as cc

        qft = cc.evaluate(cc.parse((goldens / "qft3.qc").read_text()))
        return {
            "identity": al.identity_channel((2,)),
            "measurement": al.measure_phi((1, 1)),
            "partial_trace": al.partial_trace_channel(2, 2),
            "amplitude_damping": amplitude_damping(),
            "classical_encoding": al.copair(al.embed_E(KET0), al.embed_E(KET1)),
            "fourier": al.embed_E(qft),
        }

    def test_corpus_triangle(self, goldens):
        F = co.builtin_target("cptp")
        for name, channel in self.corpus(goldens).items():
            lifted = co.lift_channel(F, channel)
            eq, dist = F.target.equal(lifted, channel, tol=self.CORPUS_TOL)
            assert eq, (name, dist)

    def test_pure_triangle(self):
        rng = sp.rng_for(6)
        F = co.builtin_target("cptp")
        v = sp.random_isometry(rng, 4, 2)
        lifted = co.lift_channel(F, al.embed_E(v))
        eq, dist = F.target.equal(lifted, al.embed_E(v), tol=1e-8)
        assert eq, dist

    def test_conjugate_target_on_real_choi(self):
        F = co.builtin_target("cptp_conjugate")
        ad = amplitude_damping()
        lifted = co.lift_channel(F, ad)
        eq, dist = F.target.equal(lifted, ad, tol=1e-8)  # real Choi: conjugation fixes it
        assert eq, dist

    def test_strictness(self):
        rng = sp.rng_for(7)
        F = co.builtin_target("cptp")
        for _ in range(15):
            a = sp.random_cptp(rng, (int(rng.integers(1, 3)),), (int(rng.integers(1, 3)),))
            b = sp.random_cptp(rng, (1, int(rng.integers(1, 3))), (int(rng.integers(1, 3)),))
            lo = co.lift_channel(F, al.oplus(a, b))
            ro = F.target.oplus(co.lift_channel(F, a), co.lift_channel(F, b))
            eq, dist = F.target.equal(lo, ro, tol=1e-8)
            assert eq, dist
            lt = co.lift_channel(F, al.otimes(a, b))
            rt = F.target.otimes(co.lift_channel(F, a), co.lift_channel(F, b))
            eq, dist = F.target.equal(lt, rt, tol=1e-8)
            assert eq, dist

    def test_well_definedness_across_dilations(self):
        rng = sp.rng_for(8)
        F = co.builtin_target("cptp")

        def perturbed_form(rng, form):
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

        for _ in range(10):
            g = sp.random_cptp(rng, (int(rng.integers(1, 3)), 2), (int(rng.integers(1, 3)),))
            forms = nf.stinespring_components(g)
            alt = [perturbed_form(rng, f) for f in forms]
            l1 = co.lift_channel_from_forms(F, forms)
            l2 = co.lift_channel_from_forms(F, alt)
            eq, dist = F.target.equal(l1, l2, tol=1e-8)
            assert eq, dist
            eq, dist = F.target.equal(l1, g, tol=1e-8)
            assert eq, dist

    def test_initial_map_lifts_to_initial(self):
        F = co.builtin_target("cptp")
        lifted = co.lift_channel(F, al.initial_channel((2,)))
        eq, dist = F.target.equal(lifted, al.initial_channel((2,)))
        assert eq, dist

    def test_rejects_heisenberg(self):
        F = co.builtin_target("cptp")
        with pytest.raises(NotCPTP):
            co.lift_channel(F, al.dualize(amplitude_damping()))


class TestTargets:
    def test_terminal_category(self):
        F = co.builtin_target("terminal_category")
        assert co.lift_channel(F, amplitude_damping()) == co.TerminalTarget.MOR
        assert co.lift_isometry(F, la.identity(2)) == co.TerminalTarget.MOR

    def test_unknown_target(self):
        with pytest.raises(ShapeError):
            co.builtin_target("nope")

    def test_isometry_target_has_no_coproducts(self):
        t = co.IsometryTarget()
        with pytest.raises(ShapeError):
            t.copair([la.identity(1)])
