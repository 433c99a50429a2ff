"""Sampled law checks: bipermutative structure of the concrete categories,
coproduct laws, embedding naturality, duality, the stochastic bridge, and
the builtin lift targets.

These are sampling-based with explicit seeds, not proofs; each check
reports its worst observed residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as al
from . import completion as co
from . import linalg as la
from . import sampling as sp
from .normalform import choi_distance

_LAW_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    samples: int
    max_residual: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "passed": self.passed,
        }


def _result(name: str, samples: int, residual: float, tol: float = _LAW_TOL) -> CheckResult:
    return CheckResult(name=name, samples=samples, max_residual=float(residual), passed=residual <= tol)


def check_pure_interchange(seed: int, samples: int = 25) -> CheckResult:
    """Associativity of kron / direct_sum, exact right distribution, and
    the gamma'-derivation plus naturality of the distributivity permutation."""
    rng = sp.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        dims = [int(rng.integers(1, 5)) for _ in range(3)]
        mats = [sp.random_complex(rng, d, d) for d in dims]
        a, b, c = mats
        worst = max(worst, la.frob(la.kron(la.kron(a, b), c) - la.kron(a, la.kron(b, c))))
        worst = max(
            worst,
            la.frob(la.direct_sum(la.direct_sum(a, b), c) - la.direct_sum(a, la.direct_sum(b, c))),
        )
        worst = max(
            worst,
            la.frob(la.kron(la.direct_sum(a, b), c) - la.direct_sum(la.kron(a, c), la.kron(b, c))),
        )
        da, db, dc = dims
        perm = al.delta_sharp_pure(da, db, dc)
        derived = la.direct_sum(al.gamma_times_pure(db, da), al.gamma_times_pure(dc, da)) @ al.gamma_times_pure(da, db + dc)
        worst = max(worst, la.frob(perm - derived))
        lhs = la.direct_sum(la.kron(a, b), la.kron(a, c)) @ perm
        rhs = perm @ la.kron(a, la.direct_sum(b, c))
        worst = max(worst, la.frob(lhs - rhs))
    return _result("pure-interchange", samples, worst)


def check_channel_monoidal(seed: int, samples: int = 8) -> CheckResult:
    """Strict associativity of (+) and (x) on channels, and the symmetry
    naturality squares."""
    rng = sp.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        chans = [
            sp.random_cptp(rng, (int(rng.integers(1, 3)),), (int(rng.integers(1, 3)),))
            for _ in range(3)
        ]
        f, g, h = chans
        worst = max(
            worst, choi_distance(al.oplus(al.oplus(f, g), h), al.oplus(f, al.oplus(g, h)))
        )
        worst = max(
            worst, choi_distance(al.otimes(al.otimes(f, g), h), al.otimes(f, al.otimes(g, h)))
        )
        swap_dom = al.gamma_times_channel(f.dom, g.dom)
        swap_cod = al.gamma_times_channel(f.cod, g.cod)
        worst = max(
            worst,
            choi_distance(
                al.compose(swap_cod, al.otimes(f, g)), al.compose(al.otimes(g, f), swap_dom)
            ),
        )
        bswap_dom = al.gamma_plus_channel(f.dom, g.dom)
        bswap_cod = al.gamma_plus_channel(f.cod, g.cod)
        worst = max(
            worst,
            choi_distance(
                al.compose(bswap_cod, al.oplus(f, g)), al.compose(al.oplus(g, f), bswap_dom)
            ),
        )
    return _result("channel-monoidal", samples, worst)


def check_coproduct(seed: int, samples: int = 10) -> CheckResult:
    """Copair restricted along the injections gives back the components,
    the copair of the injections is the identity, and the through-the-
    terminal construction agrees with direct copairing."""
    rng = sp.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        cod = (int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        f = sp.random_cptp(rng, (int(rng.integers(1, 3)),), cod)
        g = sp.random_cptp(rng, (int(rng.integers(1, 3)),), cod)
        both = al.copair(f, g)
        dom = both.dom
        worst = max(worst, choi_distance(al.compose(both, al.injection_channel(dom, 0)), f))
        worst = max(worst, choi_distance(both, al.copair_via_terminal(f, g)))
        inj = al.copair(*(al.injection_channel(dom, i) for i in range(len(dom))))
        worst = max(worst, choi_distance(inj, al.identity_channel(dom)))
    return _result("coproduct", samples, worst)


def check_embedding(seed: int, samples: int = 15) -> CheckResult:
    """Functoriality and tensor strictness of the embedding, naturality of
    the measurement comparison, and global phase collapse."""
    rng = sp.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(n, 5))
        k = int(rng.integers(m, 6))
        v = sp.random_isometry(rng, m, n)
        w = sp.random_isometry(rng, k, m)
        worst = max(
            worst,
            choi_distance(al.compose(al.embed_E(w), al.embed_E(v)), al.embed_E(w @ v)),
        )
        v2 = sp.random_isometry(rng, int(rng.integers(1, 4)) + 1, 1)
        worst = max(
            worst,
            choi_distance(al.otimes(al.embed_E(v), al.embed_E(v2)), al.embed_E(la.kron(v, v2))),
        )
        worst = max(
            worst,
            choi_distance(
                al.compose(al.measure_phi((m, k)), al.embed_E(la.direct_sum(v, w))),
                al.compose(al.oplus(al.embed_E(v), al.embed_E(w)), al.measure_phi((n, m))),
            ),
        )
        theta = float(rng.uniform(0, 2 * np.pi))
        worst = max(
            worst, choi_distance(al.embed_E(np.exp(1j * theta) * v), al.embed_E(v))
        )
    return _result("embedding", samples, worst)


def check_closure(seed: int, samples: int = 10) -> CheckResult:
    """compose/oplus/otimes of valid channels classify as CP and TP."""
    rng = sp.rng_for(seed)
    bad = 0
    for _ in range(samples):
        a = (int(rng.integers(1, 4)),)
        b = (int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        c = (int(rng.integers(1, 4)),)
        f = sp.random_cptp(rng, a, b)
        g = sp.random_cptp(rng, b, c)
        for h in (al.compose(g, f), al.oplus(f, g), al.otimes(f, g)):
            flags = al.classify(h)
            if not (flags.cp and flags.tp):
                bad += 1
    return _result("cptp-closure", samples, float(bad), tol=0.0)


def check_duality(seed: int, samples: int = 10) -> CheckResult:
    """dualize is an exact involution and swaps trace preservation with
    unitality while fixing complete positivity."""
    rng = sp.rng_for(seed)
    worst = 0.0
    bad = 0
    for _ in range(samples):
        f = sp.random_cptp(rng, (int(rng.integers(1, 4)),), (int(rng.integers(1, 3)), 2))
        d = al.dualize(f)
        dd = al.dualize(d)
        worst = max(worst, choi_distance(dd, f))
        fl, dl = al.classify(f), al.classify(d)
        if not (dl.cp == fl.cp and dl.unital == fl.tp and dl.tp == fl.unital):
            bad += 1
    return _result("duality", samples, max(worst, float(bad)))


def check_stochastic(seed: int, samples: int = 10) -> CheckResult:
    """Channels between all-ones objects are exactly the column-stochastic
    matrices, both ways."""
    rng = sp.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        k, p = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        raw = rng.uniform(0.05, 1.0, size=(p, k))
        s = raw / raw.sum(axis=0, keepdims=True)
        ch = al.channel_from_stochastic(s)
        worst = max(worst, float(np.abs(al.stochastic_from_channel(ch) - s).max()))
        ch2 = sp.random_cptp(rng, (1,) * k, (1,) * p)
        s2 = al.stochastic_from_channel(ch2)
        if s2.min() < -1e-12:
            worst = max(worst, -float(s2.min()))
        worst = max(worst, float(np.abs(s2.sum(axis=0) - 1.0).max()))
    return _result("stochastic-bridge", samples, worst)


def check_targets(seed: int, samples: int = 6) -> CheckResult:
    """Triangle identities of the builtin lift targets on random isometries
    and channels."""
    rng = sp.rng_for(seed)
    worst = 0.0
    F = co.builtin_target("cptp")
    Fi = co.builtin_target("isometry")
    for _ in range(samples):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(n, 5))
        v = sp.random_isometry(rng, m, n)
        lifted = co.lift_isometry(Fi, v)
        _, d = Fi.target.equal(lifted, v)
        worst = max(worst, d)
        g = sp.random_cptp(rng, (n,), (int(rng.integers(1, 3)),))
        _, d = F.target.equal(co.lift_channel(F, g), g, tol=1e-8)
        worst = max(worst, d)
        _, d = F.target.equal(co.lift_channel(F, al.embed_E(v)), al.embed_E(v), tol=1e-8)
        worst = max(worst, d)
    return _result("lift-triangles", samples, worst, tol=1e-8)


def check_isometry_completion(seed: int, samples: int = 50) -> CheckResult:
    """Factorization residuals and recovered inner witnesses."""
    from .normalform import factor_isometry, iota, isometry_witness

    rng = sp.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        n = int(rng.integers(2, 8))
        m = int(rng.integers(1, n))
        v = sp.random_isometry(rng, n, m)
        fac = factor_isometry(v)
        worst = max(worst, la.frob(fac.u @ iota(m, n) - v))
        w0 = sp.random_unitary(rng, n - m)
        u2 = fac.u @ la.direct_sum(la.identity(m), w0)
        w = isometry_witness(fac.u, u2, m)
        worst = max(worst, la.frob(fac.u @ la.direct_sum(la.identity(m), w) - u2))
    return _result("isometry-completion", samples, worst, tol=1e-8)


def check_choi_kraus(seed: int, samples: int = 25) -> CheckResult:
    """Round trips through the Kraus presentation; the transpose map must
    classify as not completely positive."""
    rng = sp.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        c = sp.random_cptp(rng, (int(rng.integers(1, 4)),), (int(rng.integers(1, 3)), 2))
        back = al.channel_from_kraus(c.dom, c.cod, al.kraus_from_choi(c))
        worst = max(worst, choi_distance(c, back))
    transpose = al.Channel((2,), (2,), [[al.gamma_times_pure(2, 2)]], validate=False)
    if al.classify(transpose).cp:
        worst = max(worst, 1.0)
    return _result("choi-kraus", samples, worst)


def check_bratteli(seed: int, samples: int = 25) -> CheckResult:
    """Construct-then-recover for homomorphism normal forms."""
    from .normalform import bratteli_form, eval_bratteli

    rng = sp.rng_for(seed)
    worst = 0.0
    done = 0
    while done < samples:
        mbar = tuple(int(rng.integers(1, 4)) for _ in range(int(rng.integers(1, 3))))
        from .topology import bratteli_tuples

        options = [t for t in bratteli_tuples(int(rng.integers(1, 9)), mbar)]
        if not options:
            continue
        sbar = options[int(rng.integers(0, len(options)))]
        if sum(s * m for s, m in zip(sbar, mbar)) == 0:
            continue
        f, _, _ = sp.random_star_hom(rng, mbar, sum(s * m for s, m in zip(sbar, mbar)), sbar=sbar)
        bf = bratteli_form(f)
        if bf.sbar != sbar:
            worst = max(worst, 1.0)
        worst = max(worst, choi_distance(eval_bratteli(bf), f))
        done += 1
    return _result("bratteli-recovery", samples, worst, tol=1e-8)


def check_dilation_equivalence(seed: int, samples: int = 10) -> CheckResult:
    """Two independent dilations of one map admit relating witnesses."""
    from .normalform import dilation_from_kraus, equivalence_witness, stinespring

    rng = sp.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        mbar = tuple(int(rng.integers(1, 3)) for _ in range(int(rng.integers(1, 3))))
        h = sp.random_cpu(rng, mbar, (int(rng.integers(1, 4)),))
        f1 = stinespring(h)
        kraus = al.kraus_from_choi(h)[0]
        f2 = dilation_from_kraus([list(reversed(ops)) for ops in kraus], h.cod[0], h.dom, al.HEISENBERG)
        p, qs = equivalence_witness(f1, f2)
        rebuilt = (
            la.direct_sum(la.identity(f1.p), p)
            @ f1.u
            @ la.direct_sum_all(la.kron(q, la.identity(m)) for q, m in zip(qs, f1.mbar))
        )
        worst = max(worst, la.frob(rebuilt - f2.u))
    return _result("dilation-equivalence", samples, worst, tol=1e-7)


def check_separation(seed: int) -> CheckResult:
    """Distinct-component homomorphisms separate by at least one; matching
    components admit an intertwiner."""
    from .normalform import bratteli_form
    from .topology import bratteli_tuples, distance, opnorm_lower_bound, separation_witness

    rng = sp.rng_for(seed)
    worst = 0.0
    pairs = 0
    for mbar, n in [((1, 1), 2), ((1, 2), 4), ((2,), 4)]:
        tuples = bratteli_tuples(n, mbar)
        reps = {s: sp.random_star_hom(rng, mbar, n, sbar=s)[0] for s in tuples}
        for i, s1 in enumerate(tuples):
            for s2 in tuples[i + 1 :]:
                el, _ = separation_witness(reps[s1], reps[s2])
                bound = opnorm_lower_bound(reps[s1], reps[s2], [el])
                worst = max(worst, max(0.0, 1.0 - 1e-9 - bound))
                pairs += 1
            g, _, _ = sp.random_star_hom(rng, mbar, n, sbar=s1)
            w = bratteli_form(reps[s1]).u @ la.dagger(bratteli_form(g).u)
            worst = max(worst, distance(al.compose(al.conjugation_channel(w), g), reps[s1]))
            pairs += 1
    return _result("component-separation", pairs, worst, tol=1e-7)


ALL_CHECKS = (
    check_pure_interchange,
    check_channel_monoidal,
    check_coproduct,
    check_embedding,
    check_closure,
    check_duality,
    check_stochastic,
    check_targets,
    check_isometry_completion,
    check_choi_kraus,
    check_bratteli,
    check_dilation_equivalence,
    check_separation,
)


def run_all(seed: int = 0) -> dict:
    results = [check(seed) for check in ALL_CHECKS]
    return {
        "seed": seed,
        "passed": all(r.passed for r in results),
        "checks": [r.to_json() for r in results],
    }
