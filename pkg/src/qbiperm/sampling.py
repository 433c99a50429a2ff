"""Seeded random generators used by the property suites and the CLI selftest.

Everything takes an explicit ``numpy.random.Generator`` so identical seeds
produce identical draws.
"""

from __future__ import annotations

import numpy as np

from . import algebra as al
from . import linalg as la


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_complex(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish unitary: QR of a Ginibre matrix with the phase fix."""
    if n == 0:
        return la.zeros(0, 0)
    q, r = np.linalg.qr(random_complex(rng, n, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_isometry(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    return random_unitary(rng, n)[:, :m]


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = random_complex(rng, n, n)
    return (a + la.dagger(a)) / 2


def random_element(rng: np.random.Generator, dims, normalized: bool = True) -> list[np.ndarray]:
    """A random algebra element, optionally scaled to spectral norm 1."""
    el = [random_hermitian(rng, n) for n in dims]
    if normalized:
        nrm = al.element_norm(el)
        if nrm > 0:
            el = [x / nrm for x in el]
    return el


def random_cptp(rng: np.random.Generator, dom, cod, max_env: int = 2) -> al.Channel:
    """A random channel, one Stinespring-style column per input block.

    Each input block is routed through a random isometry into the output
    blocks tensored with small environments, measured into blocks, and the
    environments are traced out; the columns are copaired.
    """
    dom = al.check_object(dom)
    cod = al.check_object(cod)
    if not dom:
        return al.initial_channel(cod)
    columns = []
    for n in dom:
        env = [int(rng.integers(1, max_env + 1)) for _ in cod]
        while sum(m * e for m, e in zip(cod, env)) < n:
            env[int(rng.integers(0, len(cod)))] += 1
        parts = tuple(e * m for m, e in zip(cod, env))
        v = random_isometry(rng, sum(parts), n)
        stage = al.compose(al.measure_phi(parts), al.embed_E(v))
        discards = None
        for m, e in zip(cod, env):
            tr = al.partial_trace_channel(e, m)
            discards = tr if discards is None else al.oplus(discards, tr)
        columns.append(al.compose(discards, stage))
    return al.copair(*columns)


def random_cpu(rng: np.random.Generator, dom, cod, max_env: int = 2) -> al.Channel:
    """A random completely positive unital map (Heisenberg picture)."""
    return al.dualize(random_cptp(rng, cod, dom, max_env=max_env))


def random_bratteli_tuple(rng: np.random.Generator, mbar, n: int) -> tuple[int, ...]:
    from .topology import bratteli_tuples  # local import to avoid a cycle

    tuples = bratteli_tuples(n, mbar)
    if not tuples:
        raise ValueError(f"no multiplicity tuples for {mbar} -> [{n}]")
    return tuples[int(rng.integers(0, len(tuples)))]


def star_hom_channel(mbar, sbar, u) -> al.Channel:
    """The unital *-homomorphism (A_1,..,A_k) -> u (diag of s_i copies of A_i) u^*.

    Multiplicity factors sit on the OUTER side: block i of the diagonal
    algebra is I_{s_i} (x) A_i, i.e. s_i consecutive copies of A_i.
    """
    mbar = al.check_object(mbar)
    u = la.as_matrix(u)
    n = u.shape[0]
    if sum(s * m for s, m in zip(sbar, mbar)) != n:
        raise la.ShapeError(f"multiplicities {sbar} do not fill dimension {n}")
    kraus_row = []
    off = 0
    for m, s in zip(mbar, sbar):
        ops = []
        for t in range(s):
            ops.append(u[:, off + t * m : off + (t + 1) * m])
        kraus_row.append(ops)
        off += s * m
    return al.channel_from_kraus(mbar, (n,), [kraus_row], al.HEISENBERG)


def random_star_hom(
    rng: np.random.Generator, mbar, n: int, sbar=None
) -> tuple[al.Channel, tuple[int, ...], np.ndarray]:
    """A random unital *-homomorphism into [n]; returns (channel, sbar, u)."""
    if sbar is None:
        sbar = random_bratteli_tuple(rng, mbar, n)
    u = random_unitary(rng, n)
    return star_hom_channel(mbar, sbar, u), tuple(sbar), u
