"""Topological structure of hom-sets: superoperator transfer matrices,
computable distances, multiplicity-tuple enumeration, connected components
of *-homomorphism spaces, separation witnesses, and sampled continuity
bounds.

The canonical distance here is the spectral norm of the difference of
transfer matrices (the superoperator in the matrix-unit basis with
row-major vectorization).  It is topology-equivalent to the operator norm
sup_{|a|=1} |f(a)| by finite-dimensional norm equivalence, but not equal to
it; :func:`opnorm_lower_bound` produces certified bounds in the operator
norm sense where those are needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as al
from . import linalg as la
from .errors import NotStarHom, SameComponent, ShapeError, WitnessNotNormalized
from .normalform import bratteli_form


# ---------------------------------------------------------------------------
# transfer matrices and distances
# ---------------------------------------------------------------------------

def transfer_matrix(f: al.Channel) -> np.ndarray:
    """Matrix of the superoperator on row-major vectorized elements.

    Block structured over (output block, input block); composition of
    channels corresponds to the matrix product.
    """
    rows = al.algebra_dim(f.cod)
    cols = al.algebra_dim(f.dom)
    out = la.zeros(rows, cols)
    r0 = 0
    for j, m in enumerate(f.cod):
        c0 = 0
        for i, n in enumerate(f.dom):
            t = f.choi_tensor(j, i)
            out[r0 : r0 + m * m, c0 : c0 + n * n] = np.transpose(t, (1, 3, 0, 2)).reshape(
                m * m, n * n
            )
            c0 += n * n
        r0 += m * m
    return out


def transfer_norm(f: al.Channel) -> float:
    return la.spectral_norm(transfer_matrix(f))


def distance(f: al.Channel, g: al.Channel) -> float:
    """Spectral norm of the transfer-matrix difference."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeError("distance needs parallel channels")
    return la.spectral_norm(transfer_matrix(f) - transfer_matrix(g))


def opnorm_lower_bound(f: al.Channel, g: al.Channel, witnesses) -> float:
    """Certified lower bound on sup_{|a|=1} |(f-g)(a)| from given elements.

    Each witness must be an algebra element of the common domain with
    spectral norm 1.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeError("bound needs parallel channels")
    best = 0.0
    for el in witnesses:
        el = al.check_element(f.dom, el)
        nrm = al.element_norm(el)
        if abs(nrm - 1.0) > 1e-6:
            raise WitnessNotNormalized(f"witness has spectral norm {nrm!r}")
        fa = al.apply_channel(f, el)
        ga = al.apply_channel(g, el)
        best = max(best, al.element_norm([x - y for x, y in zip(fa, ga)]))
    return best


# ---------------------------------------------------------------------------
# multiplicity tuples and components
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BratteliTuple:
    sbar: tuple[int, ...]
    n: int
    mbar: tuple[int, ...]


@dataclass(frozen=True)
class ComponentInfo:
    tuple: BratteliTuple
    real_dimension: int
    is_point: bool


def bratteli_tuples(n: int, mbar) -> list[tuple[int, ...]]:
    """All multiplicity tuples (s_1..s_k) with sum_i s_i m_i = n,
    in descending lexicographic order."""
    mbar = al.check_object(mbar)
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int, idx: int):
        if idx == len(mbar):
            if remaining == 0:
                out.append(prefix)
            return
        m = mbar[idx]
        for s in range(remaining // m, -1, -1):
            rec(prefix + (s,), remaining - s * m, idx + 1)

    rec((), n, 0)
    return out


def component_dimension(n: int, sbar) -> int:
    """Real dimension of the unitary orbit: n^2 - sum_i s_i^2."""
    return n * n - sum(s * s for s in sbar)


def commutant_dimension(f: al.Channel) -> int:
    """Complex dimension of {x : x f(e) = f(e) x for all matrix units e}.

    Numerical oracle for the stabilizer dimension sum_i s_i^2, computed as
    the nullity of the stacked commutator system.
    """
    if len(f.cod) != 1:
        raise ShapeError("commutant oracle needs a single-block codomain")
    n = f.cod[0]
    gens = []
    for i, m in enumerate(f.dom):
        t = f.choi_tensor(0, i)
        for a in range(m):
            for b in range(m):
                gens.append(np.ascontiguousarray(t[a, :, b, :]))
    rows = [la.kron(la.identity(n), g.T) - la.kron(g, la.identity(n)) for g in gens]
    system = np.vstack(rows)
    gram = la.dagger(system) @ system
    w, _ = la.hermitian_eigensystem((gram + la.dagger(gram)) / 2)
    top = max(float(w[0]), 1.0)
    return int(np.sum(w <= la.RANK_RTOL * top))


def component_of(f: al.Channel) -> ComponentInfo:
    """Connected component data of a *-homomorphism into a single block.

    Cross-checks the dimension formula against the commutant nullity.
    """
    bf = bratteli_form(f)
    n = bf.p
    dim = component_dimension(n, bf.sbar)
    oracle = commutant_dimension(f)
    expected = sum(s * s for s in bf.sbar)
    if oracle != expected:
        raise NotStarHom(
            f"commutant dimension {oracle} disagrees with multiplicities {bf.sbar}"
        )
    return ComponentInfo(
        tuple=BratteliTuple(sbar=bf.sbar, n=n, mbar=bf.mbar),
        real_dimension=dim,
        is_point=(dim == 0),
    )


def component_atlas(mbar, n: int) -> list[ComponentInfo]:
    """All components of the space of unital *-homomorphisms mbar -> [n]."""
    infos = []
    for sbar in bratteli_tuples(n, mbar):
        dim = component_dimension(n, sbar)
        infos.append(
            ComponentInfo(
                tuple=BratteliTuple(sbar=sbar, n=n, mbar=al.check_object(mbar)),
                real_dimension=dim,
                is_point=(dim == 0),
            )
        )
    return infos


def component_info_to_json(info: ComponentInfo) -> dict:
    return {
        "sbar": list(info.tuple.sbar),
        "n": info.tuple.n,
        "mbar": list(info.tuple.mbar),
        "real_dimension": info.real_dimension,
        "is_point": info.is_point,
    }


# ---------------------------------------------------------------------------
# separation of distinct components
# ---------------------------------------------------------------------------

def separation_witness(f: al.Channel, g: al.Channel) -> tuple[list[np.ndarray], np.ndarray]:
    """An algebra element separating *-homomorphisms in different components.

    For homomorphisms with different multiplicity tuples there is a block
    whose first matrix unit maps to projections of different ranks; that
    unit (already of spectral norm 1) separates the maps by at least 1, and
    a unit vector in the range of the bigger projection and kernel of the
    smaller certifies it.  Returns (element, certificate vector).
    """
    bf_f = bratteli_form(f)
    bf_g = bratteli_form(g)
    if bf_f.mbar != bf_g.mbar or bf_f.p != bf_g.p:
        raise ShapeError("witness needs homomorphisms between the same objects")
    if bf_f.sbar == bf_g.sbar:
        raise SameComponent(f"both maps have multiplicity tuple {bf_f.sbar}")
    block = next(i for i, (a, b) in enumerate(zip(bf_f.sbar, bf_g.sbar)) if a != b)
    el = al.matrix_unit_element(f.dom, block, 0, 0)
    pf = al.apply_channel(f, el)[0]
    pg = al.apply_channel(g, el)[0]
    big, small = (pf, pg) if bf_f.sbar[block] > bf_g.sbar[block] else (pg, pf)
    # unit vector in range(big) orthogonal to range(small)
    w, q = la.hermitian_eigensystem(big)
    rank_big = max(bf_f.sbar[block], bf_g.sbar[block])
    basis = q[:, :rank_big]
    resid = basis - small @ (la.dagger(small) @ basis)  # small is a projection
    norms = np.linalg.norm(resid, axis=0)
    vec = resid[:, int(np.argmax(norms))]
    vec = vec / np.linalg.norm(vec)
    return el, vec


# ---------------------------------------------------------------------------
# convex structure
# ---------------------------------------------------------------------------

def convex_path(f: al.Channel, g: al.Channel, t: float) -> al.Channel:
    """Pointwise Choi mixture (1-t) f + t g; valid for all t in [0, 1]."""
    if f.dom != g.dom or f.cod != g.cod or f.picture != g.picture:
        raise ShapeError("convex path needs parallel channels")
    if f.picture != al.SCHRODINGER:
        raise ShapeError("convex paths are taken in the schrodinger picture")
    if not 0.0 <= t <= 1.0:
        raise ShapeError(f"path parameter {t} outside [0, 1]")
    blocks = [
        [(1.0 - t) * f.blocks[j][i] + t * g.blocks[j][i] for i in range(len(f.dom))]
        for j in range(len(f.cod))
    ]
    return al.Channel(f.dom, f.cod, blocks, f.picture)


# ---------------------------------------------------------------------------
# sampled continuity bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuityReport:
    embedding_ratio: float
    composition_ratio: float
    monoidal_ratio: float
    samples: int
    seed: int

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "bounds": [
                {"bound": "embedding", "max_ratio": self.embedding_ratio, "samples": self.samples},
                {"bound": "composition", "max_ratio": self.composition_ratio, "samples": self.samples},
                {"bound": "monoidal", "max_ratio": self.monoidal_ratio, "samples": self.samples},
            ],
        }


def continuity_report(samples: int = 200, seed: int = 0, max_dim: int = 4) -> ContinuityReport:
    """Sample the Lipschitz estimates behind the continuity of the
    enriched structure and report the worst observed ratio per bound:

    (i)   d(E(V), E(W)) <= 2 |V - W|
    (ii)  d(g f, g' f') <= |g| d(f, f') + d(g, g') |f'|
    (iii) d(h (+) f, h (+) f') = d(f, f') and
          d(h (x) f, h (x) f') <= |h| d(f, f')

    with |.| the transfer spectral norm.  Ratios <= 1 confirm the bounds.
    """
    from . import sampling as sp

    rng = sp.rng_for(seed)
    r_embed = 0.0
    r_comp = 0.0
    r_mono = 0.0
    for _ in range(samples):
        n = int(rng.integers(2, max_dim + 1))
        m = int(rng.integers(n, max_dim + 1))
        v = sp.random_isometry(rng, m, n)
        w = sp.random_isometry(rng, m, n)
        lhs = distance(al.embed_E(v), al.embed_E(w))
        rhs = 2.0 * la.spectral_norm(v - w)
        if rhs > 1e-12:
            r_embed = max(r_embed, lhs / rhs)

        a = (int(rng.integers(1, 3)),)
        b = (int(rng.integers(1, 3)),)
        c = (int(rng.integers(1, 3)),)
        f1 = sp.random_cptp(rng, a, b)
        f2 = sp.random_cptp(rng, a, b)
        g1 = sp.random_cptp(rng, b, c)
        g2 = sp.random_cptp(rng, b, c)
        lhs = distance(al.compose(g1, f1), al.compose(g2, f2))
        rhs = transfer_norm(g1) * distance(f1, f2) + distance(g1, g2) * transfer_norm(f2)
        if rhs > 1e-12:
            r_comp = max(r_comp, lhs / rhs)

        h = sp.random_cptp(rng, a, a)
        lhs_plus = distance(al.oplus(h, f1), al.oplus(h, f2))
        lhs_times = distance(al.otimes(h, f1), al.otimes(h, f2))
        base = distance(f1, f2)
        if base > 1e-12:
            r_mono = max(r_mono, lhs_plus / base, lhs_times / (transfer_norm(h) * base))
    return ContinuityReport(
        embedding_ratio=r_embed,
        composition_ratio=r_comp,
        monoidal_ratio=r_mono,
        samples=samples,
        seed=seed,
    )
