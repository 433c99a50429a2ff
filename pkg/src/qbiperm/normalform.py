"""Canonical factorizations: isometry completion, Bratteli forms for
*-homomorphisms, Stinespring dilations for unital CP maps, and semantic
channel equality.

Ordering convention (fixed package-wide): the multiplicity factor of a
normal form sits on the OUTER side of the kron pairing, so the diagonal
algebra of a form with block sizes ``mbar`` and multiplicities ``sbar`` is

    D(A_1, ..., A_k) = directsum_i ( I_{s_i} (x) A_i ),

i.e. block i consists of ``s_i`` consecutive diagonal copies of ``A_i``.
Its stabilizer is { directsum_i (Q_i (x) I_{m_i}) : Q_i unitary of size s_i }.
This is the ordering that makes the dilation decompose through iterated
standard-basis measurements followed by folds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as al
from . import linalg as la
from .errors import (
    IllConditioned,
    NotCPTP,
    NotCPU,
    NotSingleBlockCodomain,
    NotStarHom,
    ShapeError,
    WitnessInfeasible,
)


# ---------------------------------------------------------------------------
# isometry factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsometryFactorization:
    """v == u @ iota(m, n) with iota = I_m stacked over zeros, n = m + p."""

    u: np.ndarray
    m: int
    p: int


def iota(m: int, n: int) -> np.ndarray:
    """The standard ancilla-preparation isometry I_m stacked over zeros."""
    if m > n:
        raise ShapeError(f"iota needs m <= n, got {(m, n)}")
    out = la.zeros(n, m)
    out[:m, :m] = la.identity(m)
    return out


def factor_isometry(v) -> IsometryFactorization:
    v = la.as_matrix(v)
    u = la.extend_to_unitary(v)
    n, m = v.shape
    return IsometryFactorization(u=u, m=m, p=n - m)


def isometry_witness(u1, u2, m: int, tol: float = la.ATOL * 10) -> np.ndarray:
    """The unitary w with u1 @ (I_m (+) w) == u2, for unitaries sharing
    their first m columns.  Computed from the blocks: w = C1* C2 + D1* D2.
    """
    u1, u2 = la.as_matrix(u1), la.as_matrix(u2)
    if u1.shape != u2.shape or u1.shape[0] != u1.shape[1]:
        raise ShapeError(f"witness needs equal square unitaries, got {u1.shape} and {u2.shape}")
    n = u1.shape[0]
    if not 0 <= m <= n:
        raise ShapeError(f"shared column count {m} out of range for size {n}")
    mismatch = la.frob(u1[:, :m] - u2[:, :m])
    if mismatch > tol:
        raise WitnessInfeasible("first columns differ", residual=mismatch)
    w = la.dagger(u1[:, m:]) @ u2[:, m:]
    return w


# ---------------------------------------------------------------------------
# Bratteli form for *-homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BratteliForm:
    """A unital *-homomorphism (+)_i M_{m_i} -> M_p presented as
    A -> u (directsum_i I_{s_i} (x) A_i) u^*.
    """

    p: int
    mbar: tuple[int, ...]
    sbar: tuple[int, ...]
    u: np.ndarray


def _component_apply(f: al.Channel, j: int, i: int, x: np.ndarray) -> np.ndarray:
    return np.einsum("arbs,ab->rs", f.choi_tensor(j, i), x)


def _near_int(x: float, tol: float = 1e-6) -> int:
    r = round(x)
    if abs(x - r) > tol:
        raise IllConditioned(f"integer invariant off by {abs(x - r):.3e} (value {x!r})")
    return int(r)


def bratteli_form(f: al.Channel) -> BratteliForm:
    """Recover the multiplicities and conjugating unitary of a *-homomorphism.

    Multiplicities come from the rank of the image of each block's first
    matrix unit; the unitary is rebuilt columnwise from an orthonormal basis
    of that image pushed around by the f(E_{a0}) operators, ordered
    (block, copy, basis index) to match the outer-multiplicity convention.
    """
    if f.picture != al.HEISENBERG:
        raise NotStarHom("Bratteli forms are computed in the heisenberg picture")
    if len(f.cod) != 1:
        raise NotSingleBlockCodomain(
            f"codomain {f.cod} has {len(f.cod)} blocks; distribute first"
        )
    flags = al.classify(f)
    if not flags.star_hom:
        raise NotStarHom("channel is not a unital *-homomorphism")
    p = f.cod[0]
    cols: list[np.ndarray] = []
    sbar = []
    for i, m in enumerate(f.dom):
        e00 = la.zeros(m, m)
        e00[0, 0] = 1.0
        proj = _component_apply(f, 0, i, e00)
        s = _near_int(float(np.trace(proj).real))
        sbar.append(s)
        if s == 0:
            continue
        w, q = la.hermitian_eigensystem((proj + la.dagger(proj)) / 2)
        if w[s - 1] < 0.5:
            raise NotStarHom(f"image of a matrix unit is not a rank-{s} projection")
        basis = [q[:, t] for t in range(s)]
        movers = []
        for a in range(m):
            ea0 = la.zeros(m, m)
            ea0[a, 0] = 1.0
            movers.append(_component_apply(f, 0, i, ea0))
        for t in range(s):
            for a in range(m):
                cols.append(movers[a] @ basis[t])
    if sum(s * m for s, m in zip(sbar, f.dom)) != p:
        raise NotStarHom(f"multiplicities {sbar} do not fill the codomain dimension {p}")
    u = np.column_stack(cols) if cols else la.zeros(p, 0)
    if not la.is_unitary(u, tol=1e-7):
        raise NotStarHom("reconstructed column system is not unitary")
    return BratteliForm(p=p, mbar=f.dom, sbar=tuple(sbar), u=u)


def eval_bratteli(bf: BratteliForm) -> al.Channel:
    """The channel denoted by a Bratteli form."""
    from .sampling import star_hom_channel

    return star_hom_channel(bf.mbar, bf.sbar, bf.u)


# ---------------------------------------------------------------------------
# Stinespring normal forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """The data of the essentially unique dilation of a unital CP map
    f : (+)_i M_{m_i} -> M_p,

        f(A) = corner_p( u (directsum_i I_{s_i} (x) A_i) u^* ),

    with q = sum_i s_i m_i >= p and u a q x q unitary.  The schrodinger
    picture reads the same data dually: prepare with u^* iota(p, q), measure
    the diagonal blocks, and fold the s_i copies of each output block.
    """

    q: int
    p: int
    mbar: tuple[int, ...]
    sbar: tuple[int, ...]
    u: np.ndarray
    picture: str


def dilation_from_kraus(kraus_by_block, p: int, mbar, picture: str) -> NormalForm:
    """Assemble a normal form from per-block Kraus lists of a unital CP map.

    ``kraus_by_block[i]`` presents component i as A -> sum_t K_t A K_t^*
    with K_t of shape (p, m_i).  The stacked isometry has rows grouped
    (block, copy, row), multiplicity outermost.
    """
    mbar = al.check_object(mbar)
    sbar = tuple(len(ops) for ops in kraus_by_block)
    q = sum(s * m for s, m in zip(sbar, mbar))
    rows = []
    for m, ops in zip(mbar, kraus_by_block):
        for k in ops:
            k = la.as_matrix(k)
            if k.shape != (p, m):
                raise ShapeError(f"Kraus operator has shape {k.shape}, expected {(p, m)}")
            rows.append(la.dagger(k))
    w = np.vstack(rows) if rows else la.zeros(0, p)
    if not la.is_isometry(w, tol=1e-7):
        raise NotCPU("Kraus data does not assemble to an isometry (map not unital)")
    u = la.dagger(la.extend_to_unitary(w, tol=1e-7))
    return NormalForm(q=q, p=p, mbar=mbar, sbar=sbar, u=u, picture=picture)


def _stinespring_cpu(f: al.Channel, picture: str) -> NormalForm:
    if len(f.cod) != 1:
        raise NotSingleBlockCodomain(
            f"codomain {f.cod} has {len(f.cod)} blocks; use stinespring_components"
        )
    p = f.cod[0]
    kraus = al.kraus_from_choi(f)
    return dilation_from_kraus([kraus[0][i] for i in range(len(f.dom))], p, f.dom, picture)


def stinespring(f: al.Channel) -> NormalForm:
    """Minimal dilation of a unital CP map (heisenberg) or channel (schrodinger).

    Schrodinger input is dualized internally and the resulting form keeps
    the schrodinger tag, so eval round-trips in the original picture.  The
    multiplicities are the Choi ranks of the components, which makes
    q = sum_i s_i m_i minimal.
    """
    if f.picture == al.SCHRODINGER:
        flags = al.classify(f)
        if not (flags.cp and flags.tp):
            raise NotCPTP("schrodinger input must be completely positive and trace preserving")
        return _stinespring_cpu(al.dualize(f), al.SCHRODINGER)
    flags = al.classify(f)
    if not (flags.cp and flags.unital):
        raise NotCPU("heisenberg input must be completely positive and unital")
    return _stinespring_cpu(f, al.HEISENBERG)


def stinespring_components(f: al.Channel) -> list[NormalForm]:
    """Normal forms of a map with a multi-block codomain, one per block.

    For a heisenberg map the codomain is split by projections; a schrodinger
    channel is split along its domain injections (the dual reading).
    """
    if f.picture == al.HEISENBERG:
        h = f
    else:
        flags = al.classify(f)
        if not (flags.cp and flags.tp):
            raise NotCPTP("schrodinger input must be completely positive and trace preserving")
        h = al.dualize(f)
    forms = []
    for j in range(len(h.cod)):
        proj = al.dualize(al.injection_channel(h.cod, j))
        comp = al.compose(proj, h)
        forms.append(_stinespring_cpu(comp, f.picture))
    return forms


def eval_normal_form(nf: NormalForm) -> al.Channel:
    """The channel denoted by a normal form, in its recorded picture."""
    w = la.dagger(nf.u)[:, : nf.p]
    kraus_by_block = []
    off = 0
    for m, s in zip(nf.mbar, nf.sbar):
        ops = []
        for t in range(s):
            ops.append(la.dagger(w[off + t * m : off + (t + 1) * m, :]))
        kraus_by_block.append(ops)
        off += s * m
    heis = al.channel_from_kraus(nf.mbar, (nf.p,), [kraus_by_block], al.HEISENBERG)
    return heis if nf.picture == al.HEISENBERG else al.dualize(heis)


def normal_form_to_json(nf: NormalForm) -> dict:
    return {
        "q": nf.q,
        "p": nf.p,
        "mbar": list(nf.mbar),
        "sbar": list(nf.sbar),
        "u": la.matrix_to_json(nf.u),
        "picture": nf.picture,
    }


def normal_form_from_json(d: dict) -> NormalForm:
    return NormalForm(
        q=int(d["q"]),
        p=int(d["p"]),
        mbar=tuple(int(x) for x in d["mbar"]),
        sbar=tuple(int(x) for x in d["sbar"]),
        u=la.matrix_from_json(d["u"]),
        picture=d["picture"],
    )


# ---------------------------------------------------------------------------
# semantic equality
# ---------------------------------------------------------------------------

def choi_distance(f: al.Channel, g: al.Channel) -> float:
    """Max over blocks of the Frobenius distance of the Choi matrices."""
    if f.dom != g.dom or f.cod != g.cod or f.picture != g.picture:
        raise ShapeError("channels are not parallel")
    worst = 0.0
    for j in range(len(f.cod)):
        for i in range(len(f.dom)):
            worst = max(worst, la.frob(f.blocks[j][i] - g.blocks[j][i]))
    return worst


def channel_equal(f: al.Channel, g: al.Channel, tol: float = la.ATOL) -> tuple[bool, float]:
    d = choi_distance(f, g)
    return d <= tol, d


# ---------------------------------------------------------------------------
# equivalence of normal forms
# ---------------------------------------------------------------------------

def _polar_unitary(a: np.ndarray) -> np.ndarray:
    """The unitary factor of the polar decomposition a = u (a^* a)^{1/2}."""
    if a.shape[0] != a.shape[1]:
        raise ShapeError("polar factor needs a square matrix")
    if a.shape[0] == 0:
        return a.copy()
    w, q = la.hermitian_eigensystem(la.dagger(a) @ a)
    if w[-1] < 1e-12:
        raise WitnessInfeasible("intertwiner is singular", residual=float(w[-1]))
    inv_sqrt = q @ np.diag(1.0 / np.sqrt(w)) @ la.dagger(q)
    return a @ inv_sqrt


def equivalence_witness(
    nf1: NormalForm, nf2: NormalForm, tol: float = 1e-7
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Unitaries (P, [Q_1..Q_k]) relating two normal forms of one map:

        (I_p (+) P) @ u1 @ directsum_i (Q_i (x) I_{m_i})  ==  u2.

    Follows the uniqueness argument: the commutant intertwiner between the
    two dilation isometries is solved blockwise (it is block scalar on the
    multiplicity factors), then the leftover rotation of the hidden corner
    comes from the isometry witness of the completed unitaries.  This is a
    verifier-constructor: it never searches, and it raises with the
    residual when the forms cannot be related.
    """
    if (nf1.q, nf1.p, nf1.mbar, nf1.sbar) != (nf2.q, nf2.p, nf2.mbar, nf2.sbar):
        raise WitnessInfeasible(
            f"shape data differ: {(nf1.q, nf1.p, nf1.mbar, nf1.sbar)} vs "
            f"{(nf2.q, nf2.p, nf2.mbar, nf2.sbar)}"
        )
    eq, dist = channel_equal(eval_normal_form(nf1), eval_normal_form(nf2), tol=1e-8)
    if not eq:
        raise WitnessInfeasible("normal forms denote different channels", residual=dist)
    p, q = nf1.p, nf1.q
    w1 = la.dagger(nf1.u)[:, :p]
    w2 = la.dagger(nf2.u)[:, :p]
    qs: list[np.ndarray] = []
    t_blocks: list[np.ndarray] = []
    off = 0
    for m, s in zip(nf1.mbar, nf1.sbar):
        m1 = w1[off : off + s * m, :].reshape(s, m * p)
        m2 = w2[off : off + s * m, :].reshape(s, m * p)
        if s == 0:
            t = la.zeros(0, 0)
        else:
            sol, *_ = np.linalg.lstsq(m1.T, m2.T, rcond=None)
            t = _polar_unitary(sol.T)
        t_blocks.append(la.kron(t, la.identity(m)))
        qs.append(la.dagger(t))
        off += s * m
    u1_rot = nf1.u @ la.direct_sum_all(la.kron(qi, la.identity(m)) for qi, m in zip(qs, nf1.mbar))
    witness = isometry_witness(la.dagger(u1_rot), la.dagger(nf2.u), p, tol=1e-6)
    big_p = la.dagger(witness)
    rebuilt = la.direct_sum(la.identity(p), big_p) @ u1_rot
    residual = la.frob(rebuilt - nf2.u)
    if residual > tol:
        raise WitnessInfeasible("witness equation residual too large", residual=residual)
    return big_p, qs
