"""Objects and completely positive maps between finite-dimensional C*-algebras.

An object is a tuple of positive block dimensions: ``(n1, ..., nk)`` stands
for the direct sum of the full matrix algebras of those sizes.  The empty
tuple is the initial object; ``(1,)`` is the tensor unit (and terminal
object at the channel level).

A morphism is stored as a :class:`Channel`: a grid of Choi matrices, one per
(output block, input block) pair.  The Choi matrix of a component map
``g : M_n -> M_m`` puts the INPUT tensor factor first,

    choi[(a*m + r), (b*m + s)] = g(E_ab)[r, s]

under the kron ordering of :mod:`qbiperm.linalg`.  One value type serves
Schrodinger-picture channels (trace preserving), Heisenberg-picture maps
(unital) and *-homomorphisms; the ``picture`` tag selects which
normalisation is enforced, and :func:`classify` computes the rest.

Algebra elements of a multi-block object are plain lists of matrices, one
per block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import (
    NotCP,
    NotIsometry,
    NotTracePreserving,
    NotUnital,
    ShapeError,
)

SCHRODINGER = "schrodinger"
HEISENBERG = "heisenberg"
_PICTURES = (SCHRODINGER, HEISENBERG)


# ---------------------------------------------------------------------------
# objects
# ---------------------------------------------------------------------------

def check_object(dims) -> tuple[int, ...]:
    """Validate an object: a finite tuple of positive block dimensions."""
    out = tuple(int(n) for n in dims)
    if any(n < 1 for n in out):
        raise ShapeError(f"block dimensions must be positive, got {out}")
    return out


def total_dim(dims) -> int:
    return sum(dims)


def algebra_dim(dims) -> int:
    return sum(n * n for n in dims)


def block_offsets(dims) -> list[int]:
    offs, acc = [], 0
    for n in dims:
        offs.append(acc)
        acc += n
    return offs


def oplus_obj(a, b) -> tuple[int, ...]:
    return tuple(a) + tuple(b)


def otimes_obj(a, b) -> tuple[int, ...]:
    return tuple(x * y for x in a for y in b)


# ---------------------------------------------------------------------------
# the Channel value
# ---------------------------------------------------------------------------

class Channel:
    """A completely positive map between direct sums of matrix algebras.

    ``blocks[j][i]`` is the Choi matrix of the component from input block i
    (size ``dom[i]``) to output block j (size ``cod[j]``), of shape
    ``(dom[i]*cod[j], dom[i]*cod[j])``.  Construction validates complete
    positivity plus trace preservation (``schrodinger``) or unitality
    (``heisenberg``); pass ``validate=False`` only to hold raw block data
    for inspection, e.g. before calling :func:`classify`.
    """

    __slots__ = ("dom", "cod", "blocks", "picture")

    def __init__(self, dom, cod, blocks, picture: str = SCHRODINGER, *, validate: bool = True):
        if picture not in _PICTURES:
            raise ShapeError(f"unknown picture {picture!r}")
        dom = check_object(dom)
        cod = check_object(cod)
        grid = []
        if len(blocks) != len(cod):
            raise ShapeError(f"expected {len(cod)} output block rows, got {len(blocks)}")
        for j, row in enumerate(blocks):
            if len(row) != len(dom):
                raise ShapeError(f"output row {j} has {len(row)} blocks, expected {len(dom)}")
            out_row = []
            for i, c in enumerate(row):
                c = la.as_matrix(c)
                d = dom[i] * cod[j]
                if c.shape != (d, d):
                    raise ShapeError(
                        f"Choi block ({j},{i}) has shape {c.shape}, expected {(d, d)}"
                    )
                c = c.copy()
                c.setflags(write=False)
                out_row.append(c)
            grid.append(tuple(out_row))
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "blocks", tuple(grid))
        object.__setattr__(self, "picture", picture)
        if validate:
            _validate(self)

    def __setattr__(self, name, value):
        raise AttributeError("Channel values are immutable")

    def block(self, j: int, i: int) -> np.ndarray:
        return self.blocks[j][i]

    def choi_tensor(self, j: int, i: int) -> np.ndarray:
        """Choi block reshaped to (n, m, n, m) = (in, out, in, out)."""
        n, m = self.dom[i], self.cod[j]
        return self.blocks[j][i].reshape(n, m, n, m)

    def __repr__(self):
        return f"Channel({list(self.dom)} -> {list(self.cod)}, {self.picture})"


@dataclass(frozen=True)
class ChannelFlags:
    cp: bool
    tp: bool
    unital: bool
    star_hom: bool


def _ptrace_out(choi: np.ndarray, n: int, m: int) -> np.ndarray:
    """Trace out the output factor: result[a,b] = Tr g(E_ab)."""
    return np.einsum("arbr->ab", choi.reshape(n, m, n, m))


def _ptrace_in(choi: np.ndarray, n: int, m: int) -> np.ndarray:
    """Trace out the input factor: result = g(I_n)."""
    return np.einsum("aras->rs", choi.reshape(n, m, n, m))


def _cp_defect(c: Channel) -> float:
    """Most negative scaled eigenvalue over blocks (0 when CP)."""
    worst = 0.0
    for j in range(len(c.cod)):
        for i in range(len(c.dom)):
            blk = c.blocks[j][i]
            if blk.size == 0:
                continue
            h = (blk + la.dagger(blk)) / 2
            w = np.linalg.eigvalsh(h)
            herm = la.frob(blk - la.dagger(blk))
            lo = float(w[0]) - herm  # Hermitian defect counts against CP
            hi = max(float(w[-1]), 0.0)
            floor = -(la.PSD_RTOL * hi + la.PSD_DUST)
            if lo < floor:
                worst = min(worst, lo - floor)
    return worst


def is_cp(c: Channel) -> bool:
    return _cp_defect(c) >= 0.0


def tp_residual(c: Channel) -> float:
    worst = 0.0
    for i, n in enumerate(c.dom):
        acc = la.zeros(n, n)
        for j, m in enumerate(c.cod):
            acc = acc + _ptrace_out(c.blocks[j][i], n, m)
        worst = max(worst, la.frob(acc - la.identity(n)))
    return worst


def unital_residual(c: Channel) -> float:
    worst = 0.0
    for j, m in enumerate(c.cod):
        acc = la.zeros(m, m)
        for i, n in enumerate(c.dom):
            acc = acc + _ptrace_in(c.blocks[j][i], n, m)
        worst = max(worst, la.frob(acc - la.identity(m)))
    return worst


def is_tp(c: Channel) -> bool:
    return tp_residual(c) <= la.ATOL


def is_unital(c: Channel) -> bool:
    return unital_residual(c) <= la.ATOL


def _validate(c: Channel) -> None:
    defect = _cp_defect(c)
    if defect < 0.0:
        raise NotCP(f"Choi block has negative eigenvalue (defect {defect:.3e})")
    if c.picture == SCHRODINGER:
        r = tp_residual(c)
        if r > la.ATOL:
            raise NotTracePreserving(f"trace preservation violated (residual {r:.3e})")
    else:
        r = unital_residual(c)
        if r > la.ATOL:
            raise NotUnital(f"unitality violated (residual {r:.3e})")


_STAR_TOL = 1e-8


def _is_multiplicative(c: Channel) -> bool:
    """Check g(x)g(y) = g(xy) on the matrix-unit basis, blockwise."""
    for j, m in enumerate(c.cod):
        gens = []  # gens[i][a,b] = g_ji(E_ab), shape (n_i, n_i, m, m)
        for i, n in enumerate(c.dom):
            t = c.choi_tensor(j, i)
            gens.append(np.transpose(t, (0, 2, 1, 3)))
        for i, n in enumerate(c.dom):
            for i2, n2 in enumerate(c.dom):
                prod = np.einsum("abrs,cdst->abcdrt", gens[i], gens[i2])
                if i == i2:
                    expect = np.einsum("bc,adrt->abcdrt", np.eye(n), gens[i])
                else:
                    expect = np.zeros_like(prod)
                if la.frob(prod - expect) > _STAR_TOL * max(1.0, la.frob(expect)):
                    return False
    return True


def _is_adjoint_preserving(c: Channel) -> bool:
    return all(
        la.frob(blk - la.dagger(blk)) <= la.ATOL for row in c.blocks for blk in row
    )


def classify(c: Channel) -> ChannelFlags:
    """Flags computed from the raw block data (no validity assumed)."""
    cp = is_cp(c)
    tp = is_tp(c)
    unital = is_unital(c)
    star = unital and _is_adjoint_preserving(c) and _is_multiplicative(c)
    return ChannelFlags(cp=cp, tp=tp, unital=unital, star_hom=star)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _kraus_choi(kraus: Sequence[np.ndarray], n: int, m: int) -> np.ndarray:
    c = la.zeros(n * m, n * m)
    for k in kraus:
        k = la.as_matrix(k)
        if k.shape != (m, n):
            raise ShapeError(f"Kraus operator has shape {k.shape}, expected {(m, n)}")
        w = np.ravel(k.T)  # w[a*m + r] = k[r, a]
        c = c + np.outer(w, w.conj())
    return c


def channel_from_kraus(dom, cod, kraus, picture: str = SCHRODINGER, *, validate: bool = True) -> Channel:
    """Build a channel from a grid of Kraus operator lists.

    ``kraus[j][i]`` is a list of ``cod[j] x dom[i]`` matrices presenting the
    component map as ``A -> sum_t K_t A K_t^*``; an empty list denotes the
    zero component.
    """
    dom, cod = check_object(dom), check_object(cod)
    blocks = [
        [_kraus_choi(kraus[j][i], dom[i], cod[j]) for i in range(len(dom))]
        for j in range(len(cod))
    ]
    return Channel(dom, cod, blocks, picture, validate=validate)


def kraus_from_choi(c: Channel) -> list[list[list[np.ndarray]]]:
    """Extract Kraus operators blockwise from eigenvectors of the Choi matrices.

    Eigenvalues above the rank threshold contribute one operator each,
    scaled by sqrt(eigenvalue); rebuilding via :func:`channel_from_kraus`
    reproduces the channel.
    """
    out = []
    for j, m in enumerate(c.cod):
        row = []
        for i, n in enumerate(c.dom):
            blk = c.blocks[j][i]
            ops: list[np.ndarray] = []
            if blk.size:
                w, q = la.hermitian_eigensystem((blk + la.dagger(blk)) / 2)
                top = max(float(w[0]), 0.0)
                if w[-1] < -(la.PSD_RTOL * top + la.PSD_DUST):
                    raise NotCP(
                        f"Choi block ({j},{i}) has negative eigenvalue {w[-1]:.3e}"
                    )
                for t in range(len(w)):
                    if w[t] > la.RANK_RTOL * top:
                        vec = q[:, t] * np.sqrt(w[t])
                        ops.append(vec.reshape(n, m).T.copy())
            row.append(ops)
        out.append(row)
    return out


def identity_channel(dims, picture: str = SCHRODINGER) -> Channel:
    dims = check_object(dims)
    kraus = [
        [[la.identity(n)] if i == j else [] for i, n in enumerate(dims)]
        for j, _ in enumerate(dims)
    ]
    return channel_from_kraus(dims, dims, kraus, picture)


def embed_E(v, *, validate: bool = True) -> Channel:
    """The canonical embedding of an isometry: rho -> V rho V^*.

    Sends the pure object m to [m] (and 0 to the empty object, where the
    image is the unique initial map); global phases of ``v`` cancel.
    """
    v = la.as_matrix(v)
    if validate and not la.is_isometry(v):
        raise NotIsometry(f"embedding needs an isometry, got residual "
                          f"{la.frob(la.dagger(v) @ v - la.identity(v.shape[1])):.3e}")
    n, m = v.shape
    if m == 0:
        return initial_channel((n,)) if n else Channel((), (), [], SCHRODINGER)
    return channel_from_kraus((m,), (n,), [[[v]]], SCHRODINGER)


def conjugation_channel(u, picture: str = HEISENBERG) -> Channel:
    """A -> u A u^* for a unitary u, in either picture."""
    u = la.as_matrix(u)
    if not la.is_unitary(u):
        raise NotIsometry("conjugation needs a unitary matrix")
    n = u.shape[0]
    return channel_from_kraus((n,), (n,), [[[u]]], picture)


# ---------------------------------------------------------------------------
# categorical operations
# ---------------------------------------------------------------------------

def compose(g: Channel, f: Channel) -> Channel:
    """g after f (as linear maps dom(f) -> cod(g))."""
    if f.picture != g.picture:
        raise ShapeError("cannot compose channels in different pictures")
    if f.cod != g.dom:
        raise ShapeError(f"composition mismatch: {f.cod} vs {g.dom}")
    blocks = []
    for l, r in enumerate(g.cod):
        row = []
        for i, n in enumerate(f.dom):
            acc = la.zeros(n * r, n * r)
            for j, m in enumerate(f.cod):
                tf = f.choi_tensor(j, i)
                tg = g.choi_tensor(l, j)
                acc = acc + np.einsum("acbd,crds->arbs", tf, tg).reshape(n * r, n * r)
            row.append(acc)
        blocks.append(row)
    return Channel(f.dom, g.cod, blocks, f.picture)


def oplus(f: Channel, g: Channel) -> Channel:
    """Direct sum: concatenated objects, block-diagonal grid."""
    if f.picture != g.picture:
        raise ShapeError("cannot combine channels in different pictures")
    dom = oplus_obj(f.dom, g.dom)
    cod = oplus_obj(f.cod, g.cod)
    blocks = []
    for j, m in enumerate(cod):
        row = []
        for i, n in enumerate(dom):
            in_f = i < len(f.dom)
            out_f = j < len(f.cod)
            if in_f and out_f:
                row.append(f.blocks[j][i])
            elif (not in_f) and (not out_f):
                row.append(g.blocks[j - len(f.cod)][i - len(f.dom)])
            else:
                row.append(la.zeros(n * m, n * m))
        blocks.append(row)
    return Channel(dom, cod, blocks, f.picture)


def _choi_kron(tf: np.ndarray, dims_f: tuple[int, int], tg: np.ndarray, dims_g: tuple[int, int]) -> np.ndarray:
    """Choi matrix of a tensor product component from the factor tensors."""
    n, m = dims_f
    c, d = dims_g
    t = np.einsum("arbs,cpdq->acrpbdsq", tf.reshape(n, m, n, m), tg.reshape(c, d, c, d))
    nd = n * c * m * d
    return t.reshape(nd, nd)


def otimes(f: Channel, g: Channel) -> Channel:
    """Tensor product: lexicographic pairs of blocks, Kronecker components.

    The Choi blocks are regrouped so the combined input factors stay in
    front of the combined output factors, matching the fixed Choi order.
    """
    if f.picture != g.picture:
        raise ShapeError("cannot combine channels in different pictures")
    dom = otimes_obj(f.dom, g.dom)
    cod = otimes_obj(f.cod, g.cod)
    blocks = []
    for j in range(len(f.cod)):
        for l in range(len(g.cod)):
            row = []
            for i in range(len(f.dom)):
                for u in range(len(g.dom)):
                    row.append(
                        _choi_kron(
                            f.blocks[j][i], (f.dom[i], f.cod[j]),
                            g.blocks[l][u], (g.dom[u], g.cod[l]),
                        )
                    )
            blocks.append(row)
    return Channel(dom, cod, blocks, f.picture)


def dualize(f: Channel) -> Channel:
    """The adjoint map for Tr(f*(b) a) = Tr(b f(a)); swaps the picture tag.

    An exact involution: the Choi blocks of the dual are index reversals of
    the originals, so dualize(dualize(f)) == f bit for bit.
    """
    picture = HEISENBERG if f.picture == SCHRODINGER else SCHRODINGER
    blocks = []
    for i, n in enumerate(f.dom):
        row = []
        for j, m in enumerate(f.cod):
            t = f.choi_tensor(j, i)
            row.append(np.transpose(t, (3, 2, 1, 0)).reshape(n * m, n * m))
        blocks.append(row)
    return Channel(f.cod, f.dom, blocks, picture)


def conjugate_channel(f: Channel) -> Channel:
    """Entrywise conjugation endofunctor (conjugated Choi blocks)."""
    blocks = [[blk.conj() for blk in row] for row in f.blocks]
    return Channel(f.dom, f.cod, blocks, f.picture)


# ---------------------------------------------------------------------------
# structural morphisms
# ---------------------------------------------------------------------------

def terminal_channel(dims) -> Channel:
    """The hiding map to [1]: the trace, summed over blocks."""
    dims = check_object(dims)
    kraus_row = []
    for n in dims:
        ops = []
        for a in range(n):
            e = la.zeros(1, n)
            e[0, a] = 1.0
            ops.append(e)
        kraus_row.append(ops)
    return channel_from_kraus(dims, (1,), [kraus_row], SCHRODINGER)


def initial_channel(dims, picture: str = SCHRODINGER) -> Channel:
    """The unique map out of the empty object."""
    dims = check_object(dims)
    return Channel((), dims, [[] for _ in dims], picture)


def injection_channel(dims, i: int) -> Channel:
    """Coproduct injection [dims[i]] -> dims (pads with zero blocks)."""
    dims = check_object(dims)
    if not 0 <= i < len(dims):
        raise ShapeError(f"injection index {i} out of range for {dims}")
    kraus = [[[la.identity(dims[j])]] if j == i else [[]] for j in range(len(dims))]
    return channel_from_kraus((dims[i],), dims, kraus, SCHRODINGER)


def fold_channel(n: int, s: int) -> Channel:
    """The codiagonal [n]*s -> [n], summing the s blocks."""
    if s < 1:
        raise ShapeError("fold needs arity >= 1")
    kraus = [[[la.identity(n)] for _ in range(s)]]
    return channel_from_kraus((n,) * s, (n,), kraus, SCHRODINGER)


def measure_phi(parts) -> Channel:
    """Standard-basis measurement [sum(parts)] -> [parts...].

    Extracts the consecutive diagonal blocks of the stated sizes; the n-ary
    form is the left-associated iteration of the binary split (all
    bracketings agree since the object sum is strictly associative).
    """
    parts = check_object(parts)
    total = total_dim(parts)
    kraus = []
    off = 0
    for p in parts:
        sel = la.zeros(p, total)
        sel[:, off : off + p] = la.identity(p)
        kraus.append([[sel]])
        off += p
    return channel_from_kraus((total,), parts, kraus, SCHRODINGER)


def partial_trace_channel(n: int, m: int) -> Channel:
    """Discard the outer n-factor of [n*m]: the partial trace to [m]."""
    ops = []
    for a in range(n):
        e = la.zeros(1, n)
        e[0, a] = 1.0
        ops.append(la.kron(e, la.identity(m)))
    return channel_from_kraus((n * m,), (m,), [[ops]], SCHRODINGER)


def copair(*channels: Channel) -> Channel:
    """Coproduct copairing: [f1, ..., fk] : dom(f1) (+) ... -> common codomain."""
    if not channels:
        raise ShapeError("copair needs at least one channel; use initial_channel for the empty case")
    cod = channels[0].cod
    for f in channels:
        if f.picture != SCHRODINGER:
            raise ShapeError("copair is a coproduct operation of the schrodinger picture")
        if f.cod != cod:
            raise ShapeError(f"copair codomain mismatch: {f.cod} vs {cod}")
    dom = ()
    for f in channels:
        dom = oplus_obj(dom, f.dom)
    blocks = []
    for j in range(len(cod)):
        row = []
        for f in channels:
            row.extend(f.blocks[j])
        blocks.append(row)
    return Channel(dom, cod, blocks, SCHRODINGER)


def copair_via_terminal(f: Channel, g: Channel) -> Channel:
    """The copairing computed through the terminal object:

    A (+) B --f(+)g--> C (+) C == ([1,1]) (x) C --!(x)C--> [1] (x) C == C.

    Must agree with :func:`copair`; the agreement is the executable content
    of the coproduct property of (+) when the tensor unit is terminal.
    """
    if f.cod != g.cod:
        raise ShapeError(f"copair codomain mismatch: {f.cod} vs {g.cod}")
    both = oplus(f, g)
    collapse = otimes(terminal_channel((1, 1)), identity_channel(f.cod))
    return compose(collapse, both)


def gamma_plus_pure(n: int, m: int) -> np.ndarray:
    """Symmetry of (+) on pure objects: the block swap n (+) m -> m (+) n."""
    p = la.zeros(n + m, n + m)
    for i in range(n):
        p[m + i, i] = 1.0
    for k in range(m):
        p[k, n + k] = 1.0
    return p


def gamma_times_pure(n: int, m: int) -> np.ndarray:
    """Symmetry of (x) on pure objects: e_i (x) e_k -> e_k (x) e_i."""
    p = la.zeros(n * m, n * m)
    for i in range(n):
        for k in range(m):
            p[k * n + i, i * m + k] = 1.0
    return p


def delta_sharp_pure(a: int, b: int, c: int) -> np.ndarray:
    """The one nontrivial distributivity permutation of this artifact,

        a (x) (b (+) c)  ->  (a (x) b) (+) (a (x) c),

    as a permutation unitary.  (The other distribution,
    ``(a (+) b) (x) c == (a (x) c) (+) (b (x) c)``, is an entrywise identity
    under the fixed kron order and has no runtime representation.)  Equals
    the composite derived from the tensor symmetry, which is checked in the
    law suite.
    """
    p = la.zeros(a * b + a * c, a * (b + c))
    for x in range(a):
        for y in range(b):
            p[x * b + y, x * (b + c) + y] = 1.0
        for z in range(c):
            p[a * b + x * c + z, x * (b + c) + b + z] = 1.0
    return p


def gamma_plus_channel(adims, bdims, picture: str = SCHRODINGER) -> Channel:
    """Block swap channel A (+) B -> B (+) A."""
    adims, bdims = check_object(adims), check_object(bdims)
    dom = oplus_obj(adims, bdims)
    cod = oplus_obj(bdims, adims)
    k, p = len(adims), len(bdims)
    kraus = []
    for j, m in enumerate(cod):
        src = (j + k) % (k + p)  # cod position j carries dom block src
        row = [[la.identity(m)] if i == src else [] for i in range(len(dom))]
        kraus.append(row)
    return channel_from_kraus(dom, cod, kraus, picture)


def gamma_times_channel(adims, bdims, picture: str = SCHRODINGER) -> Channel:
    """Tensor swap channel A (x) B -> B (x) A."""
    adims, bdims = check_object(adims), check_object(bdims)
    dom = otimes_obj(adims, bdims)
    cod = otimes_obj(bdims, adims)
    ka, kb = len(adims), len(bdims)
    kraus = []
    for u in range(kb):
        for i in range(ka):
            row = []
            for i2 in range(ka):
                for u2 in range(kb):
                    if i2 == i and u2 == u:
                        row.append([gamma_times_pure(adims[i], bdims[u])])
                    else:
                        row.append([])
            kraus.append(row)
    return channel_from_kraus(dom, cod, kraus, picture)


_STRUCTURAL = {
    "identity": lambda dims, picture=SCHRODINGER: identity_channel(dims, picture),
    "terminal": lambda dims: terminal_channel(dims),
    "initial": lambda dims, picture=SCHRODINGER: initial_channel(dims, picture),
    "injection": lambda dims, i: injection_channel(dims, i),
    "fold": lambda n, s: fold_channel(n, s),
    "copair": lambda *fs: copair(*fs),
    "partial_trace": lambda n, m: partial_trace_channel(n, m),
    "measure_phi": lambda *parts: measure_phi(parts),
    "gamma_plus": lambda n, m: gamma_plus_pure(n, m),
    "gamma_times": lambda n, m: gamma_times_pure(n, m),
    "delta_sharp": lambda a, b, c: delta_sharp_pure(a, b, c),
}


def structural(name: str, *params):
    """Dispatch a named canonical morphism (channel or pure permutation)."""
    try:
        builder = _STRUCTURAL[name]
    except KeyError:
        raise ShapeError(f"unknown structural morphism {name!r}")
    return builder(*params)


# ---------------------------------------------------------------------------
# algebra elements
# ---------------------------------------------------------------------------

def check_element(dims, element) -> list[np.ndarray]:
    dims = check_object(dims)
    mats = [la.as_matrix(x) for x in element]
    if len(mats) != len(dims):
        raise ShapeError(f"element has {len(mats)} blocks, object has {len(dims)}")
    for n, x in zip(dims, mats):
        if x.shape != (n, n):
            raise ShapeError(f"element block has shape {x.shape}, expected {(n, n)}")
    return mats


def matrix_unit_element(dims, block: int, a: int, b: int) -> list[np.ndarray]:
    """The algebra element that is E_ab in the given block and zero elsewhere."""
    dims = check_object(dims)
    out = [la.zeros(n, n) for n in dims]
    out[block][a, b] = 1.0
    return out


def identity_element(dims) -> list[np.ndarray]:
    return [la.identity(n) for n in check_object(dims)]


def apply_channel(c: Channel, element) -> list[np.ndarray]:
    """Apply the linear map to an algebra element (list of blocks)."""
    mats = check_element(c.dom, element)
    out = []
    for j, m in enumerate(c.cod):
        acc = la.zeros(m, m)
        for i, n in enumerate(c.dom):
            acc = acc + np.einsum("arbs,ab->rs", c.choi_tensor(j, i), mats[i])
        out.append(acc)
    return out


def element_norm(element) -> float:
    """Spectral norm of a direct-sum element: the max over blocks."""
    mats = [la.as_matrix(x) for x in element]
    return max((la.spectral_norm(x) for x in mats), default=0.0)


# ---------------------------------------------------------------------------
# the stochastic correspondence
# ---------------------------------------------------------------------------

def channel_from_stochastic(s) -> Channel:
    """Build a channel [1]*k -> [1]*p from a column-stochastic real matrix."""
    s = np.asarray(s, dtype=float)
    if s.ndim != 2:
        raise ShapeError("stochastic data must be a matrix")
    p, k = s.shape
    blocks = [[np.array([[complex(s[j, i])]]) for i in range(k)] for j in range(p)]
    return Channel((1,) * k, (1,) * p, blocks, SCHRODINGER)


def stochastic_from_channel(c: Channel) -> np.ndarray:
    """Inverse of :func:`channel_from_stochastic` for all-ones objects."""
    if any(n != 1 for n in c.dom) or any(m != 1 for m in c.cod):
        raise ShapeError("stochastic form needs all block dimensions equal to 1")
    return np.array(
        [[float(c.blocks[j][i][0, 0].real) for i in range(len(c.dom))] for j in range(len(c.cod))]
    )


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------

def channel_to_json(c: Channel) -> dict:
    return {
        "picture": c.picture,
        "dom": list(c.dom),
        "cod": list(c.cod),
        "blocks": [[la.matrix_to_json(blk) for blk in row] for row in c.blocks],
    }


def channel_from_json(d: dict, *, validate: bool = True) -> Channel:
    try:
        picture = d["picture"]
        dom = d["dom"]
        cod = d["cod"]
        rows = d["blocks"]
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"malformed channel encoding: {exc}")
    blocks = [[la.matrix_from_json(b) for b in row] for row in rows]
    return Channel(dom, cod, blocks, picture, validate=validate)
