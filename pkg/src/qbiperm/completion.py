"""Universal lift engines against pluggable target categories.

A target is host code implementing the bipermutative interface below;
three builtins are provided (the channel category itself, its entrywise
conjugate, and the terminal one-morphism category), plus a pure isometry
target used to exercise the unitary-to-isometry lift.

The lifts:

* :func:`lift_isometry` extends a strict functor on unitaries along the
  ancilla completion, ``F^(v) = F(U) . (id (+) bottom)`` for any
  factorization v = U iota.
* :func:`lift_starhom` extends a colax functor on unitaries to unital
  *-homomorphisms through their Bratteli forms.
* :func:`lift_channel` extends a colax functor on isometries to all
  channels through Stinespring forms: prepare with F(U* iota), split with
  the iterated colax comparison, and fold the multiplicity copies.

All assemblies are independent of the normal form chosen; the law suite
checks this on stabilizer-perturbed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import algebra as al
from . import linalg as la
from .errors import NotCPTP, NotStarHom, ShapeError
from .normalform import NormalForm, factor_isometry, iota, stinespring_components


# ---------------------------------------------------------------------------
# targets
# ---------------------------------------------------------------------------

class Target:
    """Capability interface a host category must provide to receive lifts.

    Objects and morphisms are opaque to the engine; the required algebra is
    the bipermutative structure with initial unit for (+), terminal unit
    for (x), and (+) a coproduct.
    """

    name = "abstract"

    # objects
    def obj_oplus(self, a, b):
        raise NotImplementedError

    def obj_otimes(self, a, b):
        raise NotImplementedError

    @property
    def unit_obj(self):
        raise NotImplementedError

    @property
    def zero_obj(self):
        raise NotImplementedError

    # morphisms
    def identity(self, obj):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def oplus(self, f, g):
        raise NotImplementedError

    def otimes(self, f, g):
        raise NotImplementedError

    def initial(self, obj):
        """The unique morphism zero_obj -> obj."""
        raise NotImplementedError

    def terminal(self, obj):
        """The unique morphism obj -> unit_obj."""
        raise NotImplementedError

    def copair(self, morphisms):
        """[f_i : A_i -> C] -> (+) A_i -> C."""
        raise NotImplementedError

    def equal(self, f, g, tol: float = la.ATOL) -> tuple[bool, float]:
        raise NotImplementedError

    def encode(self, f):
        """JSON-able encoding of a morphism."""
        raise NotImplementedError


@dataclass
class ColaxFunctorData:
    """A (+)-colax functor into a target: object map on naturals, morphism
    map on isometries, and the comparison psi(a, b) : F(a+b) -> F(a) (+) F(b).
    F of the zero object must be the target's initial object.
    """

    target: Target
    obj: Callable[[int], object]
    mor: Callable[[np.ndarray], object]
    psi: Callable[[int, int], object]
    name: str = "functor"


class CptpTarget(Target):
    """The channel category itself, schrodinger picture."""

    name = "cptp"

    def obj_oplus(self, a, b):
        return al.oplus_obj(a, b)

    def obj_otimes(self, a, b):
        return al.otimes_obj(a, b)

    @property
    def unit_obj(self):
        return (1,)

    @property
    def zero_obj(self):
        return ()

    def identity(self, obj):
        return al.identity_channel(obj)

    def compose(self, g, f):
        return al.compose(g, f)

    def oplus(self, f, g):
        return al.oplus(f, g)

    def otimes(self, f, g):
        return al.otimes(f, g)

    def initial(self, obj):
        return al.initial_channel(obj)

    def terminal(self, obj):
        return al.terminal_channel(obj)

    def copair(self, morphisms):
        return al.copair(*morphisms)

    def equal(self, f, g, tol: float = la.ATOL):
        from .normalform import channel_equal

        return channel_equal(f, g, tol)

    def encode(self, f):
        return al.channel_to_json(f)


class TerminalTarget(Target):
    """One object, one morphism."""

    name = "terminal_category"

    OBJ = "*"
    MOR = "*"

    def obj_oplus(self, a, b):
        return self.OBJ

    def obj_otimes(self, a, b):
        return self.OBJ

    @property
    def unit_obj(self):
        return self.OBJ

    @property
    def zero_obj(self):
        return self.OBJ

    def identity(self, obj):
        return self.MOR

    def compose(self, g, f):
        return self.MOR

    def oplus(self, f, g):
        return self.MOR

    def otimes(self, f, g):
        return self.MOR

    def initial(self, obj):
        return self.MOR

    def terminal(self, obj):
        return self.MOR

    def copair(self, morphisms):
        return self.MOR

    def equal(self, f, g, tol: float = la.ATOL):
        return True, 0.0

    def encode(self, f):
        return {"object": self.OBJ, "morphism": self.MOR}


class IsometryTarget(Target):
    """Pure matrices: objects are naturals, morphisms are isometries.

    Has an initial zero object but no terminal unit or coproducts, which is
    all the unitary-to-isometry lift needs.
    """

    name = "isometry"

    def obj_oplus(self, a, b):
        return a + b

    def obj_otimes(self, a, b):
        return a * b

    @property
    def unit_obj(self):
        return 1

    @property
    def zero_obj(self):
        return 0

    def identity(self, obj):
        return la.identity(obj)

    def compose(self, g, f):
        return la.as_matrix(g) @ la.as_matrix(f)

    def oplus(self, f, g):
        return la.direct_sum(f, g)

    def otimes(self, f, g):
        return la.kron(f, g)

    def initial(self, obj):
        return la.zeros(obj, 0)

    def terminal(self, obj):
        raise ShapeError("the isometry target has no terminal unit")

    def copair(self, morphisms):
        raise ShapeError("the isometry target has no coproducts")

    def equal(self, f, g, tol: float = la.ATOL):
        d = la.frob(la.as_matrix(f) - la.as_matrix(g))
        return d <= tol, d

    def encode(self, f):
        return la.matrix_to_json(f)


def embedding_functor(conjugate: bool = False) -> ColaxFunctorData:
    """The canonical colax functor into the channel category: n -> [n],
    V -> (rho -> V rho V*), psi = standard basis measurement.  With
    ``conjugate`` it is postcomposed with entrywise conjugation."""
    target = CptpTarget()
    if conjugate:
        mor = lambda v: al.embed_E(la.as_matrix(v).conj())
        name = "E-conjugate"
    else:
        mor = lambda v: al.embed_E(v)
        name = "E"
    return ColaxFunctorData(
        target=target,
        obj=lambda n: (n,),
        mor=mor,
        psi=lambda a, b: al.measure_phi((a, b)),
        name=name,
    )


def inclusion_functor(conjugate: bool = False) -> ColaxFunctorData:
    """Unitaries/isometries mapped to themselves (or their conjugates) in
    the pure isometry target; psi is unavailable there."""
    target = IsometryTarget()

    def no_psi(a, b):
        raise ShapeError("the isometry target has no colax comparison")

    mor = (lambda v: la.as_matrix(v).conj()) if conjugate else (lambda v: la.as_matrix(v).copy())
    return ColaxFunctorData(
        target=target,
        obj=lambda n: n,
        mor=mor,
        psi=no_psi,
        name="conjugation" if conjugate else "inclusion",
    )


def terminal_functor() -> ColaxFunctorData:
    target = TerminalTarget()
    return ColaxFunctorData(
        target=target,
        obj=lambda n: target.OBJ,
        mor=lambda v: target.MOR,
        psi=lambda a, b: target.MOR,
        name="terminal",
    )


BUILTIN_TARGETS = {
    "cptp": lambda: embedding_functor(conjugate=False),
    "cptp_conjugate": lambda: embedding_functor(conjugate=True),
    "terminal_category": terminal_functor,
    "isometry": lambda: inclusion_functor(conjugate=False),
    "isometry_conjugate": lambda: inclusion_functor(conjugate=True),
}


def builtin_target(name: str) -> ColaxFunctorData:
    try:
        return BUILTIN_TARGETS[name]()
    except KeyError:
        raise ShapeError(
            f"unknown target {name!r}; available: {sorted(BUILTIN_TARGETS)}"
        )


# ---------------------------------------------------------------------------
# lifts
# ---------------------------------------------------------------------------

def lift_isometry(F: ColaxFunctorData, v):
    """Extend a strict functor on unitaries to an isometry v = U iota:
    F^(v) = F(U) . (id_{F(m)} (+) initial_{F(p)})."""
    v = la.as_matrix(v)
    fac = factor_isometry(v)
    t = F.target
    prep = t.oplus(t.identity(F.obj(fac.m)), t.initial(F.obj(fac.p)))
    return t.compose(F.mor(fac.u), prep)


def _iterated_psi(F: ColaxFunctorData, parts: list[int]):
    """Left-associated iteration of psi splitting sum(parts) into parts."""
    t = F.target
    if len(parts) == 1:
        return t.identity(F.obj(parts[0]))
    head, last = parts[:-1], parts[-1]
    step = F.psi(sum(head), last)
    rest = _iterated_psi(F, head)
    return t.compose(t.oplus(rest, t.identity(F.obj(last))), step)


def _fold_in_target(F: ColaxFunctorData, n: int, s: int):
    t = F.target
    if s == 0:
        return t.initial(F.obj(n))
    ident = t.identity(F.obj(n))
    return t.copair([ident] * s)


def _assemble_column(F: ColaxFunctorData, form: NormalForm):
    """Target morphism of one schrodinger column from its normal form:
    (+)_j fold_{s_j} . Psi . F(u* iota(p, q))."""
    t = F.target
    prep = F.mor(la.dagger(form.u) @ iota(form.p, form.q))
    parts = []
    for m, s in zip(form.mbar, form.sbar):
        parts.extend([m] * s)
    if not parts:
        raise ShapeError("normal form has empty dilation")
    split = _iterated_psi(F, parts)
    folds = None
    for m, s in zip(form.mbar, form.sbar):
        piece = _fold_in_target(F, m, s)
        folds = piece if folds is None else t.oplus(folds, piece)
    return t.compose(folds, t.compose(split, prep))


def lift_channel_from_forms(F: ColaxFunctorData, forms: list[NormalForm]):
    """Assemble the lift of a channel from per-domain-block normal forms."""
    t = F.target
    columns = [_assemble_column(F, form) for form in forms]
    if not columns:
        raise ShapeError("a channel with empty domain lifts to the initial morphism; "
                         "use the target's initial map")
    return t.copair(columns)


def lift_channel(F: ColaxFunctorData, g: al.Channel):
    """Extend a colax functor on isometries to a channel.

    The channel is split along its domain injections; each column is
    dilated and assembled as prepare + measure + fold in the target; the
    columns are copaired.  The result does not depend on the dilations.
    """
    if g.picture != al.SCHRODINGER:
        raise NotCPTP("lift_channel expects a schrodinger channel")
    flags = al.classify(g)
    if not (flags.cp and flags.tp):
        raise NotCPTP("lift_channel expects a completely positive trace preserving map")
    if not g.dom:
        cod_obj = None
        for j, m in enumerate(g.cod):
            piece = F.obj(m)
            cod_obj = piece if cod_obj is None else F.target.obj_oplus(cod_obj, piece)
        return F.target.initial(cod_obj)
    forms = stinespring_components(g)
    return lift_channel_from_forms(F, forms)


def lift_starhom(F: ColaxFunctorData, f: al.Channel):
    """Extend a colax functor on unitaries to a unital *-homomorphism.

    The heisenberg homomorphism f : mbar -> nbar corresponds to the reversed
    morphism between the lifted objects; with the channel-category target
    and the canonical embedding this is the dual channel of f.
    """
    if f.picture != al.HEISENBERG:
        raise NotStarHom("lift_starhom expects a heisenberg *-homomorphism")
    flags = al.classify(f)
    if not flags.star_hom:
        raise NotStarHom("lift_starhom expects a unital *-homomorphism")
    from .normalform import bratteli_form

    t = F.target
    columns = []
    for j in range(len(f.cod)):
        proj = al.dualize(al.injection_channel(f.cod, j))
        comp = al.compose(proj, f)
        bf = bratteli_form(comp)
        form = NormalForm(
            q=bf.p, p=bf.p, mbar=bf.mbar, sbar=bf.sbar, u=bf.u, picture=al.SCHRODINGER
        )
        columns.append(_assemble_column(F, form))
    return t.copair(columns)
