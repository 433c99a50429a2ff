"""A concrete calculus for finite-dimensional quantum theory: circuits of
isometries under direct sum, tensor and composition; channels between
direct sums of matrix algebras as Choi-block grids; Stinespring and
Bratteli normal forms; universal lifts into pluggable targets; and the
topology of the hom-sets.
"""

from .algebra import (
    Channel,
    ChannelFlags,
    channel_from_json,
    channel_from_kraus,
    channel_to_json,
    classify,
    compose,
    copair,
    dualize,
    embed_E,
    identity_channel,
    kraus_from_choi,
    measure_phi,
    oplus,
    otimes,
    structural,
)
from .circuits import evaluate, format_expr, parse, typecheck
from .completion import builtin_target, lift_channel, lift_isometry, lift_starhom
from .errors import QbipermError
from .linalg import (
    direct_sum,
    extend_to_unitary,
    hermitian_eigensystem,
    kron,
    matrix_from_json,
    matrix_to_json,
    spectral_norm,
)
from .normalform import (
    BratteliForm,
    NormalForm,
    bratteli_form,
    channel_equal,
    equivalence_witness,
    eval_normal_form,
    factor_isometry,
    isometry_witness,
    stinespring,
)
from .topology import (
    bratteli_tuples,
    component_atlas,
    component_of,
    continuity_report,
    convex_path,
    distance,
    opnorm_lower_bound,
    separation_witness,
    transfer_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "ChannelFlags",
    "BratteliForm",
    "NormalForm",
    "QbipermError",
    "bratteli_form",
    "bratteli_tuples",
    "builtin_target",
    "channel_equal",
    "channel_from_json",
    "channel_from_kraus",
    "channel_to_json",
    "classify",
    "compose",
    "component_atlas",
    "component_of",
    "continuity_report",
    "convex_path",
    "copair",
    "direct_sum",
    "distance",
    "dualize",
    "embed_E",
    "equivalence_witness",
    "eval_normal_form",
    "evaluate",
    "extend_to_unitary",
    "factor_isometry",
    "format_expr",
    "hermitian_eigensystem",
    "identity_channel",
    "isometry_witness",
    "kraus_from_choi",
    "kron",
    "lift_channel",
    "lift_isometry",
    "lift_starhom",
    "matrix_from_json",
    "matrix_to_json",
    "measure_phi",
    "oplus",
    "opnorm_lower_bound",
    "otimes",
    "parse",
    "separation_witness",
    "spectral_norm",
    "stinespring",
    "structural",
    "transfer_matrix",
    "typecheck",
]
