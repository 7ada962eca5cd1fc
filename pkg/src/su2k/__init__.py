"""Quantized moduli-space machinery for SU(2) at integer level k.

The package has three layers:

* ``fusion`` / ``modular`` -- the basis-free level-k data: fusion rules,
  quantum dimensions, twists, S-matrix, Verlinde algebra, block-space
  dimensions (with pinching identities) and the torus SL(2,Z) data.
* ``uq`` / ``cg`` / ``catalog`` -- concrete matrices: irreducible
  representations, R-matrices, Clebsch-Gordan maps with their braiding
  normalization, good-subspace projectors and the deformed inner product.
* ``reps`` / ``handle`` / ``mcg`` -- realized representations of the loop,
  multi-loop, handle and genus-g monodromy algebras, conformal-block bases,
  and Dehn-twist operators with projective-relation checking.

Everything is plain dense ``numpy``; all objects are immutable after
construction and all operations are pure functions of their inputs.
"""

from .fusion import FusionData, FusionVector, build_fusion, fusion_mult
from .modular import (
    ModularData,
    build_modular,
    chi,
    check_s_properties,
    dehn_element,
    gauss_theta,
    pinching_identity,
    s_matrix_gauss,
    torus_sl2z,
    verlinde_dim,
    verlinde_rep,
)
from .uq import QParams, IrrepData, irrep, r_matrix, monodromy, ribbon_scalars
from .cg import CGMap, cg, dual_maps, good_projector
from .catalog import Catalog

# realized representations and mapping-class-group operators
from .reps import (  # noqa: E402
    deformed_inner_product,
    flatness_check,
    invariant_basis,
    lambda_g_rep,
    loop_rep,
    central_eval,
    moduli_restrict,
    multi_loop_rep,
    star_check,
)
from .handle import handle_gns
from .mcg import (
    SurfaceWord,
    TwistGenerator,
    dehn_operator,
    etaprep_operator,
    fusion_algebra_of_curve,
    inner_implementation_check,
    monodromy_of_word,
    projective_relation,
    weight,
)

__all__ = [
    "FusionData", "FusionVector", "build_fusion", "fusion_mult",
    "ModularData", "build_modular", "s_matrix_gauss", "check_s_properties",
    "verlinde_rep", "chi", "gauss_theta", "dehn_element", "verlinde_dim",
    "pinching_identity", "torus_sl2z",
    "QParams", "IrrepData", "irrep", "r_matrix", "monodromy", "ribbon_scalars",
    "CGMap", "cg", "dual_maps", "good_projector",
    "Catalog",
    "loop_rep", "central_eval", "multi_loop_rep", "deformed_inner_product",
    "star_check", "lambda_g_rep", "invariant_basis", "moduli_restrict",
    "flatness_check",
    "handle_gns",
    "SurfaceWord", "TwistGenerator", "weight", "monodromy_of_word",
    "fusion_algebra_of_curve", "dehn_operator", "etaprep_operator",
    "projective_relation", "inner_implementation_check",
]

__version__ = "0.1.0"
