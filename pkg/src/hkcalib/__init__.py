"""hkcalib: a verification workbench for quaternionic calibration forms.

Builds the model quaternionic Hermitian space H^n = R^{4n}, constructs the
named calibration forms of hyperkahler linear algebra with their exact
normalization constants, checks the wedge-product identities behind them,
certifies comass numerically by Riemannian ascent over orthonormal frames,
and classifies the calibrated subspaces.
"""

from .exterior import (
    AlternatingForm,
    FrameMatrix,
    basis_form,
    contract,
    evaluate,
    hodge_star,
    inner_product,
    norm,
    random_form,
    volume_form,
    wedge,
    wedge_power,
    zero_form,
)
from .quaternionic import (
    ComplexForm,
    QuaternionicModel,
    WeightDecomposition,
    act_on_form,
    build_model,
    casimir_matrix,
    casimir_projector_max,
    casimir_spectrum,
    hodge_part,
    holomorphic_symplectic,
    is_H_real,
    is_q_positive,
    lefschetz,
    lefschetz_adjoint,
    lefschetz_matrix,
    model_with_swapped_roles,
    su2_cartan,
    weight_decompose,
    weight_project,
)
from .catalog import (
    NamedForm,
    bryant_harvey,
    c_constant,
    explicit_psi_pp,
    in_bryant_harvey_region,
    named_form,
    phi_coisotropic,
    psi,
    psi_pp,
    sl_forms,
    sl_volume,
    theta,
    xi,
)
from .subspaces import (
    SubspaceClass,
    SubspaceFrame,
    classify,
    random_face,
    random_plane,
    random_sp_n,
    standard_face,
)
from .comass import (
    ComassOptions,
    ComassReport,
    comass_estimate,
    comass_exact_2form,
    stabilizer_dimension,
    u1_face_criterion,
    verify_faces,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
