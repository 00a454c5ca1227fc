from encoders.layout import LAYOUT_VERSION, AmLayout, VarLayout
from encoders.ref import (
    ClauseFamily, encode_ref_F, encode_ref_nr, families_to_cnf, ref_F_families, ref_nr_families,
)
from encoders.sat import (
    Substitution, apply_substitution, encode_reflection, encode_sat, gamma_F, reflection_families,
    sat_families, substitute_proof, tau_substitution,
)
from encoders.appendix import (
    am_families, am_reduction, arrangement, encode_ref_am, reduce_am,
    removable_transfer_clauses, transfer_derivation,
)
