"""Finite loops as validated Cayley tables, subloops, quotients and constructors."""

from .constructions import (
    BUILTIN_GROUPS,
    ExtensionData,
    automorphisms,
    build_abelian_extension,
    builtin_group,
    chein_double,
    cyclic,
    dihedral,
    direct_product,
    find_isomorphism,
    isomorphisms,
    quaternion,
    random_extension_data,
    symmetric,
    trivial_extension_data,
)
from .loop import (
    PASS,
    FiniteLoop,
    IdentityReport,
    Nuclei,
    SubloopHandle,
    Verdict,
    as_subloop,
    associator,
    associator_violation,
    check_identity_suite,
    commutator,
    division_identities_hold,
    generate_subloop,
    is_abelian_group,
    is_associative,
    is_commutative,
    is_d_divisible,
    is_diassociative,
    is_group,
    is_moufang,
    is_power_associative,
    is_subloop,
    moufang_violation,
    nuclei,
    subloop_table,
    validate_loop,
)
from .subloops import (
    all_subloops,
    cosets,
    distinct_inner_generators,
    inner_generators,
    is_invariant,
    is_normal_subloop,
    join,
    normal_closure,
    normal_subloops,
    preimage,
    quotient,
    require_normal,
)
from .tblio import format_table, load_tbl, parse_table, save_tbl

__all__ = [name for name in dir() if not name.startswith("_")]
