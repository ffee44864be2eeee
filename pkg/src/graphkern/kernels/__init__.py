"""Graph kernel implementations grouped by the substructure they compare."""
from .baseline import eh_kernel, veh_kernel, vh_kernel
from .fingerprint import hashed_tanimoto, hybrid_kernel, minmax_kernel, tanimoto_kernel
from .path import sp_kernel
from .tree import TreePatternConfig, tree_pattern_kernel
from .walk import exp_walk_kernel, grw_kernel, marginalized_kernel, marginalized_nt_kernel, nstep_kernel
from .wl import wl_kernel, wloa_kernel, wls_kernel

__all__ = [
    "vh_kernel", "eh_kernel", "veh_kernel",
    "grw_kernel", "exp_walk_kernel", "nstep_kernel", "marginalized_kernel", "marginalized_nt_kernel",
    "sp_kernel", "TreePatternConfig", "tree_pattern_kernel",
    "tanimoto_kernel", "minmax_kernel", "hashed_tanimoto", "hybrid_kernel",
    "wl_kernel", "wls_kernel", "wloa_kernel",
]
