"""
Структурный конвейер: модули над усечёнными полиномиальными алгебрами,
баркоды, разложение free/narrow, рекурсия N_{u,i} и сборка Ext.
"""

from .algebra import (
    ModuleStructureError,
    TamenessViolation,
    TruncatedAlgebra,
    WeightedModule,
    augmentation_module,
    cyclic_module,
    direct_sum,
)
from .barcode import Barcode, adapted_generators, barcode
from .ext import (
    ExtAssembly,
    ExtSummand,
    cobar_ext_dims,
    ext_of_barcode,
    ext_of_Mg,
    fake_basechange,
    generation_report,
    genus_prime_report,
    periodic_ext_dims,
    rational_ext_Bu,
    split_Mg,
    structured_series,
    theoremB_betti,
    theoremC_assemble,
)
from .modules import build_Bu, dualize, ell, is_sparse, sparse_subsets, sparse_tools
from .recursion import NuiDecomposition, compute_Nui, top_index
from .series import BigradedSeries, Laurent
from .tame import FreeNarrowSplit, TameReport, check_tame, free_narrow, is_narrow, quotient_mod_variable
from .yoneda import EpsilonRow, yoneda_eps_action

__all__ = [
    "Barcode",
    "BigradedSeries",
    "EpsilonRow",
    "ExtAssembly",
    "ExtSummand",
    "FreeNarrowSplit",
    "Laurent",
    "ModuleStructureError",
    "NuiDecomposition",
    "TameReport",
    "TamenessViolation",
    "TruncatedAlgebra",
    "WeightedModule",
    "adapted_generators",
    "augmentation_module",
    "barcode",
    "build_Bu",
    "check_tame",
    "cobar_ext_dims",
    "compute_Nui",
    "cyclic_module",
    "direct_sum",
    "dualize",
    "ell",
    "ext_of_Mg",
    "ext_of_barcode",
    "fake_basechange",
    "free_narrow",
    "generation_report",
    "genus_prime_report",
    "is_narrow",
    "is_sparse",
    "periodic_ext_dims",
    "quotient_mod_variable",
    "rational_ext_Bu",
    "sparse_subsets",
    "sparse_tools",
    "split_Mg",
    "structured_series",
    "theoremB_betti",
    "theoremC_assemble",
    "top_index",
    "yoneda_eps_action",
]
