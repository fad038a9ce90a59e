"""Exact computations with skew group algebras, induced exceptional collections and basic algebras."""
from .scalars import QQ, GF, Field
from .algebra import (Algebra, Quiver, path_algebra, matrix_algebra, quaternion_algebra,
                      tensor_power, radical, is_division_algebra, Undecided)
from .modules import (ModuleRep, regular_module, direct_sum, hom_space, end_algebra,
                      krs_decompose, iso_test, projective, simple_module, quiver_representation,
                      ext1_hereditary)
from .groups import FiniteGroup, Subgroup, cyclic_group, symmetric_group, named_group
from .grouprep import group_algebra, irreducibles
from .equivariant import (AlgebraAction, EquivariantModule, skew_algebra, to_skew_module,
                          from_skew_module, induce, equivariant_hom, end_of_induced)
from .theorems import (ExceptionalSetup, make_setup, validate_setup, induced_collection,
                       verify_main_theorem, basic_reduction, quiver_of_basic, demonet_check,
                       wreath_build)

__version__ = "0.1.0"

__all__ = ["QQ", "GF", "Field", "Algebra", "Quiver", "path_algebra", "matrix_algebra",
           "quaternion_algebra", "tensor_power", "radical", "is_division_algebra", "Undecided",
           "ModuleRep", "regular_module", "direct_sum", "hom_space", "end_algebra",
           "krs_decompose", "iso_test", "projective", "simple_module", "quiver_representation",
           "ext1_hereditary", "FiniteGroup", "Subgroup", "cyclic_group", "symmetric_group",
           "named_group", "group_algebra", "irreducibles", "AlgebraAction", "EquivariantModule",
           "skew_algebra", "to_skew_module", "from_skew_module", "induce", "equivariant_hom",
           "end_of_induced", "ExceptionalSetup", "make_setup", "validate_setup",
           "induced_collection", "verify_main_theorem", "basic_reduction", "quiver_of_basic",
           "demonet_check", "wreath_build"]
