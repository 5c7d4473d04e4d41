"""Exact graded Betti numbers and windowed regularity over quotient algebras and homomorphisms."""

__version__ = "0.1.0"

from .errors import GradedRegError, InputError, WindowError
from .exactlinalg import ExactMatrix, FieldSpec
from .polyring import AlgebraTable, RingDesc, build_algebra_table, parse_polynomial, stanley_reisner_ring
from .gradedcat import (ComplexTable, ModuleTable, cyclic_quotient, fractional_veronese, koszul_complex,
                        pushforward, residue_field, veronese_algebra, veronese_piece)
from .resolve import (BettiTable, RegularityVerdict, bar_tor_oracle, betti_table, is_koszul, lind,
                      minimal_free_resolution, module_regularity, regularity, resolve)
from .regmorph import (OrderedHom, artinian_shortcut, composition_tower, frobenius_hom, hom_from_polynomials,
                       reg_over_hom)
from .suites import verify_suite

__all__ = [
    "GradedRegError", "InputError", "WindowError",
    "ExactMatrix", "FieldSpec",
    "AlgebraTable", "RingDesc", "build_algebra_table", "parse_polynomial", "stanley_reisner_ring",
    "ComplexTable", "ModuleTable", "cyclic_quotient", "fractional_veronese", "koszul_complex",
    "pushforward", "residue_field", "veronese_algebra", "veronese_piece",
    "BettiTable", "RegularityVerdict", "bar_tor_oracle", "betti_table", "is_koszul", "lind",
    "minimal_free_resolution", "module_regularity", "regularity", "resolve",
    "OrderedHom", "artinian_shortcut", "composition_tower", "frobenius_hom", "hom_from_polynomials",
    "reg_over_hom", "verify_suite",
]
