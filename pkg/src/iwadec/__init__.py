"""Decision engine for cyclicity of the unramified Iwasawa module of an
imaginary quadratic field over the two-variable Iwasawa algebra."""

from .casefile import CaseInput, ValidationError, load, serialize, validate
from .decision import (CYCLIC, NONCYCLIC, UNDETERMINED, ActionCoefficients,
                       MuValuations, NotApplicable, TowerData, Verdict,
                       decide_cyclic_thm512, decide_generators_thm11,
                       fujii_layer, minardi_subset, ord_mu_from_action,
                       prop_test_sufficient)
from .modclass import (FiniteLevelData, GeneratorFrame, ModuleClass,
                       class_group_structure_from_k, fitting_ideals_Mk,
                       infer_k, koike_partner, s_action_matrix,
                       synthesize_finite_level)
from .padic import (Indeterminate, InsufficientPrecision, IwasawaPoly, NoRoot,
                    PadicElem, SplittingData, base_field, hensel_roots,
                    splitting_from_roots, splitting_type, unramified_field)
from .pipeline import Report, analyze, load_corpus, regenerate_tables

__version__ = "0.1.0"

__all__ = [
    "CYCLIC", "NONCYCLIC", "UNDETERMINED",
    "ActionCoefficients", "CaseInput", "FiniteLevelData", "GeneratorFrame",
    "Indeterminate", "InsufficientPrecision", "IwasawaPoly", "ModuleClass",
    "MuValuations", "NoRoot", "NotApplicable", "PadicElem", "Report",
    "SplittingData", "TowerData", "ValidationError", "Verdict", "analyze",
    "base_field", "class_group_structure_from_k", "decide_cyclic_thm512",
    "decide_generators_thm11", "fitting_ideals_Mk", "fujii_layer",
    "hensel_roots", "infer_k", "koike_partner", "load", "load_corpus",
    "minardi_subset", "ord_mu_from_action", "prop_test_sufficient",
    "regenerate_tables", "s_action_matrix", "serialize",
    "splitting_from_roots", "splitting_type", "synthesize_finite_level",
    "unramified_field", "validate",
]
