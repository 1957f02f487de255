"""A-infinity categories, functors, homotopy transfer and homology products."""

from .category import (
    AInftyCategory, DegreeRuleError, Gen, MalformedCategory, chain_associativity_defects, check_ainfty,
    dagger, leibniz_defect, maltese, relation_terms, relation_value,
)
from .functor import AInftyFunctorData, check_functor, identity_functor
from .homology import HomologyAlgebra, homology_product
from .transfer import Contraction, Transfer, gaussian_contraction, transfer, verify_contraction

__all__ = [
    "AInftyCategory", "AInftyFunctorData", "Contraction", "DegreeRuleError", "Gen", "HomologyAlgebra",
    "MalformedCategory", "Transfer", "chain_associativity_defects", "check_ainfty", "check_functor",
    "dagger", "gaussian_contraction", "homology_product", "identity_functor", "leibniz_defect", "maltese",
    "relation_terms", "relation_value", "transfer", "verify_contraction",
]
