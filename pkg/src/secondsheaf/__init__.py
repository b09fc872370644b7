"""Second spectrum, dual Zariski topology and the structure sheaf O(N, M)
of finite modules over finite commutative rings, with exhaustive checks."""

from .document import DocumentError, load_instance
from .errors import (CapacityError, PreconditionError, SecondSheafError, StructuralError,
                     TheoremViolation)
from .guards import Guards, default_guards
from .localization import (IdealTransform, LocalizedModule, TorsionSubmodule, gamma_torsion,
                           ideal_transform, is_torsion, localize_module)
from .modules import (FiniteModule, HomModule, ModuleMap, Submodule, direct_sum,
                      find_isomorphism, hom_module, homomorphisms, is_isomorphic, quotient)
from .morphisms import (LocallyRingedMorphism, SheafMorphism, check_induced,
                        induced_sheaf_morphism, mono_induced_locally_ringed, ring_hom_induced,
                        verify_scheme)
from .report import CheckRecord
from .rings import FiniteRing, Ideal, RingMap
from .sheaf import SectionModule, Stalk, StructureSheaf, structure_sheaf
from .spectra import SecondPoint, SecondSpectrum, is_second, second_spectrum
from .topology import DualZariskiTopology, OpenSet, ZariskiTopology, dual_zariski
from .verification import TheoremSuite, theorem_suite

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CheckRecord",
    "DocumentError",
    "DualZariskiTopology",
    "FiniteModule",
    "FiniteRing",
    "Guards",
    "HomModule",
    "Ideal",
    "IdealTransform",
    "LocalizedModule",
    "LocallyRingedMorphism",
    "ModuleMap",
    "OpenSet",
    "PreconditionError",
    "RingMap",
    "SecondPoint",
    "SecondSheafError",
    "SecondSpectrum",
    "SectionModule",
    "SheafMorphism",
    "Stalk",
    "StructuralError",
    "StructureSheaf",
    "Submodule",
    "TheoremSuite",
    "TheoremViolation",
    "TorsionSubmodule",
    "ZariskiTopology",
    "check_induced",
    "default_guards",
    "direct_sum",
    "dual_zariski",
    "find_isomorphism",
    "gamma_torsion",
    "hom_module",
    "homomorphisms",
    "ideal_transform",
    "induced_sheaf_morphism",
    "is_isomorphic",
    "is_second",
    "is_torsion",
    "load_instance",
    "localize_module",
    "mono_induced_locally_ringed",
    "quotient",
    "ring_hom_induced",
    "second_spectrum",
    "structure_sheaf",
    "theorem_suite",
    "verify_scheme",
]
