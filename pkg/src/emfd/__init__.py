"""Exact-arithmetic toolkit for e-manifold invariants and triple linking.

Everything is computed over Q with fractions.Fraction; there are no floats
and no tolerances anywhere.  The layers, bottom to top:

  exactlin   symmetric forms, signatures, exact affine solving
  cohomring  finite graded-commutative cohomology models with integration
  charclass  Pontryagin data, sphere bundles, the characteristic pair chi
  emanifold  (quasi) e-class data, the sigma invariant, Haefliger numbers
  linkdiag   oriented link diagrams from PD codes
  seifert    Seifert surfaces, Seifert matrices, link signatures
  milnor     Magnus/Wirtinger computation of the triple linking number
  cli        the `emfd` command: JSON I/O and verification suites
"""

from .exactlin import SymmetricForm, rat, rat_from_str, rat_to_str, signature
from .cohomring import CohomModel, Element, ModelError, model_from_json, model_to_json
from .charclass import Bundle3Data, build_sphere_bundle, chi, xi, phi, normal_sphere_chi
from .emanifold import (
    FramedHaefligerData,
    QuasiEData,
    SeifertGeometricData,
    eclass_solve,
    haefliger,
    sigma_geometric,
    sigma_quasi,
)
from .linkdiag import LinkDiagram, PDError, parse_pd, linking_matrix
from .seifert import SeifertData, link_signature, seifert_matrix
from .milnor import MilnorError, milnor_sigma_model, mu123, sigma_of_link

__version__ = "0.1.0"

__all__ = [
    "SymmetricForm", "rat", "rat_from_str", "rat_to_str", "signature",
    "CohomModel", "Element", "ModelError", "model_from_json", "model_to_json",
    "Bundle3Data", "build_sphere_bundle", "chi", "xi", "phi", "normal_sphere_chi",
    "FramedHaefligerData", "QuasiEData", "SeifertGeometricData",
    "eclass_solve", "haefliger", "sigma_geometric", "sigma_quasi",
    "LinkDiagram", "PDError", "parse_pd", "linking_matrix",
    "SeifertData", "link_signature", "seifert_matrix",
    "MilnorError", "milnor_sigma_model", "mu123", "sigma_of_link",
    "__version__",
]
