"""Plane curves with a unit normal frame: curvature, reconstruction,
transformation laws, zero signatures and equivalence decisions."""

from .curves import (CurvaturePair, LegendreCurve, check_closed,
                     check_legendre, curvature, derive_nu, dump_curve,
                     is_immersion, load_curve, moving_frame)
from .errors import (CofactorError, CurveError, DegenerateCurveError,
                     ExprSyntaxError, GridMismatchError, JetDomainError,
                     JetOrderError, LegendreError, RootScanError,
                     SignatureError, TransformError)
from .exprs import (ScalarFun, eval_bijet, eval_jet, parse_expr, pretty_print,
                    substitute_params)
from .gallery import (GALLERY_NAMES, GalleryEntry, check_ab_assumption,
                      default_gallery, gallery)
from .jets import (BiJet2, DEFAULT_ORDER, TaylorJet, derivative_at, jet_arith,
                   jet_elementary)
from .normal_forms import (GERM_CASES, GermData, GermSignature, ZERO_FUNCTION,
                           germ_signature, germ_signature_of_curve,
                           local_normal_form, type_nm_curvature, type_nm_curve)
from .reconstruction import (AlignResult, Congruence, SampledCurve,
                             align_congruence, reconstruct, richardson_defect,
                             sample_curve, sampled_curvature)
from .signatures import (EquivalenceVerdict, Signature, SignatureConfig,
                         ZeroPoint, cofactor, contact_order,
                         decide_equivalence, dump_signature, find_zeros,
                         parity_check, signature, signature_from_dict,
                         signature_to_dict)
from .transforms import (AffineMap, DiffeoCurve, DiffeoSpec, TransformResult,
                         negate, pushforward_affine, pushforward_diffeo,
                         pushforward_diffeo_curve, pushforward_swap,
                         reparametrize)

__version__ = "0.1.0"

__all__ = [
    "AffineMap", "AlignResult", "BiJet2", "CofactorError", "Congruence",
    "CurvaturePair", "CurveError", "DEFAULT_ORDER", "DegenerateCurveError",
    "DiffeoCurve", "DiffeoSpec", "EquivalenceVerdict", "ExprSyntaxError",
    "GALLERY_NAMES", "GERM_CASES", "GalleryEntry", "GermData", "GermSignature",
    "GridMismatchError", "JetDomainError", "JetOrderError", "LegendreCurve",
    "LegendreError", "RootScanError", "SampledCurve", "ScalarFun", "Signature",
    "SignatureConfig", "SignatureError", "TaylorJet", "TransformError",
    "TransformResult", "ZERO_FUNCTION", "ZeroPoint", "align_congruence",
    "check_ab_assumption", "check_closed", "check_legendre", "cofactor",
    "contact_order", "curvature", "decide_equivalence", "default_gallery",
    "derivative_at", "derive_nu", "dump_curve", "dump_signature", "eval_bijet",
    "eval_jet", "find_zeros", "gallery", "germ_signature",
    "germ_signature_of_curve", "is_immersion", "jet_arith", "jet_elementary",
    "load_curve", "local_normal_form", "moving_frame", "parity_check",
    "parse_expr", "pretty_print", "pushforward_affine", "pushforward_diffeo",
    "pushforward_diffeo_curve", "pushforward_swap", "reconstruct",
    "reparametrize", "richardson_defect", "sample_curve", "sampled_curvature",
    "signature", "signature_from_dict", "signature_to_dict",
    "substitute_params", "type_nm_curvature", "type_nm_curve",
]
