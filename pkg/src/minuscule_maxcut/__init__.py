"""Exact max-cut certificates for the (-1)-divisor multigraphs of minuscule surfaces X_{a,b,c}."""
from .certificates import (BoundsReport, CertificateReport, DualCertificate, Embedding, bounds_closed_form,
                           build_embedding, certify, dual_certificate, gw_alpha_constant, lattice_embedding,
                           performance_ratio, sd_primal, verify_strong_duality)
from .models import build_model, build_type_a, build_type_d, check_model_agreement, s_k_closed_form, weight_coordinates
from .multigraph import Cut, Multigraph, cut_weight, weight_histogram, weighted_degree
from .oracle import OracleResult, brute_force_maxcut, local_search_maxcut
from .picard import (MinusculeParams, ParamsError, PicardClass, build_params, graph_from_divisors, lattice_graph,
                     minus_one_divisors, params_for_family)
from .report import RunConfig, export_graph, full_report_row
from .rounding import CutStats, EmbeddingFactor, factorize_embedding, sample_cut, simulate
from .spectral import (Spectrum, SrmgCertificate, closed_form_spectrum, spectrum_from_srmg, verify_spectrum_exact,
                       verify_srmg)

__all__ = [
    "BoundsReport",
    "CertificateReport",
    "DualCertificate",
    "Embedding",
    "bounds_closed_form",
    "build_embedding",
    "certify",
    "dual_certificate",
    "gw_alpha_constant",
    "lattice_embedding",
    "performance_ratio",
    "sd_primal",
    "verify_strong_duality",
    "build_model",
    "build_type_a",
    "build_type_d",
    "check_model_agreement",
    "s_k_closed_form",
    "weight_coordinates",
    "Cut",
    "Multigraph",
    "cut_weight",
    "weight_histogram",
    "weighted_degree",
    "OracleResult",
    "brute_force_maxcut",
    "local_search_maxcut",
    "MinusculeParams",
    "ParamsError",
    "PicardClass",
    "build_params",
    "graph_from_divisors",
    "lattice_graph",
    "minus_one_divisors",
    "params_for_family",
    "RunConfig",
    "export_graph",
    "full_report_row",
    "CutStats",
    "EmbeddingFactor",
    "factorize_embedding",
    "sample_cut",
    "simulate",
    "Spectrum",
    "SrmgCertificate",
    "closed_form_spectrum",
    "spectrum_from_srmg",
    "verify_spectrum_exact",
    "verify_srmg",
]

__version__ = "0.1.0"
