"""Bigraded differential algebra on almost Kahler structures.

Finite-dimensional invariant models and sampled periodic grids share one
operator calculus: the four bidegree components of the differential, the
Lefschetz pair, duality maps, harmonic spaces, and the verification suites
that grade the standard identities on each model.

Attributes resolve lazily (PEP 562) so that the command-line entry point can
pin the BLAS thread environment before numpy is first imported.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = ("exterior", "bigraded", "liemodel", "grid", "operators",
               "constants", "verification", "report", "errors", "cli")

_EXPORTS = {
    "BigradedForm": "bigraded",
    "HermitianFrame": "bigraded",
    "inner_product": "bigraded",
    "LieModel": "liemodel",
    "load_model": "liemodel",
    "model_from_dict": "liemodel",
    "CATALOG": "liemodel",
    "GridModel": "grid",
    "GridForm": "grid",
    "build_grid": "grid",
    "convergence_study": "grid",
    "convergence_suite": "grid",
    "harmonic_dims": "grid",
    "Operator": "operators",
    "joint_kernel": "operators",
    "harmonic_space": "operators",
    "solve_in_image": "operators",
    "star_operator": "operators",
    "d_lambda_operator": "operators",
    "graded_commutator": "operators",
    "laplacian_of": "operators",
    "croke_constants": "constants",
    "verify_model": "verification",
    "available_suites": "verification",
    "VerificationReport": "verification",
    "Entry": "verification",
    "report_to_json": "report",
    "report_to_markdown": "report",
    "report_as_dict": "report",
    "AkhError": "errors",
    "ArgumentError": "errors",
    "ConsistencyError": "errors",
    "ModelValidationError": "errors",
    "SolvabilityError": "errors",
}

__all__ = sorted(set(_EXPORTS) | set(_SUBMODULES))


def __getattr__(name):
    if name in _SUBMODULES:
        return importlib.import_module(f".{name}", __name__)
    home = _EXPORTS.get(name)
    if home is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    return getattr(importlib.import_module(f".{home}", __name__), name)


def __dir__():
    return sorted(set(globals()) | set(__all__))
