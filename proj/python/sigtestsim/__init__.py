"""Paired significance tests and copula-based simulation of paired scores."""

try:
    # installed layout: the extension lives inside the package
    from ._sigtestsim import (  # noqa: F401
        SigtestsimError,
        StochasticModel,
        bootstrap_shift_test,
        exact_permutation_p,
        permutation_test,
        required_replicas,
        run_experiment,
        sign_test,
        synth_matrix,
        t_test,
        wilcoxon_test,
    )
except ImportError:
    # development layout: extension on sys.path next to the build tree
    from _sigtestsim import (  # noqa: F401
        SigtestsimError,
        StochasticModel,
        bootstrap_shift_test,
        exact_permutation_p,
        permutation_test,
        required_replicas,
        run_experiment,
        sign_test,
        synth_matrix,
        t_test,
        wilcoxon_test,
    )

__all__ = [
    "SigtestsimError",
    "StochasticModel",
    "bootstrap_shift_test",
    "exact_permutation_p",
    "permutation_test",
    "required_replicas",
    "run_experiment",
    "sign_test",
    "synth_matrix",
    "t_test",
    "wilcoxon_test",
]
