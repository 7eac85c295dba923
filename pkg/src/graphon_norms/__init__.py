"""Norms, homomorphism densities and norm-inequality checks for step graphons."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    ExactLimitExceeded,
    GraphonError,
    KernelValidationError,
    NonConvergenceError,
    NotAGraphonError,
    SchemaError,
)
from .kernel import (  # noqa: E402
    AdjacencyGraph,
    StepGraphon,
    StepKernel,
    apply_operator,
    as_graphon,
    builtin_graphon,
    evaluate,
    graphon_from_adjacency,
    kernel_difference,
    make_step_kernel,
    sample_graph,
)
from .norms import (  # noqa: E402
    CutCertificate,
    NormConfig,
    NormReport,
    SignCertificate,
    cut_norm_exact,
    cut_norm_heuristic,
    full_norm_report,
    hs_norm,
    op_norm_22,
    op_norm_inf1_exact,
    op_norm_inf1_heuristic,
)
from .homomorphism import (  # noqa: E402
    ErrataWitness,
    Motif,
    cycle_density_spectral,
    edge_density,
    errata_gap,
    hom_density,
)
from .verify import (  # noqa: E402
    FamilyReport,
    FamilySpec,
    LemmaReport,
    check_cut_norm_lemma,
    check_operator_norm_lemma,
    check_proposition,
    random_step_kernel,
    verify_family,
)
