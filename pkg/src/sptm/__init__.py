"""Exact computation with stochastic process Turing machines."""

from .analysis import (
    JointLaw,
    ModalOutput,
    PosteriorLaw,
    bayes_inverse,
    build_joint,
    modal_mass,
    modal_output,
    totality_probe,
)
from .stochastic_depth import (
    DepthReport,
    class_probes,
    depth,
    depth_report,
    det_limit_report,
    fanin_depth,
    path_depth,
)
from .engine import ForwardAnalysis, TrajectoryLaw, explore, nonhalt_bound_check, trajectory_law
from .entropy import EntropyProfile, endpoint_comparison, entropy_profile, expected_backward_entropy, step_entropies
from .machine import (
    Configuration,
    HaltStatus,
    MachineSpec,
    TransitionRule,
    classify_halt,
    parse_machine,
    run_pure,
    serialize_machine,
    step,
)
from .priors import Prior, enumerate_halting_set, kraft_check, make_prior, surprisal
from .zoo import ZOO_NAMES, zoo_entry, zoo_machine

__version__ = "0.1.0"
