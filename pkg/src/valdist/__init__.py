"""Numerical value distribution on the disc: characteristic functions, bubbles, currents and tautological identities."""

from .funcspace import GaussQ, Poly, RationalMap, RootMultiset, all_roots, radical_degree, roots_in_disc
from .greenjensen import CONVENTION, DEFAULT_QUAD, QuadratureSpec, RadialDensity, boundary_mean, jensen_residual, nabla_integral
from .projective import MetricizedDivisor, ProjPoint, chordal_distance, fs_pullback_density, weil
from .nevanlinna import characteristic_geometric, counting, fmt_check, proximity
from .bubbles import Bubble, DiscWithBubbles, GraphSample, detect_concentration, graph_sample, gromov_harness, hausdorff_distance, nabla_bubble
from .currents import CurrentSample, ExactForm, TestFormBasis, exactness_decay, limit_points, normalized_pairings, positivity_check
from .tautological import LogMetric, log_rh_check, mason_check, rh_check, taut_identity_check, taut_inequality_experiment

__version__ = "0.1.0"
