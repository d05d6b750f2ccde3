"""gmrobust: global correctness and robustness evaluation of image
classifiers against generative models, with latent-space adversarial
example search."""

__version__ = "0.1.0"

from .attacks import (AttackParams, RealisticAdvExample, black_box_attack,
                      verify_adv_example, white_box_attack)
from .errors import (CompositionError, ConfigurationError, DimensionError,
                     GmRobustError, GridTooLargeError, ModelFormatError,
                     NonFiniteError)
from .estimator import (EstimateReport, RobustnessReport,
                        confidence_interval, estimate_global_correctness,
                        estimate_global_robustness, report_to_text)
from .experiments import (ComparisonReport, WalkConfig, compare_generators,
                          mine_outliers, random_walk, render_pgm)
from .model_io import (load_model, load_model_path, parse_model_file,
                       save_model, save_model_path)
from .network import (Layer, Network, Prediction, classify, classify_batch,
                      compose, forward, generator_part, gradient,
                      identity_network)
from .tensor import (RngStream, activate, affine, as_tensor,
                     gaussian_matrix, sample_gaussian)
from .vectors import load_vector, save_vector
from .verifier import (IntervalVector, Verdict, certify, grid_falsify,
                       ibp_propagate)
