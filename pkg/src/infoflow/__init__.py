"""Information flow through deterministic maps, measured on finite meshes."""
from .discretize import (
    Mesh,
    bernoulli_cell_joint,
    bin_index,
    exact_bernoulli_joint,
    joint_from_samples,
    pairs_from_map,
)
from .dynamics import (
    Acip,
    Bernoulli,
    DensityEstimate,
    PiecewiseLinear,
    Rotation,
    SineBox,
    TruncatedGaussian,
    Uniform,
    derivative,
    estimate_acip,
    evaluate,
    generate_trajectory,
    sample_distribution,
)
from .prob import (
    DiscreteDist,
    InfoValue,
    JointDist2,
    JointDist3,
    conditional_mutual_information,
    disintegrate,
    disintegrated_cmi,
    kl_divergence,
    markovize,
    mutual_information,
    shannon_entropy,
)

__version__ = "0.1.0"
