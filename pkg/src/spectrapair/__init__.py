"""Spectral pairs: measures whose L^2 space has an orthonormal basis of exponentials."""
from .atomic import (
    AtomicMeasure,
    FrequencySet,
    atomic_fourier_transform,
    exp_matrix,
    is_spectrum_atomic,
    residue_form,
    translation_equivalent_atomic,
)
from .density import (
    CongruencePartition,
    StepDensity,
    SpectrumVerdict,
    build_from_partition,
    c_phi,
    c_phi_poisson,
    check_translation_congruent,
    F_phi,
    fold_to_cube,
    fourier_transform,
    has_spectrum_Zd,
    moment,
    refine_to_grid,
    translation_equivalent_density,
    verify_partition_of_unity,
)
from .exactnum import RationalBox, box_exp_integral, interval_exp_integral, unit_exp
from .ifs import (
    AffineIFS,
    attractor_interval,
    extreme_cycles,
    gamma_slice,
    is_hadamard_pair,
    m_B,
    mu_hat_ifs,
    non_equivalence_certificate,
    spectral_sum,
    support_cover,
)
from .localtrans import SpectralExpansion, analyze, intertwine, local_translate, synthesize_pointwise

__version__ = "0.1.0"
