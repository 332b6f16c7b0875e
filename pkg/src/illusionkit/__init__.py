"""illusionkit: procedural brightness-illusion stimuli with ground-truth
masks, localization metrics, and validated 2AFC psychophysics.

The toolkit regenerates a 22,366-image corpus of five illusion families
(plus non-illusion variants and transition stimuli), scores localization
outputs with pixel metrics and a combined MSE/SSIM loss, and runs
two-alternative forced-choice sessions with maximum-likelihood
psychometric fitting and illusory-reduction estimation.
"""

__version__ = "0.1.0"

from .errors import (
    CompatibilityError,
    ConfigurationError,
    DimensionError,
    FitError,
    GeometryError,
    IllusionKitError,
    ParameterError,
    ProtocolError,
)
from .stimuli import (
    CornsweetSpec,
    GratingSpec,
    GridSpec,
    HermannSpec,
    HoweSpec,
    MachBandSpec,
    NonIllusionSpec,
    SbcSpec,
    ShiftedWhiteSpec,
    WhiteSpec,
    check_equal_intensity,
    equal_intensity_regions,
    render_stimulus,
    spec_from_dict,
    spec_from_json,
    spec_id,
    spec_to_dict,
    spec_to_json,
    target_intensity,
)
from .metrics import (
    LossConfig,
    MetricsReport,
    binarize,
    classification_metrics,
    combined_loss,
    evaluate_directory,
    mask_iou,
    mse,
    otsu_localize,
    otsu_threshold,
    segmentation_metrics,
    ssim,
)
from .dataset import (
    ManifestEntry,
    SplitSpec,
    SweepConfig,
    augment_non_illusions,
    build_dataset,
    enumerate_sweep,
    make_splits,
    read_manifest,
    write_manifest,
)
from .psychophysics import (
    IllusoryReduction,
    PsychometricFit,
    PsychometricPoint,
    STANDARD_LEVELS,
    StandardTarget,
    TrialResult,
    TrialSpec,
    aggregate,
    default_comparator_specs,
    fit_psychometric,
    illusory_reduction,
    reduction_table,
    schedule_session,
    simulate_observer,
)
