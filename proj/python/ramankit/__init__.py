"""Spectral classification toolkit.

Preprocessing (outlier gate, Savitzky-Golay), five binary classifiers
(LRA, L2D, LRP, PCA, CNN), ten-fold cross-validated ROC-AUC, permutation
importance and gradient saliency maps. The heavy lifting lives in the C++
extension module.
"""

from ._core import (  # noqa: F401
    SpectraSet,
    TrainedCNN,
    __version__,
    cross_validate,
    extract_region,
    fit_pca,
    generate_preset,
    load_spectra,
    lrp_importance,
    merge,
    reference_axis,
    reject_outliers,
    roc_auc,
    run_evaluate,
    run_synth,
    save_spectra,
    sg_coefficients,
    smooth,
    train_cnn,
)

__all__ = [
    "SpectraSet",
    "TrainedCNN",
    "__version__",
    "cross_validate",
    "extract_region",
    "fit_pca",
    "generate_preset",
    "load_spectra",
    "lrp_importance",
    "merge",
    "reference_axis",
    "reject_outliers",
    "roc_auc",
    "run_evaluate",
    "run_synth",
    "save_spectra",
    "sg_coefficients",
    "smooth",
    "train_cnn",
]
