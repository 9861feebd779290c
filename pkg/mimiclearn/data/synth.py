"""Synthetic VENT-like cohort generator.

Informative temporal variables drift over the days along one of two
trend regimes; the label latent is built from those trends plus a few
static severity scores, so temporal columns dominate importance rankings.
"""

import logging
import math
from typing import List

import numpy as np
from scipy.special import expit

from ..models import SynthConfig, Task
from .dataset import Dataset, VarKind

logger = logging.getLogger(__name__)

CONTINUOUS_STATIC_NAMES = [
    "PIM2S", "PRISM12ROM", "PRISM3", "PELOD", "Age", "Weight", "Height", "BMI",
    "Creatinine", "Albumin", "Bilirubin", "Platelets", "WBC", "Hemoglobin",
    "Glucose", "PreICUDays",
]
BINARY_STATIC_NAMES = [
    "Male", "Unplanned", "Trauma", "Sepsis", "Pneumonia", "Oncology", "Cardiac",
    "Neuro", "Immunocomp", "Chronic", "Readmit",
]
TEMPORAL_NAMES = [
    "MAP", "PaO2", "FiO2", "PH", "dPF", "OI", "LIS", "PF", "BE", "VE", "VT",
    "PIP", "PEEP", "HR", "RR", "SpO2", "PaCO2", "Lactate", "Temp", "SBP", "DBP",
]

# Share of static variables that are binary (11 of the 27 in the default layout)
_BINARY_SHARE = (11, 27)
_SLOPE_SHIFT = 0.5
_VFD_POSITIVE_RATE = 0.6


def _names(pool: List[str], count: int, prefix: str) -> List[str]:
    return [pool[i] if i < len(pool) else f"{prefix}{i + 1:02d}" for i in range(count)]


def synth_generate(cfg: SynthConfig) -> Dataset:
    """Generate a dataset deterministically from ``cfg.seed``.

    Args:
        cfg: Generator settings

    Returns:
        Dataset with NaN at planted missing entries and both label channels
    """
    cfg = SynthConfig.model_validate(cfg.model_dump())
    rng = np.random.default_rng(cfg.seed)
    n, q, p, t = cfg.n_samples, cfg.q_static, cfg.p_temporal, cfg.t_steps
    k_t, k_s = cfg.n_informative_temporal, cfg.n_informative_static

    n_binary = q * _BINARY_SHARE[0] // _BINARY_SHARE[1]
    n_continuous = q - n_binary
    static = np.empty((n, q), dtype=np.float64)
    static[:, :n_continuous] = rng.normal(size=(n, n_continuous))
    static[:, n_continuous:] = (rng.random((n, n_binary)) < 0.3).astype(np.float64)

    # Two trend regimes; informative variables rise in one and fall in the other
    regime_sign = 2.0 * rng.integers(0, 2, size=n) - 1.0
    base = rng.normal(0.0, 0.5, size=(n, p))
    slope = rng.normal(0.0, 0.25, size=(n, p))
    slope[:, :k_t] += _SLOPE_SHIFT * regime_sign[:, None]
    days = np.arange(t, dtype=np.float64)
    temporal = (
        base[:, None, :]
        + slope[:, None, :] * days[None, :, None]
        + rng.normal(0.0, 0.3, size=(n, t, p))
    )
    zero_day0 = list(range(p - cfg.n_zero_day0, p))
    temporal[:, 0, zero_day0] = 0.0

    latent = np.zeros(n)
    if k_t and t > 1:
        latent += 2.0 * slope[:, :k_t].mean(axis=1)
    if k_s:
        latent += 0.5 * static[:, :k_s].sum(axis=1) / math.sqrt(k_s)

    mor = rng.random(n) < expit(3.0 * latent - 1.0)
    spread = float(np.std(latent))
    vfd_latent = 0.8 * latent + 0.6 * (spread if spread > 0 else 1.0) * rng.normal(size=n)
    vfd = vfd_latent > np.quantile(vfd_latent, 1.0 - _VFD_POSITIVE_RATE)

    mor ^= rng.random(n) < cfg.label_noise
    vfd ^= rng.random(n) < cfg.label_noise

    static_mask = rng.random((n, q)) < cfg.missing_rate
    temporal_mask = rng.random((n, t, p)) < cfg.missing_rate
    temporal_mask[:, 0, zero_day0] = False
    # Keep one observed entry per variable so imputation stays defined
    static_mask[0, static_mask.all(axis=0)] = False
    fully_missing = temporal_mask.all(axis=(0, 1))
    temporal_mask[0, -1, fully_missing] = False

    static[static_mask] = np.nan
    temporal[temporal_mask] = np.nan

    static_names = _names(CONTINUOUS_STATIC_NAMES, n_continuous, "S") + _names(
        BINARY_STATIC_NAMES, n_binary, "B"
    )
    ds = Dataset(
        static=static,
        temporal=temporal,
        static_mask=static_mask,
        temporal_mask=temporal_mask,
        labels={Task.MOR: mor.astype(np.int64), Task.VFD: vfd.astype(np.int64)},
        static_names=static_names,
        temporal_names=_names(TEMPORAL_NAMES, p, "V"),
        static_kinds=[VarKind.CONTINUOUS] * n_continuous + [VarKind.BINARY] * n_binary,
        temporal_kinds=[VarKind.CONTINUOUS] * p,
        patient_ids=[f"P{i:04d}" for i in range(n)],
    )
    logger.info(
        f"Generated {n} synthetic samples (MOR rate {mor.mean():.3f}, "
        f"VFD rate {vfd.mean():.3f}, missing {ds.missing_fraction():.4f})"
    )
    return ds


def informative_temporal_names(cfg: SynthConfig) -> List[str]:
    """Names of the temporal variables carrying planted signal."""
    return _names(TEMPORAL_NAMES, cfg.p_temporal, "V")[: cfg.n_informative_temporal]
