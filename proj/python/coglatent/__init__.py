"""Corrected combinations of Gaussian latents."""

from ._core import *  # noqa: F401,F403
from ._core import (
    BadDtype,
    BadFlags,
    BadMagic,
    BadReserved,
    BadVersion,
    CogError,
    DegenerateWeights,
    DimensionMismatch,
    DimensionOverflow,
    FormatError,
    GaussianSpec,
    InvalidArgument,
    IoError,
    NonFinite,
    NotInSubspace,
    RankDeficient,
    SpecConfigError,
    SubspaceBasis,
    TrailingBytes,
    Truncated,
    WeightVec,
)

__version__ = "0.1.0"
