"""Reconstruction of band-limited signals from nonuniform, noisy samples."""

from .act import act_reconstruct, act_reconstruct_2d, default_weights, vandermonde_lsq_oracle
from .estimators import MultilevelRegressor, TrigPolyRegressor, TruncatedFrameRegressor
from .frame import estimate_tau, reconstruct_cg, reconstruct_tsvd
from .multilevel import multilevel_reconstruct, multilevel_reconstruct_2d
from .signals import (SampleVector, SamplingSet, SamplingSet2D, TrigPoly, TrigPoly2D,
                      add_noise, generate_bandlimited, generate_bandlimited_2d,
                      jittered_set, random_set, relative_error)

__version__ = "0.1.0"
