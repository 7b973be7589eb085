"""Regression through binary-encoded labels (BEL).

Codes, quantization, decoders, losses, classifier error models, closed-form
error bounds, Monte-Carlo validation and a toy numpy trainer.
"""

from belreg.codebook import (
    CodeKind,
    CodeMatrix,
    CodeMetrics,
    gen_base_johnson,
    gen_hadamard,
    gen_hexj,
    gen_johnson,
    gen_unary,
    make_code,
    metrics,
)
from belreg.decoder import decode_gen, decode_gen_ex, decode_johnson, decode_unary, threshold
from belreg.error_model import ClassifierErrorModel, error_prob, model_from_code
from belreg.losses import LossResult, bce_loss, ce_loss, regression_loss
from belreg.quantizer import QuantizationSpec, dequantize, quantize

__version__ = "0.1.0"
