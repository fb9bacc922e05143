"""Thin-layer-quantization geometry and effective quantum operators on curved surfaces."""

from ._core import (
    Operator,
    Surface,
    builtin_surfaces,
    spectrum,
    verify_cone,
)

__all__ = ["Surface", "Operator", "builtin_surfaces", "spectrum", "verify_cone"]
