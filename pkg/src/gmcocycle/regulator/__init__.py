"""Numeric d log regulator oracle for KElements."""
from .core import (RegulatorReport, SamplePlan, compare, complex_fiber,
                   draw_samples, evaluate, evaluate_many, fmt_real)
from .kernels import BACKEND as KERNEL_BACKEND

__all__ = ["RegulatorReport", "SamplePlan", "compare", "complex_fiber", "draw_samples",
           "evaluate", "evaluate_many", "fmt_real", "KERNEL_BACKEND"]
