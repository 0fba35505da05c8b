from spdelab.operation.factories import certify, kolmogorov, picard, simulate
from spdelab.operation.report import summarize

__all__ = ["certify", "kolmogorov", "picard", "simulate", "summarize"]
