"""Indirect (rank-encoded) QAOA for the job-shop scheduling problem."""

from ._backend import BACKEND
from .instance import JsspInstance, Operation, load_fixture, parse_instance, total_vector_count

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "JsspInstance",
    "Operation",
    "load_fixture",
    "parse_instance",
    "total_vector_count",
]
