"""Exact q-series characters, partial theta functions, quasimodular
asymptotics, and their verification suites."""

__version__ = "0.1.0"
