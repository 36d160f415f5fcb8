"""Exact weight-system computations for Vassiliev invariants of string links."""
