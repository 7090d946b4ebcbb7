"""Compiled kernels; see :mod:`codecontrast.kernels` for the dispatching front end."""
