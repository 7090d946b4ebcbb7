"""Evaluation: clone-detection probes, metrics, attacks and corpus generation."""
