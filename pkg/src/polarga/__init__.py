"""Gaussian-approximation construction and analysis of polar codes."""
