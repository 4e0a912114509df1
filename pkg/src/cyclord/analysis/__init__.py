"""Quantitative tameness diagnostics on finite samples."""
