"""Preset metadata for the mixing engine."""
