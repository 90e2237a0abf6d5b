"""Exposure-bracket fusion."""
