"""Experiment runner, output writers and CLI."""
