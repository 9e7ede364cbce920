"""Rewriting, typing and encoding services over starx terms."""
