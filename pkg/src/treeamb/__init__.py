"""Parity tree automata over regular infinite binary trees.

Membership via parity games, run-count-aware constructions, and a
classifier for the number of accepting runs on a tree (exact, at-least,
countably infinite, or uncountable with checkable witnesses).
"""
