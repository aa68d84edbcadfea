"""
Command-line tools for the bundle engine.
"""
