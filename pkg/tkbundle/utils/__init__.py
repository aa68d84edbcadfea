"""
Utility functions for the higher-order tangent bundle engine
"""
