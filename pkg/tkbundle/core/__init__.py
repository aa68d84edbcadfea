"""
Core computations for jets, connections and their bundle structures
"""
