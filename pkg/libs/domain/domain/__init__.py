"""
Logic-language layer: terms and formulas of arithmetic with Skolem symbols,
their concrete syntax, normal forms and Godel codes.
"""
