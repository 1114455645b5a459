"""Contains the combinatorial analyses: separable sets, arrangements, reductions, pseudo-discs"""
