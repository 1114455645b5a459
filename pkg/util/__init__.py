"""Contains utility functions and classes for common usages"""
