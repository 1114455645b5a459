"""Contains figure output"""
