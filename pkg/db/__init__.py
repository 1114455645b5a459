"""Database files"""
