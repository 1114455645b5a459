"""Contains exact planar geometry, instance files and generators"""
