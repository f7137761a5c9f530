"""
Tests package for the MHD solver
"""
