"""
Test suite for the inverted variational inequality toolkit
"""
