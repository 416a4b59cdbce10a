"""
Theorem-family suites available for operator_means.
"""
