"""Exact symbolic engine for cluster variables attached to graphs on trees:
determinantal cluster variables, closed-form Laurent expansions over rooted
clusters, weighted hyper-path enumeration, and identity verification suites.
"""

__version__ = '0.1.0'
