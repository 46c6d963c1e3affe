"""Exact maximum-weight induced subgraphs of bounded treewidth, parameterized by induced matching treewidth."""

__version__ = "0.1.0"
