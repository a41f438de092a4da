"""helpcom: dependency-aware method comment generation and evaluation toolkit.

The pipeline extracts methods and their helper-method chains from source
repositories, generates method-level comments through pluggable completion
providers (baseline, immediate-helper, and full-chain prompt strategies),
and evaluates the results with syntactic, semantic, and LLM-judge metrics
aggregated into overall scores.
"""

__version__ = "0.1.0"
