"""Ethically-informed classical planning toolkit.

Pipeline: planning task + high-level principles -> reviewable ethical
rules -> cost-compiled plain PDDL -> optimal plans, baseline vs ethical.
"""

__version__ = "0.1.0"
