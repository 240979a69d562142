"""Bilingual retrieval-grounded teaching-assistant forum.

Learners post questions into cohort-scoped forums; an AI facilitator answers
each question once, grounding its answer in passages retrieved from course
material and citing them. Humans answer, vote, and accept. An evaluation
harness recomputes the deployment report metrics from labeled records.
"""

__version__ = "0.1.0"
