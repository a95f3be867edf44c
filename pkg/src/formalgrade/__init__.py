"""Exercise engine for automata and formal-language courses.

Grading with partial credit and explanatory feedback for fourteen problem
types, automatic problem generation, and a course/attempt service. See the
module map in the README; the `formalgrade` command drives everything from
the shell.
"""

__version__ = "0.1.0"
