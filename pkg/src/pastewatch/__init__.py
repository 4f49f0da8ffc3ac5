"""pastewatch: just-in-time Extract Method recommendation toolkit.

Detects pasted duplicate code in Java-subset sources, characterizes
fragments with a fixed 78-metric vector, classifies extraction-worthiness
with a small 1D CNN (plus four baselines), and applies the Extract Method
transformation. Exposed as a library, a CLI, and a paste-watching HTTP
service.
"""

__version__ = "0.1.0"
