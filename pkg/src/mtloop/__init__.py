"""mtloop: a desk-scale translation service for a low-resource language pair.

Backbone pieces: a miniature phrase-based statistical translator, a
pluggable neural-decoder contract with beam search, quality estimation
rendered as 0-5 stars, feedback capture, and a retraining loop that folds
expert corrections back into the training data.
"""

__version__ = "0.1.0"
