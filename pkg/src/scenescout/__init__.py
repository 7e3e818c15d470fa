"""scenescout: street-view imagery as structured, screen-reader-ready text.

Grounds an agent at geographic coordinates, pulls routes, panoramas, and
places through pluggable providers, drives a multimodal language model
through versioned prompt templates, and exposes two session types (Route
Preview, Virtual Exploration) over HTTP plus a CLI and an evaluation
harness for the generated descriptions.
"""

__version__ = "0.1.0"
