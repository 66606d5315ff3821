"""lessonsgraph: turn multisource engineering documents into a searchable,
typed, weighted knowledge graph of failure cases, project elements and
product specifications."""

__version__ = "0.1.0"
