"""Hybrid symbolic knowledge-base engine.

Subpackages:

- ``hyperkb.dl``: SROIQ syntax, finite-model semantics and bounded reasoning
- ``hyperkb.owl``: SROIQ to OWL 2 translation as RDF graphs
- ``hyperkb.rdf``: RDF terms, indexed graphs, Turtle
- ``hyperkb.sparql``: a SELECT/BGP/property-path query subset
- ``hyperkb.hk``: Hyperknowledge bases and the HSL JSON format
- ``hyperkb.hyql``: the HyQL query language
- ``hyperkb.service``: journaled storage, REST service
"""

__version__ = "0.1.0"
