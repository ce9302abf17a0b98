"""Exact enumeration and formula checks for gluings of polygons into surfaces."""

from .arcs import (FaceProfile, GluingDiagram, arc_color, face_permutation, format_diagram, genus,
                   is_bicolored_valid, is_connected, parse_diagram, vertex_permutation)
from .deletion import DeletionOutcome, audit_lemma_multiplicities, classify, delete_marked_edge
from .enumeration import (EnumerationTask, compositions, count_bicolored, count_eps, count_eps_tilde,
                          enumerate_diagrams, genus_spectrum)

__version__ = "0.1.0"
