"""Gray codes for multiset permutations under star transpositions."""

from .certificate import Certificate, HamPath, parse_certificate
from .flip_graph import FlipGraph, SubgraphView, flip_graph, restrict
from .ham_lab import check_property, search_ham_cycle, search_ham_path, verify
from .partition_core import FrequencyVector, as_partition, classify, delta
from .path_composer import Composer, gray_code

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "Composer",
    "FlipGraph",
    "FrequencyVector",
    "HamPath",
    "SubgraphView",
    "as_partition",
    "check_property",
    "classify",
    "delta",
    "flip_graph",
    "gray_code",
    "parse_certificate",
    "restrict",
    "search_ham_cycle",
    "search_ham_path",
    "verify",
]
