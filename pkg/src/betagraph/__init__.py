"""Ultrafilter extensions of digraphs, computed on finite data and finite presentations."""
from .budget import Budget, BudgetExceeded
from .digraph import Colouring, Digraph, chromatic_number
from .presentation import Block, BlockGraph, EdgeAtom, Generic, Point, PresentedSet, Vertex, cofin, fin, truncate
from .small import Relation, RectangleCover, is_cover, min_cover
from .ultrafilter import SetFamily, Ultrafilter, has_fip

__version__ = "0.1.0"
