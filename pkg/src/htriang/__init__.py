"""Particular H-triangulations of knots in closed 3-manifolds, their gluing
equations, the abelianized ring of oriented short edges, and the comparison
map between the two rings on exact unit skeletons."""

__version__ = "0.1.0"
