"""Spectral order of contact structures from open book and Heegaard diagram data.

Modules:

* :mod:`~spectral_order.diagram` -- combinatorial Heegaard diagrams and measures
* :mod:`~spectral_order.surface` -- pages, normal paths and Dehn twists
* :mod:`~spectral_order.openbook` -- open books and the diagrams they determine
* :mod:`~spectral_order.floer` -- generators, domains, J+ and the graded differential
* :mod:`~spectral_order.spectral` -- filtered complexes over F2 and the spectral order
* :mod:`~spectral_order.corpus` -- encoded examples with expected values
* :mod:`~spectral_order.cli` -- command line front end
"""

__version__ = "0.1.0"
