"""Shared fixtures: small hand-built diagrams and cached corpus builds."""

from __future__ import annotations

import functools

import pytest

from spectral_order import corpus
from spectral_order.diagram import Corner, HeegaardDiagram, IntersectionPoint, Region
from spectral_order.floer import parse_generator
from spectral_order.openbook import build_heegaard_diagram


def torus_diagram(basepoints=("R",)) -> HeegaardDiagram:
    """One α and one β meeting once on a torus: a single square region."""
    pts = [IntersectionPoint("p", 0, 0, 1)]
    square = Region("R", ((Corner("p", 1), Corner("p", 2), Corner("p", 3), Corner("p", 4)),))
    return HeegaardDiagram(1, pts, [["p"]], [["p"]], [square], list(basepoints), name="torus")


@functools.lru_cache(maxsize=None)
def built(name: str):
    """Build-result for a named open book (cached across the session)."""
    obs = {
        "trivial-annulus": corpus._trivial_annulus,
        "tight-annulus": lambda: corpus._twisted_annulus(1),
        "overtwisted-annulus": lambda: corpus._twisted_annulus(-1),
        "family-1-2": lambda: corpus.planar_family(1, 2),
        "family-2-3": lambda: corpus.planar_family(2, 3),
        "family-3-4": lambda: corpus.planar_family(3, 4),
    }
    return build_heegaard_diagram(obs[name]())


@functools.lru_cache(maxsize=None)
def _finger():
    return corpus.finger_diagram()


@pytest.fixture
def torus():
    return torus_diagram()


@pytest.fixture
def finger():
    return _finger()


@pytest.fixture
def finger_gens(finger):
    gens = {k: parse_generator(finger, v) for k, v in corpus.FINGER_GENERATORS.items()}
    gens["x"] = parse_generator(finger, list(finger.contact))
    return gens


@pytest.fixture
def family23():
    return built("family-2-3")
