"""Shared rings and modules for the tests."""

from gradedreg.suites import fixture_module, quotient, ring


def xy(cap=14):
    return ring(2, "xy", ("x*y",), cap)


def cube(cap=14):
    return ring(2, "x", ("x^3",), cap)


def plane(cap=14):
    return ring(2, "xy", (), cap)


def quad(cap=14):
    return ring(2, "xy", ("x^2", "x*y", "y^2"), cap)


def path(cap=14):
    return ring(2, "xyz", ("x*y", "y*z"), cap)


__all__ = ["xy", "cube", "plane", "quad", "path", "fixture_module", "quotient", "ring"]
