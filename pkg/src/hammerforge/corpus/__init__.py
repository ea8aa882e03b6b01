"""Bundled development used by the tests and the coverage tooling."""

from importlib import resources


def mini_text() -> str:
    return resources.files(__package__).joinpath("mini.mg").read_text("utf-8")
