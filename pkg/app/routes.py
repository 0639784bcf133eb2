"""Subcommand routes: each check suite registers itself under its CLI name."""

from dataclasses import dataclass
from typing import Callable, Dict, List

SUITE_ORDER = ['prequant', 'spectrum', 'dirac', 'pairing', 'fresnel', 'szego', 'bohr']


@dataclass(frozen=True)
class Route:
    name: str
    help: str
    add_arguments: Callable
    run: Callable


_routes: Dict[str, Route] = {}


def route(name: str, add_arguments: Callable, help: str = ""):
    """Register a suite's ``run(args, state)`` under ``name``."""
    def decorator(run):
        _routes[name] = Route(name=name, help=help, add_arguments=add_arguments, run=run)
        return run
    return decorator


def get_route(name: str) -> Route:
    load_suites()
    if name not in _routes:
        raise KeyError(f"unknown suite {name!r}")
    return _routes[name]


def all_routes() -> List[Route]:
    """Registered suites in fixed order."""
    load_suites()
    return [_routes[name] for name in SUITE_ORDER if name in _routes]


def load_suites():
    # importing the package registers every suite
    import suites  # noqa: F401
