"""Check suites, one per subcommand. Importing this package registers them all."""

from . import prequant, spectrum, dirac, pairing, fresnel, szego, bohr  # noqa: F401
