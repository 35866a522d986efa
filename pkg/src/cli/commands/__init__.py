from . import capacity, conjecture, energy, generate, matrix, minimize, repulsion

# subcommand modules, in help order
COMMANDS = (generate, minimize, repulsion, energy, matrix, conjecture, capacity)

__all__ = ["COMMANDS"]
