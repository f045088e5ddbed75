from qwalk.cli.app import run

__all__ = ["run"]
