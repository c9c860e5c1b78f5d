"""Allow `python -m scatterlab`."""

from scatterlab.cli import cli

if __name__ == "__main__":
    cli(prog_name="scatterlab")
