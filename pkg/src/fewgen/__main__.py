"""Run the fewgen command-line interface with `python -m fewgen`."""

from .cli.main import main

if __name__ == "__main__":
    main()
