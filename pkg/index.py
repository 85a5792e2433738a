# Entry point for `python index.py ...`: runs the hochschild CLI
import sys

from hochschild.main import main

if __name__ == "__main__":
    sys.exit(main())
