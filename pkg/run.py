import sys

from phkit.cli import main

if __name__ == "__main__":
    sys.exit(main())
