import sys

from .speedlab.cli import main

sys.exit(main())
