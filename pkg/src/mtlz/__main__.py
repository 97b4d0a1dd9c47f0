import sys

from mtlz.cli import main

sys.exit(main())
