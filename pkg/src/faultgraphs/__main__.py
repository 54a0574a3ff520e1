import sys

from faultgraphs.cli import main

sys.exit(main())
