import sys

from cyclicap.cli import main

sys.exit(main())
