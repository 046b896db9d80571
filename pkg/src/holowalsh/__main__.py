import sys

from holowalsh.cli import main

sys.exit(main())
