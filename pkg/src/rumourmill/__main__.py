import sys

from rumourmill.cli import main

sys.exit(main())
