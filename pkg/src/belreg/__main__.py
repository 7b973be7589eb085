import sys

from belreg.cli import main

sys.exit(main())
