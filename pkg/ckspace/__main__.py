import sys

from ckspace.cli import main


sys.exit(main())
