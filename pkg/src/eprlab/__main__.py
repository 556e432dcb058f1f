import sys

from eprlab.cli import main

sys.exit(main())
