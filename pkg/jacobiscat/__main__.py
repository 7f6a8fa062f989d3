import sys

from jacobiscat.cli import main

sys.exit(main())
