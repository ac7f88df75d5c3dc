import sys

from lexsparql.cli import main

sys.exit(main())
