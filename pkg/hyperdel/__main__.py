import sys

from hyperdel.main import main

sys.exit(main())
