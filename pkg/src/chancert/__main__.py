import sys

from chancert.harness import main

sys.exit(main())
