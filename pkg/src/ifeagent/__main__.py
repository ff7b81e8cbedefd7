import sys

from ifeagent.harness.cli import main

sys.exit(main())
