import sys

from agentplay.cli import main

sys.exit(main())
