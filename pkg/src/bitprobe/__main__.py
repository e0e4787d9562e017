import sys

from bitprobe.cli import main

sys.exit(main())
