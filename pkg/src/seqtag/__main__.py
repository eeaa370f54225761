import sys

from seqtag.cli import main

sys.exit(main())
