from maglab.cli import main
import sys

sys.exit(main())
