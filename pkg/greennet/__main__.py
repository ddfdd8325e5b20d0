import sys

from greennet.main import main

sys.exit(main())
