import sys

from photodetect.main import main

sys.exit(main())
