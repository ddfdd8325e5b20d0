#!/usr/bin/env python3
"""
Simple script to run the GreenNet command line locally
"""
import sys

if __name__ == "__main__":
    # Load environment variables from .env file if it exists
    try:
        from dotenv import load_dotenv
        load_dotenv()
    except ImportError:
        pass

    from greennet.main import main

    sys.exit(main())
