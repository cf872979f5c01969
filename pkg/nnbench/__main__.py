# nnbench/__main__.py
from .main import main

if __name__ == "__main__":
    main()
