# main.py
from scripts.tenshull_cli import main

if __name__ == "__main__":
    main()
