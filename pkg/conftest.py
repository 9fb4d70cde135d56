# keeps the repository root importable when pytest runs from any directory
